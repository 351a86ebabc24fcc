#pragma once

/// @file
/// JSON views of the library's reports.

#include <complex>
#include <vector>

#include "json.hpp"

#include "gamma.hpp"
#include "harness.hpp"
#include "rotation.hpp"
#include "shift.hpp"

namespace wienerdyn {

inline nlohmann::json to_json(const ShiftReport& r) {
  return {{"b2_residual", r.b2_residual},
          {"minus_one_eigen_gap", r.minus_one_eigen_gap},
          {"is_unitary", r.is_unitary},
          {"tol", r.tol}};
}

inline nlohmann::json to_json(const Det2& d) {
  return {{"log_modulus", d.log_modulus}, {"modulus", d.modulus()}, {"phase", d.phase}};
}

inline nlohmann::json to_json(const RadonNikodymReport& r) {
  return {{"log_det2", r.log_det2}, {"stochastic_exponent", r.stochastic_exponent}, {"log_Lambda", r.log_Lambda}};
}

inline nlohmann::json complex_vector_json(const Eigen::VectorXcd& z) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& v : z) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"re", re}, {"im", im}};
}

inline nlohmann::json to_json(const SpectralMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms) atoms.push_back({{"theta", a.theta}, {"weight", a.weight}});
  return {{"atoms", atoms}, {"total", mu.total()}};
}

inline nlohmann::json to_json(const InvariantWitness& w) {
  return {{"observable", "|delta z|"}, {"phase", w.phase}, {"z", complex_vector_json(w.z)}};
}

inline nlohmann::json to_json(const Classification& c) {
  nlohmann::json j{{"verdict", to_string(c.verdict)}, {"note", c.note}, {"heaviest_atom", c.heaviest_atom}};
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& mu : c.probe_measures) probes.push_back(to_json(mu));
  if (!c.probe_measures.empty()) j["probes"] = probes;
  if (!c.probe_autocorrelations.empty()) j["autocorrelations"] = c.probe_autocorrelations;
  if (c.witness) {
    j["invariant_witness"] = to_json(*c.witness);
    j["invariant_witness"]["probe"] = c.witness_probe;
  } else {
    j["invariant_witness"] = nullptr;
  }
  return j;
}

inline nlohmann::json to_json(const StatReport& r) {
  return {{"test", r.test},
          {"statistic", r.statistic},
          {"reference", r.reference},
          {"standard_error", r.standard_error},
          {"z", r.z},
          {"threshold", r.threshold},
          {"alpha", r.alpha},
          {"pass", r.pass},
          {"seed", r.seed},
          {"samples", r.samples}};
}

inline nlohmann::json to_json(const std::vector<StatReport>& rs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

inline nlohmann::json to_json(const ErgodicStudy& s) {
  return {{"verdict", to_string(s.verdict)},
          {"steps", s.steps},
          {"mean_initial", s.mean_initial},
          {"mean_average", s.mean_average},
          {"spread_initial", s.spread_initial},
          {"spread_average", s.spread_average},
          {"report", to_json(s.report)}};
}

inline nlohmann::json to_json(const MixingStudy& s) {
  nlohmann::json j{{"monte_carlo", s.series.monte_carlo},
                   {"standard_error", s.series.standard_error},
                   {"z_threshold", s.z_threshold},
                   {"pass", s.pass},
                   {"lags", to_json(s.lags)}};
  j["analytic"] = s.series.analytic.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.series.analytic);
  return j;
}

inline nlohmann::json to_json(const LevelDistribution& L) {
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& j : L.jumps) jumps.push_back({{"theta", j.theta}, {"size", j.size}});
  return {{"j", L.j}, {"threshold", L.threshold}, {"jumps", jumps}};
}

inline nlohmann::json to_json(const GammaVerdict& v) {
  nlohmann::json off = nlohmann::json::array();
  for (const auto& o : v.offenders) off.push_back({{"j", o.j}, {"theta", o.theta}, {"measure", o.measure}});
  return {{"verdict", to_string(v.verdict)},
          {"offenders", off},
          {"odd_dimension", v.odd_dimension},
          {"corollary_holds", v.corollary_holds},
          {"note", v.note}};
}

}  // namespace wienerdyn
