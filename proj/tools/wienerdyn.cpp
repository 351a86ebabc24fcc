// wienerdyn: command-line front end.
//
// Exit codes: 0 pass, 1 statistical or structural test failure, 2 input error.

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wienerdyn/config.hpp"
#include "wienerdyn/gamma.hpp"
#include "wienerdyn/harness.hpp"
#include "wienerdyn/io.hpp"
#include "wienerdyn/manifest.hpp"
#include "wienerdyn/report.hpp"
#include "wienerdyn/rotation.hpp"
#include "wienerdyn/shift.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wienerdyn;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_input = 2;

struct Globals {
  std::uint64_t seed = 20240607;
  int m = 64;
  std::size_t paths = 10000;
  unsigned workers = 0;
  std::string out = "wienerdyn-out";
  std::string config;
};

struct TransformOpts {
  std::string transform = "identity";
  std::string file;
  double angle = 1.0;
  double chaos_scale = 0.5;
};

using AnyMap = std::variant<IdentityMap, KernelShiftMap, ChaosShiftMap, RotationOp, BasisShift>;

class Run {
 public:
  Run(const Globals& g, std::string command) : g_(g), dir_(g.out) {
    manifest_.master_seed = g.seed;
    manifest_.m = g.m;
    manifest_.paths = g.paths;
    manifest_.command = std::move(command);
    fs::create_directories(dir_);
  }

  McConfig mc() const { return {g_.seed, g_.paths, g_.workers}; }
  json& config() { return manifest_.config; }
  void set_m(int m) { manifest_.m = m; }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    auto out = io::open_output((dir_ / name).string());
    writer(out);
    manifest_.outputs.emplace_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  void finish() const { manifest_.write(dir_); }

 private:
  Globals g_;
  fs::path dir_;
  RunManifest manifest_;
};

void write_reports_csv(std::ostream& o, const std::vector<StatReport>& rs) {
  o << "test,statistic,reference,standard_error,z,threshold,alpha,pass,seed,samples\n";
  for (const auto& r : rs)
    o << r.test << ',' << io::format_double(r.statistic) << ',' << io::format_double(r.reference) << ','
      << io::format_double(r.standard_error) << ',' << io::format_double(r.z) << ','
      << io::format_double(r.threshold) << ',' << io::format_double(r.alpha) << ',' << (r.pass ? 1 : 0)
      << ',' << r.seed << ',' << r.samples << '\n';
}

Kernel2 unit_reflection(Grid g) { return Kernel2::reflection(HVector::constant(g, 1.0)); }

Kernel2 load_kernel(const std::string& file, const std::string& name, Grid g) {
  if (!file.empty()) return io::read_kernel_csv(file);
  if (name == "reflection") return unit_reflection(g);
  if (name == "zero") return Kernel2::zero(g);
  throw std::invalid_argument("unknown kernel '" + name + "' (use --in FILE, reflection or zero)");
}

/// Every transform except chaos2 and basis-shift is orthogonal in
/// coordinates and so also available as a RotationOp.
std::optional<RotationOp> as_rotation(const TransformOpts& t, Grid g) {
  const int m = g.size();
  if (t.transform == "identity") return RotationOp::from_matrix(Eigen::MatrixXd::Identity(m, m));
  if (t.transform == "planar") return RotationOp::from_matrix(planar_rotation_matrix(m, t.angle));
  if (t.transform == "cyclic") return RotationOp::from_matrix(cyclic_rotation_matrix(m));
  if (t.transform == "rotation") return RotationOp::from_matrix(io::read_operator_csv(t.file));
  if (t.transform == "reflection" || t.transform == "kernel") {
    const Kernel2 K = t.transform == "kernel" ? io::read_kernel_csv(t.file) : unit_reflection(g);
    return RotationOp::from_matrix(Eigen::MatrixXd::Identity(K.grid.size(), K.grid.size()) +
                                   K.operator_matrix());
  }
  return std::nullopt;
}

AnyMap build_map(const TransformOpts& t, Grid g) {
  if (t.transform == "identity") return IdentityMap(g.size());
  if (t.transform == "basis-shift") return BasisShift(g.size());
  if (t.transform == "chaos2") {
    const HVector h = HVector::constant(g, 1.0);
    return ChaosShiftMap({ChaosKernel(2, t.chaos_scale * h, h)}, g);
  }
  if (t.transform == "reflection") return KernelShiftMap(unit_reflection(g));
  if (t.transform == "kernel") return KernelShiftMap(io::read_kernel_csv(t.file));
  if (auto R = as_rotation(t, g)) return *R;
  throw std::invalid_argument("unknown transform '" + t.transform + "'");
}

/// The grid a transform lives on: file-backed transforms dictate m.
Grid transform_grid(const TransformOpts& t, int m) {
  if (t.transform == "kernel") return io::read_kernel_csv(t.file).grid;
  if (t.transform == "rotation") return Grid(static_cast<int>(io::read_operator_csv(t.file).rows()));
  return Grid(m);
}

json transform_json(const TransformOpts& t) {
  json j{{"transform", t.transform}};
  if (!t.file.empty()) j["file"] = t.file;
  if (t.transform == "planar") j["angle"] = t.angle;
  if (t.transform == "chaos2") j["chaos_scale"] = t.chaos_scale;
  return j;
}

void add_transform_options(CLI::App* sub, TransformOpts& t) {
  sub->add_option("--transform", t.transform,
                  "identity | reflection | chaos2 | planar | cyclic | basis-shift | kernel | rotation")
      ->check(CLI::IsMember({"identity", "reflection", "chaos2", "planar", "cyclic", "basis-shift",
                             "kernel", "rotation"}));
  sub->add_option("--file", t.file, "CSV file for --transform kernel or rotation");
  sub->add_option("--angle", t.angle, "rotation angle of --transform planar (radians)");
  sub->add_option("--chaos-scale", t.chaos_scale, "amplitude of the order-2 chaos shift");
}

void require_file(const TransformOpts& t) {
  if ((t.transform == "kernel" || t.transform == "rotation") && t.file.empty())
    throw std::invalid_argument("--transform " + t.transform + " needs --file");
}

HVector probe_or_default(const std::string& file, Grid g) {
  if (file.empty()) return HVector::basis(g, 0);
  HVector h = io::read_hvector_csv(file);
  require_same_grid(g, h.grid, "probe");
  return h;
}

// ---------------------------------------------------------------------------

int cmd_check_kernel(Run& run, const std::string& in, double tol) {
  const Kernel2 K = io::read_kernel_csv(in);
  run.set_m(K.grid.size());
  run.config() = {{"in", in}, {"tol", tol}};
  const ShiftReport rep = check_unitary_shift(K, tol);
  const Det2 d = carleman_det2(K);
  const double hs = hs_norm(K);
  json j = to_json(rep);
  j["verdict"] = rep.is_unitary ? "UNITARY" : "NOT-UNITARY";
  j["hs_norm"] = hs;
  j["det2"] = to_json(d);
  j["det2_identity_residual"] = d.log_modulus - 0.5 * hs * hs;
  run.write_json("check.json", j);
  std::cout << j.dump(2) << '\n';
  return rep.is_unitary ? exit_pass : exit_fail;
}

int cmd_apply_shift(Run& run, const Globals& g, const std::string& in, const std::string& kernel,
                    const std::string& path_file) {
  const Kernel2 K = load_kernel(in, kernel, Grid(g.m));
  run.set_m(K.grid.size());
  run.config() = {{"in", in}, {"kernel", in.empty() ? kernel : "file"}, {"path", path_file}};
  Path p = [&] {
    if (!path_file.empty()) {
      auto f = io::open_input(path_file);
      return io::read_path_csv(f);
    }
    RandomStream rng(g.seed, StreamKind::paths, 0);
    return sample_wiener(K.grid, rng);
  }();
  require_same_grid(K.grid, p.grid, "apply-shift");
  const Path y = apply_shift(K, p);
  run.write("input_path.csv", [&](std::ostream& o) { io::write_path_csv(o, p); });
  run.write("shifted_path.csv", [&](std::ostream& o) { io::write_path_csv(o, y); });
  json j = to_json(check_unitary_shift(K, 1e-10));
  run.write_json("shift.json", j);
  return exit_pass;
}

int cmd_rn_report(Run& run, const Globals& g, const std::string& in, const std::string& kernel) {
  const Kernel2 K = load_kernel(in, kernel, Grid(g.m));
  run.set_m(K.grid.size());
  run.config() = {{"in", in}, {"kernel", in.empty() ? kernel : "file"}};
  const RadonNikodym rn(K);
  std::vector<RadonNikodymReport> reps(g.paths);
  parallel_for(g.paths, [&](std::size_t i) {
    RandomStream rng(g.seed, StreamKind::paths, i);
    reps[i] = rn.evaluate(sample_wiener(K.grid, rng));
  }, g.workers);
  std::vector<double> logs, abs_logs;
  for (const auto& r : reps) {
    logs.push_back(r.log_Lambda);
    abs_logs.push_back(std::abs(r.log_Lambda));
  }
  const double hs = hs_norm(K);
  const double residual = rn.log_det2() - 0.5 * hs * hs;
  const auto s = summarize(logs);
  const bool pass = std::abs(residual) <= 1e-10;
  json j{{"log_det2", rn.log_det2()},
         {"half_hs_norm_squared", 0.5 * hs * hs},
         {"det2_identity_residual", residual},
         {"det2_identity_tol", 1e-10},
         {"mean_log_Lambda", s.mean},
         {"sd_log_Lambda", std::sqrt(s.variance)},
         {"mean_abs_log_Lambda", compensated_mean(abs_logs)},
         {"paths", g.paths},
         {"pass", pass}};
  run.write("rn.csv", [&](std::ostream& o) {
    o << "path,log_det2,stochastic_exponent,log_Lambda\n";
    for (std::size_t i = 0; i < reps.size(); ++i)
      o << i << ',' << io::format_double(reps[i].log_det2) << ','
        << io::format_double(reps[i].stochastic_exponent) << ',' << io::format_double(reps[i].log_Lambda)
        << '\n';
  });
  run.write_json("rn.json", j);
  std::cout << j.dump(2) << '\n';
  return pass ? exit_pass : exit_fail;
}

int cmd_spectrum(Run& run, const Globals& g, const TransformOpts& t, const std::string& probe) {
  require_file(t);
  const Grid grid = transform_grid(t, g.m);
  run.set_m(grid.size());
  run.config() = transform_json(t);
  run.config()["probe"] = probe;
  auto R = as_rotation(t, grid);
  if (!R) throw std::invalid_argument("spectrum needs an orthogonal transform, not '" + t.transform + "'");
  json j{{"phases", std::vector<double>(R->phases().begin(), R->phases().end())}};
  if (t.transform == "reflection" || t.transform == "kernel") {
    const Kernel2 K = t.transform == "kernel" ? io::read_kernel_csv(t.file) : unit_reflection(grid);
    j["kernel_eigenvalues"] = complex_vector_json(kernel_spectrum(K));
  }
  std::vector<HVector> probes = probe.empty() ? default_probes(grid) : std::vector{probe_or_default(probe, grid)};
  json measures = json::array();
  for (const auto& h : probes) measures.push_back(to_json(spectral_measure(*R, h)));
  j["probes"] = measures;
  run.write_json("spectrum.json", j);
  std::cout << j.dump(2) << '\n';
  return exit_pass;
}

int cmd_classify(Run& run, const Globals& g, TransformOpts t, const std::string& op, double atom_tol,
                 int horizon) {
  if (!op.empty()) {
    t.transform = "rotation";
    t.file = op;
  }
  require_file(t);
  const Grid grid = transform_grid(t, g.m);
  run.set_m(grid.size());
  run.config() = transform_json(t);
  run.config()["atom_tol"] = atom_tol;
  run.config()["horizon"] = horizon;
  Classification c;
  if (t.transform == "basis-shift") {
    std::vector<HVector> probes;
    for (int i = 0; i < grid.size(); ++i) probes.push_back(HVector::basis(grid, i));
    c = classify(BasisShift(grid.size()), probes, horizon);
  } else if (auto R = as_rotation(t, grid)) {
    c = classify(*R, coordinate_probes(grid), atom_tol);
  } else {
    throw std::invalid_argument("classify does not support '" + t.transform + "'");
  }
  json j = to_json(c);
  run.write_json("classification.json", j);
  std::cout << j.dump(2) << '\n';
  return exit_pass;
}

int cmd_mixing(Run& run, const Globals& g, const TransformOpts& t, const std::string& probe, int nmax,
               double z_threshold) {
  require_file(t);
  const Grid grid = transform_grid(t, g.m);
  run.set_m(grid.size());
  run.config() = transform_json(t);
  run.config()["probe"] = probe;
  run.config()["nmax"] = nmax;
  run.config()["z_threshold"] = z_threshold;
  const HVector h = probe_or_default(probe, grid);
  const AnyMap map = build_map(t, grid);
  const MixingStudy st = std::visit(
      [&](const auto& mp) { return mixing_decay_study(mp, h, nmax, run.mc(), z_threshold); }, map);
  run.write("mixing.csv", [&](std::ostream& o) {
    o << "n,analytic,monte_carlo,standard_error,z\n";
    for (int n = 0; n <= nmax; ++n) {
      const std::size_t k = static_cast<std::size_t>(n);
      o << n << ',' << (st.series.analytic.empty() ? "" : io::format_double(st.series.analytic[k])) << ','
        << io::format_double(st.series.monte_carlo[k]) << ','
        << io::format_double(st.series.standard_error[k]) << ',' << io::format_double(st.lags[k].z) << '\n';
    }
  });
  json j = to_json(st);
  run.write_json("mixing.json", j);
  std::cout << "mixing: " << (st.pass ? "PASS" : "FAIL") << '\n';
  return st.pass ? exit_pass : exit_fail;
}

int cmd_gaussianity(Run& run, const Globals& g, const TransformOpts& t, double alpha) {
  require_file(t);
  const Grid grid = transform_grid(t, g.m);
  run.set_m(grid.size());
  run.config() = transform_json(t);
  run.config()["alpha"] = alpha;
  const AnyMap map = build_map(t, grid);
  const auto reports =
      std::visit([&](const auto& mp) { return gaussianity_suite(mp, grid, run.mc(), alpha); }, map);
  run.write("gaussianity.csv", [&](std::ostream& o) { write_reports_csv(o, reports); });
  const bool pass = all_pass(reports);
  json j{{"pass", pass}, {"alpha", alpha}, {"reports", to_json(reports)}};
  run.write_json("gaussianity.json", j);
  for (const auto& r : reports)
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.test << " z=" << r.z << '\n';
  return pass ? exit_pass : exit_fail;
}

int cmd_birkhoff(Run& run, const Globals& g, const TransformOpts& t, const std::string& observable,
                 const std::string& probe, int steps) {
  require_file(t);
  const Grid grid = transform_grid(t, g.m);
  run.set_m(grid.size());
  run.config() = transform_json(t);
  run.config()["observable"] = observable;
  run.config()["probe"] = probe;
  run.config()["steps"] = steps;
  const HVector h = probe_or_default(probe, grid);
  const AnyMap map = build_map(t, grid);
  ErgodicStudy st;
  if (observable == "wick") {
    auto rho = wick_observable(h);
    st = std::visit([&](const auto& mp) { return ergodic_average_study(mp, rho, steps, run.mc()); }, map);
  } else if (observable == "witness") {
    auto R = as_rotation(t, grid);
    if (!R) throw std::invalid_argument("--observable witness needs an orthogonal transform");
    const Classification c = classify(*R, coordinate_probes(grid));
    if (!c.witness) throw no_witness_error("no spectral atom to build a witness from");
    const InvariantWitness w = *c.witness;
    auto F = [&w](const Eigen::VectorXd& x) { return w.evaluate(x); };
    st = std::visit([&](const auto& mp) { return ergodic_average_study(mp, F, steps, run.mc()); }, map);
  } else {
    const Eigen::VectorXd c = h.coordinates();
    auto F = [&c](const Eigen::VectorXd& x) { return c.dot(x); };
    st = std::visit([&](const auto& mp) { return ergodic_average_study(mp, F, steps, run.mc()); }, map);
  }
  json j = to_json(st);
  run.write_json("birkhoff.json", j);
  std::cout << "birkhoff: " << to_string(st.verdict) << " ratio=" << st.report.statistic << '\n';
  return exit_pass;
}

int cmd_gamma(Run& run, const Globals& g, const std::string& family, int n, const std::string& in,
              double turns, int bins) {
  GammaProcess G = [&] {
    if (!in.empty()) {
      auto f = io::open_input(in);
      auto blocks = io::read_gamma_csv(f);
      const int m = static_cast<int>(blocks.size());
      return build_gamma(Grid(m), std::move(blocks));
    }
    const Grid grid(g.m);
    if (family == "constant") return gamma_constant(grid, Eigen::MatrixXd::Identity(n, n));
    if (family == "sweep") return gamma_sweep(grid, n, turns);
    if (family == "piecewise") {
      using std::numbers::pi;
      return gamma_piecewise(grid, {{0.5, planar_rotation_matrix(n, pi / 3)},
                                    {1.0, planar_rotation_matrix(n, pi / 2)}});
    }
    RandomStream rng(g.seed, StreamKind::gamma, 0);
    if (family == "random-haar") return gamma_random_haar(grid, n, rng);
    return gamma_random_flow(grid, n, rng);
  }();
  run.set_m(G.grid.size());
  run.config() = {{"family", in.empty() ? family : "file"}, {"in", in}, {"n", G.n}, {"turns", turns},
                  {"bins", bins}};
  const double resolution = two_pi / bins;
  const GammaVerdict v = gamma_ergodicity(G, -1.0, resolution);
  json levels = json::array();
  for (int j = 0; j < G.n; ++j) {
    const LevelDistribution L = level_distribution(G, j, resolution);
    run.write("level_" + std::to_string(j + 1) + ".csv",
              [&](std::ostream& o) { io::write_level_distribution_csv(o, L); });
    levels.push_back(to_json(L));
  }
  const Eigen::MatrixXd unit = Eigen::MatrixXd::Constant(G.grid.size(), G.n, 1.0 / std::sqrt(G.n));
  json pi_theta = json::array();
  for (int k = 1; k <= 8; ++k) {
    const double theta = two_pi * k / 8.0;
    pi_theta.push_back({{"theta", theta}, {"value", pi_theta_norm(G, unit, theta)}});
  }
  json j = to_json(v);
  j["levels"] = levels;
  j["pi_theta_norm"] = pi_theta;
  run.write("gamma.csv", [&](std::ostream& o) { io::write_gamma_csv(o, G); });
  run.write_json("gamma.json", j);
  std::cout << "gamma: " << to_string(v.verdict) << '\n';
  return exit_pass;
}

void apply_config(const Config& cfg, Globals& g, const CLI::App& app) {
  static const std::set<std::string> known{"seed", "m", "paths", "workers", "out"};
  for (const auto& [section, body] : cfg.tree()) {
    if (section != "run")
      throw parse_error("unknown section '" + section + "'", 0, section);
    for (const auto& kv : body)
      if (!known.count(kv.first)) throw parse_error("unknown field 'run." + kv.first + "'", 0, "run." + kv.first);
  }
  if (!app.count("--seed")) g.seed = cfg.get_or<std::uint64_t>("run.seed", g.seed);
  if (!app.count("--m")) g.m = cfg.get_or<int>("run.m", g.m);
  if (!app.count("--paths")) g.paths = cfg.get_or<std::size_t>("run.paths", g.paths);
  if (!app.count("--workers")) g.workers = cfg.get_or<unsigned>("run.workers", g.workers);
  if (!app.count("--out")) g.out = cfg.get_or<std::string>("run.out", g.out);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Measure preserving transformations of discretized Wiener space"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--m", g.m, "grid size")->check(CLI::Range(2, 1 << 16));
  app.add_option("--paths", g.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
  app.add_option("--workers", g.workers, "worker threads (0: all cores); results do not depend on it");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "INI file with a [run] section");

  std::string in, kernel = "reflection", path_file, probe, op, family = "sweep", observable = "wick";
  double tol = 1e-10, alpha = 0.01, atom_tol = 1e-6, z_threshold = 3.0, turns = 1.0;
  int nmax = 50, horizon = 16, steps = 100, n = 2, bins = 512;
  TransformOpts t;

  auto* check = app.add_subcommand("check-kernel", "verify the unitary kernel condition");
  check->add_option("--in", in, "kernel CSV")->required();
  check->add_option("--tol", tol, "tolerance");

  auto* shift = app.add_subcommand("apply-shift", "shift a path by a kernel");
  shift->add_option("--in", in, "kernel CSV");
  shift->add_option("--kernel", kernel, "built-in kernel when --in is absent (reflection, zero)");
  shift->add_option("--path", path_file, "input path CSV (t,w); sampled when absent");

  auto* rn = app.add_subcommand("rn-report", "pathwise log Radon-Nikodym density of a kernel shift");
  rn->add_option("--in", in, "kernel CSV");
  rn->add_option("--kernel", kernel, "built-in kernel when --in is absent (reflection, zero)");

  auto* spectrum = app.add_subcommand("spectrum", "eigenphases and spectral measures");
  add_transform_options(spectrum, t);
  spectrum->add_option("--probe", probe, "H-vector CSV; default probe set when absent");

  auto* cls = app.add_subcommand("classify", "ergodic classification");
  add_transform_options(cls, t);
  cls->add_option("--op", op, "operator CSV (shorthand for --transform rotation --file)");
  cls->add_option("--atom-tol", atom_tol, "atom weight threshold");
  cls->add_option("--horizon", horizon, "autocorrelation horizon for the basis shift");

  auto* mixing = app.add_subcommand("mixing", "correlation decay of Wick exponentials");
  add_transform_options(mixing, t);
  mixing->add_option("--probe", probe, "H-vector CSV; e_1 when absent");
  mixing->add_option("--nmax", nmax, "largest lag")->check(CLI::NonNegativeNumber);
  mixing->add_option("--z", z_threshold, "per-lag z threshold");

  auto* gamma = app.add_subcommand("gamma", "time-modulated integrator dY = gamma(t) dW");
  gamma->add_option("--family", family, "constant | sweep | piecewise | random-haar | random-flow")
      ->check(CLI::IsMember({"constant", "sweep", "piecewise", "random-haar", "random-flow"}));
  gamma->add_option("--n", n, "dimension")->check(CLI::Range(1, 8));
  gamma->add_option("--in", in, "stacked n x n blocks CSV (header n, m)");
  gamma->add_option("--turns", turns, "turns of the sweep family");
  gamma->add_option("--bins", bins, "theta bins on (0, 2pi]")->check(CLI::Range(8, 1 << 20));

  auto* gauss = app.add_subcommand("gaussianity", "Gaussianity test battery");
  add_transform_options(gauss, t);
  gauss->add_option("--alpha", alpha, "family-wise level")->check(CLI::Range(1e-12, 0.5));

  auto* birk = app.add_subcommand("birkhoff", "spread of Birkhoff averages");
  add_transform_options(birk, t);
  birk->add_option("--observable", observable, "wick | witness | linear")
      ->check(CLI::IsMember({"wick", "witness", "linear"}));
  birk->add_option("--probe", probe, "H-vector CSV; e_1 when absent");
  birk->add_option("--steps", steps, "orbit length N")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (!g.config.empty()) apply_config(Config::load(g.config), g, app);
    const std::string name = app.get_subcommands().front()->get_name();
    Run run(g, name);
    int code = exit_input;
    if (check->parsed()) code = cmd_check_kernel(run, in, tol);
    else if (shift->parsed()) code = cmd_apply_shift(run, g, in, kernel, path_file);
    else if (rn->parsed()) code = cmd_rn_report(run, g, in, kernel);
    else if (spectrum->parsed()) code = cmd_spectrum(run, g, t, probe);
    else if (cls->parsed()) code = cmd_classify(run, g, t, op, atom_tol, horizon);
    else if (mixing->parsed()) code = cmd_mixing(run, g, t, probe, nmax, z_threshold);
    else if (gamma->parsed()) code = cmd_gamma(run, g, family, n, in, turns, bins);
    else if (gauss->parsed()) code = cmd_gaussianity(run, g, t, alpha);
    else if (birk->parsed()) code = cmd_birkhoff(run, g, t, observable, probe, steps);
    run.finish();
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
