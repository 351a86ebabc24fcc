#pragma once

/// @file
/// CSV and JSON I/O for kernels, vectors, operators, paths and gamma blocks.
///
/// Matrix CSV: a header line "# key=value ..." (m for kernels/operators,
/// n and m for gamma blocks) followed by comma separated rows. Values are
/// written with 17 significant digits, which round-trips doubles exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "errors.hpp"
#include "gamma.hpp"
#include "gaussian.hpp"
#include "grid.hpp"

namespace wienerdyn::io {

using Header = std::map<std::string, std::string>;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double parse_double(std::string_view s, int line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw parse_error("not a number: '" + std::string(s) + "'", line);
  return v;
}

inline Header parse_header(const std::string& text, int line) {
  if (text.rfind('#', 0) != 0) throw parse_error("expected header line '# key=value ...'", line);
  Header h;
  std::istringstream ss(text.substr(1));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw parse_error("malformed header token '" + tok + "'", line, tok);
    h[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return h;
}

inline int header_int(const Header& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw parse_error("header is missing '" + key + "'", 1, key);
  int v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0)
    throw parse_error("header field '" + key + "' must be a positive integer", 1, key);
  return v;
}

}  // namespace detail

struct MatrixFile {
  Header header;
  Eigen::MatrixXd values;
};

inline MatrixFile read_matrix_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line != "\r") break;
  }
  if (lineno == 0 || line.empty()) throw parse_error("empty matrix file");
  MatrixFile f;
  f.header = detail::parse_header(line, lineno);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      row.push_back(detail::parse_double(std::string_view(line).substr(pos, comma - pos), lineno));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw parse_error("row has " + std::to_string(row.size()) + " columns, expected " +
                            std::to_string(rows.front().size()),
                        lineno);
    rows.push_back(std::move(row));
  }
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  f.values.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) f.values(i, j) = rows[i][j];
  return f;
}

inline void write_matrix_csv(std::ostream& out, const Header& header, const Eigen::MatrixXd& M) {
  out << '#';
  for (const auto& [k, v] : header) out << ' ' << k << '=' << v;
  out << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'", 0, path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Kernels and vectors.

inline Kernel2 read_kernel_csv(std::istream& in) {
  MatrixFile f = read_matrix_csv(in);
  const int m = detail::header_int(f.header, "m");
  if (f.values.rows() != m || f.values.cols() != m)
    throw parse_error("kernel must have m = " + std::to_string(m) + " rows and columns", 0, "m");
  return {Grid(m), std::move(f.values)};
}

inline Kernel2 read_kernel_csv(const std::string& path) {
  auto in = open_input(path);
  return read_kernel_csv(in);
}

inline void write_kernel_csv(std::ostream& out, const Kernel2& K) {
  write_matrix_csv(out, {{"m", std::to_string(K.grid.size())}}, K.k);
}

inline HVector read_hvector_csv(std::istream& in) {
  MatrixFile f = read_matrix_csv(in);
  const int m = detail::header_int(f.header, "m");
  if (f.values.rows() != m || f.values.cols() != 1)
    throw parse_error("vector must have m = " + std::to_string(m) + " single-value rows", 0, "m");
  return {Grid(m), f.values.col(0)};
}

inline HVector read_hvector_csv(const std::string& path) {
  auto in = open_input(path);
  return read_hvector_csv(in);
}

inline void write_hvector_csv(std::ostream& out, const HVector& h) {
  write_matrix_csv(out, {{"m", std::to_string(h.grid.size())}}, h.density);
}

/// Square operator matrix (rotation in coordinates).
inline Eigen::MatrixXd read_operator_csv(const std::string& path) {
  auto in = open_input(path);
  MatrixFile f = read_matrix_csv(in);
  const int m = detail::header_int(f.header, "m");
  if (f.values.rows() != m || f.values.cols() != m)
    throw parse_error("operator must be m x m with m = " + std::to_string(m), 0, "m");
  return f.values;
}

inline void write_operator_csv(std::ostream& out, const Eigen::MatrixXd& A) {
  write_matrix_csv(out, {{"m", std::to_string(A.rows())}}, A);
}

inline nlohmann::json to_json(const Kernel2& K) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < K.k.rows(); ++i) {
    std::vector<double> r(K.k.cols());
    for (Eigen::Index j = 0; j < K.k.cols(); ++j) r[j] = K.k(i, j);
    rows.push_back(r);
  }
  return {{"m", K.grid.size()}, {"kernel", rows}};
}

inline Kernel2 kernel_from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const auto& rows = j.at("kernel");
    if (static_cast<int>(rows.size()) != m) throw parse_error("kernel must have m rows", 0, "kernel");
    Eigen::MatrixXd k(m, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[i].size()) != m) throw parse_error("kernel row has wrong length", 0, "kernel");
      for (int c = 0; c < m; ++c) k(i, c) = rows[i][c].get<double>();
    }
    return {Grid(m), std::move(k)};
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what(), 0, "kernel");
  }
}

inline nlohmann::json to_json(const HVector& h) {
  return {{"m", h.grid.size()},
          {"density", std::vector<double>(h.density.data(), h.density.data() + h.density.size())}};
}

inline HVector hvector_from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const auto d = j.at("density").get<std::vector<double>>();
    if (static_cast<int>(d.size()) != m) throw parse_error("density must have m entries", 0, "density");
    return {Grid(m), Eigen::Map<const Eigen::VectorXd>(d.data(), m)};
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what(), 0, "density");
  }
}

// ---------------------------------------------------------------------------
// Paths, gamma blocks, level distributions.

/// Rows "t,w(t)" for t = t_0..t_m.
inline void write_path_csv(std::ostream& out, const Path& p) {
  out << "t,w\n";
  const Eigen::VectorXd v = p.values();
  for (int i = 0; i <= p.grid.size(); ++i)
    out << format_double(p.grid.time(i)) << ',' << format_double(v[i]) << '\n';
}

inline Path read_path_csv(std::istream& in) {
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line.rfind("t,w", 0) != 0) throw parse_error("expected 't,w' header", 1);
  std::vector<double> w;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw parse_error("expected 't,w' row", lineno);
    w.push_back(detail::parse_double(std::string_view(line).substr(comma + 1), lineno));
  }
  if (w.size() < 3) throw parse_error("path needs at least 3 nodes");
  const int m = static_cast<int>(w.size()) - 1;
  Eigen::VectorXd inc(m);
  for (int i = 0; i < m; ++i) inc[i] = w[i + 1] - w[i];
  return {Grid(m), std::move(inc)};
}

/// n x n blocks stacked vertically, one per interval.
inline std::vector<Eigen::MatrixXd> read_gamma_csv(std::istream& in) {
  MatrixFile f = read_matrix_csv(in);
  const int n = detail::header_int(f.header, "n");
  const int m = detail::header_int(f.header, "m");
  if (f.values.rows() != n * m || f.values.cols() != n)
    throw parse_error("gamma file must hold m blocks of n x n", 0, "n");
  std::vector<Eigen::MatrixXd> blocks;
  for (int i = 0; i < m; ++i) blocks.push_back(f.values.block(i * n, 0, n, n));
  return blocks;
}

inline void write_gamma_csv(std::ostream& out, const GammaProcess& G) {
  Eigen::MatrixXd stacked(G.n * G.grid.size(), G.n);
  for (int i = 0; i < G.grid.size(); ++i) stacked.block(i * G.n, 0, G.n, G.n) = G.samples[i];
  write_matrix_csv(out, {{"m", std::to_string(G.grid.size())}, {"n", std::to_string(G.n)}}, stacked);
}

inline void write_level_distribution_csv(std::ostream& out, const LevelDistribution& L) {
  out << "theta,F\n";
  for (std::size_t b = 0; b < L.thetas.size(); ++b)
    out << format_double(L.thetas[b]) << ',' << format_double(L.F[b]) << '\n';
}

}  // namespace wienerdyn::io
