#pragma once

/// @file
/// Exception types shared by the library. Input problems derive from
/// std::invalid_argument, violated mathematical preconditions from
/// std::domain_error.

#include <stdexcept>
#include <string>

namespace wienerdyn {

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct unsupported_order_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct degenerate_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct rank_deficient_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// -1 is (numerically) an eigenvalue of the shift kernel.
struct singular_shift_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct precondition_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct no_witness_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A matrix expected to be orthogonal failed the check; carries the residual.
struct not_unitary_error : std::domain_error {
  not_unitary_error(const std::string& what, double residual)
      : std::domain_error(what), residual(residual) {}
  double residual;
};

/// Malformed input file or config; line is 1-based, 0 when unknown.
struct parse_error : std::runtime_error {
  parse_error(const std::string& what, int line = 0, std::string field = {})
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line(line),
        field(std::move(field)) {}
  int line;
  std::string field;
};

}  // namespace wienerdyn
