#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace holoflow {

using complex = std::complex<double>;

enum class ErrorCode {
  parse,
  pole,
  degenerate,
  non_finite,
  parameter_domain,
  inversion_failure,
  domain_escape,
  step_limit,
  non_convergence,
  not_self_map,
  overflow,
  unsupported_space,
  template_violation,
  classification_mismatch,
  wrong_regime,
  invalid_spec,
  eigensolver,
  missing_assertion,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::pole: return "pole";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::parameter_domain: return "parameter_domain";
    case ErrorCode::inversion_failure: return "inversion_failure";
    case ErrorCode::domain_escape: return "domain_escape";
    case ErrorCode::step_limit: return "step_limit";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::not_self_map: return "not_self_map";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::unsupported_space: return "unsupported_space";
    case ErrorCode::template_violation: return "template_violation";
    case ErrorCode::classification_mismatch: return "classification_mismatch";
    case ErrorCode::wrong_regime: return "wrong_regime";
    case ErrorCode::invalid_spec: return "invalid_spec";
    case ErrorCode::eigensolver: return "eigensolver";
    case ErrorCode::missing_assertion: return "missing_assertion";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. The code names
/// the violated contract; the message carries the located witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the expression parser and the JSON spec readers.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::parse, format(what, line, column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

namespace detail {

inline bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::string fmt_complex(complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
  return buf;
}

}  // namespace detail

}  // namespace holoflow
