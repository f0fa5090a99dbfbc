#pragma once

#include <stdexcept>
#include <string>

namespace nclab {

enum class ErrorKind {
  mixed_kind,         // Cayley and selfadjoint letters where one kind is required
  slot_out_of_range,
  arity_mismatch,
  duplicate_family,
  foreign_family,     // a letter outside the family set an operation accepts
  degree_cap,
  term_cap,
  insufficient_depth,
  quadrature,
  size_mismatch,
  size_cap,
  singular,
  non_convergence,
  invalid_argument,
  degenerate_fit,
  sanity_check,
  unsupported,
  parse,
  io
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::mixed_kind: return "mixed-kind";
    case ErrorKind::slot_out_of_range: return "slot-out-of-range";
    case ErrorKind::arity_mismatch: return "arity-mismatch";
    case ErrorKind::duplicate_family: return "duplicate-family";
    case ErrorKind::foreign_family: return "foreign-family";
    case ErrorKind::degree_cap: return "degree-cap";
    case ErrorKind::term_cap: return "term-cap";
    case ErrorKind::insufficient_depth: return "insufficient-depth";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::size_cap: return "size-cap";
    case ErrorKind::singular: return "singular";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
    case ErrorKind::sanity_check: return "sanity-check";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Resource caps (term counts, matrix sizes, degrees) as opposed to bad input.
  bool is_resource_cap() const noexcept {
    return kind_ == ErrorKind::term_cap || kind_ == ErrorKind::size_cap ||
           kind_ == ErrorKind::degree_cap;
  }

 private:
  ErrorKind kind_;
};

}  // namespace nclab
