#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace simplygen {

enum class ErrorCode {
  invalid_argument,
  boundary_evaluation_imprecise,
  capacity_exceeded,
  rho_required,
  empty_support,
  invalid_degree_sequence,
  rational_unavailable,
  infeasible_allocation,
  prefix_incompatible,
  acceptance_too_low,
  not_tree_mode,
  parse_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::boundary_evaluation_imprecise: return "boundary-evaluation-imprecise";
    case ErrorCode::capacity_exceeded: return "capacity-exceeded";
    case ErrorCode::rho_required: return "rho-required";
    case ErrorCode::empty_support: return "empty-support";
    case ErrorCode::invalid_degree_sequence: return "invalid-degree-sequence";
    case ErrorCode::rational_unavailable: return "rational-unavailable";
    case ErrorCode::infeasible_allocation: return "infeasible-allocation";
    case ErrorCode::prefix_incompatible: return "prefix-incompatible";
    case ErrorCode::acceptance_too_low: return "acceptance-too-low";
    case ErrorCode::not_tree_mode: return "not-tree-mode";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a series at its radius of convergence cannot be pinned down to
// the requested tolerance. Partial sums of nonnegative terms are lower bounds.
class BoundaryImprecise : public Error {
 public:
  BoundaryImprecise(double estimate, double lower_bound, double error_estimate)
      : Error(ErrorCode::boundary_evaluation_imprecise,
              "series at the radius of convergence did not reach tolerance (estimate " +
                  std::to_string(estimate) + ", error ~" + std::to_string(error_estimate) + ")"),
        estimate_(estimate),
        lower_bound_(lower_bound),
        error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double lower_bound() const noexcept { return lower_bound_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double lower_bound_;
  double error_estimate_;
};

class InvalidDegreeSequence : public Error {
 public:
  InvalidDegreeSequence(std::size_t index, const std::string& what)
      : Error(ErrorCode::invalid_degree_sequence, what), index_(index) {}

  // 1-based position of the first prefix that violates the tree condition
  // (or the sequence length when only the total is wrong).
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace simplygen
