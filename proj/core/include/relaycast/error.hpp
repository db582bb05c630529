#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relaycast {

enum class ErrorCode {
  domain_error,
  root_not_bracketed,
  integration_failed,
  infeasible_power_budget,
  boundary_condition_unsolvable,
  allocation_outside_growth_region,
  relay_interval_collapse,
  parametric_family_mismatch,
  closed_form_out_of_domain,
  profile_failed,
  invalid_table,
  io_error,
  usage,
};

/// Stable snake_case identifier, used verbatim in CLI error lines.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Thrown when adaptive quadrature exhausts its subdivision budget.
class IntegrationError : public Error {
 public:
  IntegrationError(double estimate, double error_bound, const std::string& detail);

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace relaycast
