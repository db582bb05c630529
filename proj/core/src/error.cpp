#include "relaycast/error.hpp"

namespace relaycast {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::root_not_bracketed: return "root_not_bracketed";
    case ErrorCode::integration_failed: return "integration_failed";
    case ErrorCode::infeasible_power_budget: return "infeasible_power_budget";
    case ErrorCode::boundary_condition_unsolvable: return "boundary_condition_unsolvable";
    case ErrorCode::allocation_outside_growth_region: return "allocation_outside_growth_region";
    case ErrorCode::relay_interval_collapse: return "relay_interval_collapse";
    case ErrorCode::parametric_family_mismatch: return "parametric_family_mismatch";
    case ErrorCode::closed_form_out_of_domain: return "closed_form_out_of_domain";
    case ErrorCode::profile_failed: return "profile_failed";
    case ErrorCode::invalid_table: return "invalid_table";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

IntegrationError::IntegrationError(double estimate, double error_bound, const std::string& detail)
    : Error(ErrorCode::integration_failed, detail), estimate_(estimate), error_bound_(error_bound) {}

}  // namespace relaycast
