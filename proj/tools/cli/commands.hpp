#pragma once

#include <iosfwd>

#include "scenario.hpp"

namespace relaycast::cli {

/// G profile CSV, then `# p_r=...,B=...,rms=...` and `# growth_region=lo,hi`.
void cmd_second_hop(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// End-to-end layer table and summary for one (pt, pr, b).
void cmd_e2e(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// `pr_db,b,distortion,x1,x2` per sweep point; optional equivalent channel CSV.
void cmd_af(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// `pr_db,b,distortion,gamma0,l0` per sweep point.
void cmd_single_layer(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// `pr_db,b,df_multilayer,af,single_layer`; failed cells stay empty.
void cmd_compare(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

/// Parametric fit of each sweep point's profile:
/// `pr_db,b,p_r,B,rms_rel,g_offset,closed_form_rms,active_points`.
void cmd_fit_report(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

}  // namespace relaycast::cli
