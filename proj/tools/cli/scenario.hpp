#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace relaycast::cli {

/// Scenario as given on the command line; powers in dB.
struct ScenarioConfig {
  double pt_db = 20.0;
  std::vector<double> pr_db{20.0};
  std::vector<double> b{1.0};
  std::string hop1_dist = "rayleigh";
  std::string hop2_dist = "rayleigh";
  std::size_t grid = 120;
  std::string out;
  std::string svg;
  std::string channel;
};

/// P = 10^(dB/10).
double db_to_linear(double db);

/// "v" or inclusive "lo:hi:step".
std::vector<double> parse_range(const std::string& text);

/// Comma-separated list of positive reals.
std::vector<double> parse_b_list(const std::string& text);

/// Turns `key=value` lines into `--key value` arguments. Blank lines and
/// lines starting with '#' are ignored.
std::vector<std::string> read_config_file(const std::filesystem::path& path);

}  // namespace relaycast::cli
