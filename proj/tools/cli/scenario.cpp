#include "scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "relaycast/error.hpp"

namespace relaycast::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, const std::string& what) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::usage, "cannot parse " + what + " '" + raw + "'");
  }
  return value;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) return {parse_number(text, "power")};
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw Error(ErrorCode::usage, "range must be lo:hi:step (got '" + text + "')");
  }
  const double lo = parse_number(text.substr(0, first), "range start");
  const double hi = parse_number(text.substr(first + 1, second - first - 1), "range end");
  const double step = parse_number(text.substr(second + 1), "range step");
  if (!(step > 0.0)) throw Error(ErrorCode::usage, "range step must be > 0 (got '" + text + "')");
  if (hi < lo) throw Error(ErrorCode::usage, "range end is below its start (got '" + text + "')");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = lo + step * static_cast<double>(i);
  return values;
}

std::vector<double> parse_b_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    const double b = parse_number(item, "b");
    if (!(b > 0.0)) throw Error(ErrorCode::usage, "b must be > 0 (got '" + trim(item) + "')");
    values.push_back(b);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::usage, path.string() + ":" + std::to_string(number) +
                                        ": expected key=value");
    }
    std::string key = trim(text.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty() || key == "config") {
      throw Error(ErrorCode::usage,
                  path.string() + ":" + std::to_string(number) + ": invalid key '" + key + "'");
    }
    args.push_back("--" + key);
    args.push_back(trim(text.substr(eq + 1)));
  }
  return args;
}

}  // namespace relaycast::cli
