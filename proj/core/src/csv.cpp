#include "relaycast/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "relaycast/error.hpp"

namespace relaycast {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? std::string{} : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::general, 12);
  if (ec != std::errc{}) throw Error(ErrorCode::io_error, "number formatting failed");
  return std::string(buffer.data(), end);
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << "line " << line_number << ": expected " << table.header.size() << " fields, got "
          << fields.size();
      throw Error(ErrorCode::invalid_table, msg.str());
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        std::ostringstream msg;
        msg << "line " << line_number << ": cannot parse '" << field << "' as a number";
        throw Error(ErrorCode::invalid_table, msg.str());
      }
      row.push_back(value);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw Error(ErrorCode::invalid_table, "CSV input is empty");
  return table;
}

}  // namespace relaycast
