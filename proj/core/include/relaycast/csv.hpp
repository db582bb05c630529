#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relaycast {

/// Locale-independent rendering with 12
/// significant digits ("nan", "inf" and "-inf" for non-finite values).
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a header line. Blank lines and lines starting
/// with '#' are skipped; every row must have as many fields as the header.
CsvTable read_csv_table(std::istream& in);

}  // namespace relaycast
