#pragma once

#include <string>
#include <vector>

namespace habitmfg {

struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row matches columns
};

// %.17g, enough digits to round-trip a double
std::string format_double(double v);
// compact form for column labels and human-facing metadata
std::string format_short(double v);

// Writes "# comment" lines, a header row, then data rows. The file lands via
// a temporary plus rename so readers never observe a partial write.
void write_csv(const std::string& path, const CurveTable& table,
               const std::vector<std::string>& comments);

// key = value lines with the same comment block and atomic rename
void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries,
                const std::vector<std::string>& comments);

}  // namespace habitmfg
