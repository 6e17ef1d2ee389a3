#include "habitmfg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace habitmfg {

namespace {

void commit(const std::string& tmp, const std::string& path, std::ofstream& out) {
  out.flush();
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.close();
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot write file: " + path);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_csv(const std::string& path, const CurveTable& table,
               const std::vector<std::string>& comments) {
  if (table.columns.empty()) throw std::runtime_error("csv table has no columns");
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw std::runtime_error("csv row width does not match columns");

  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out << ',';
    out << table.columns[j];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
  commit(tmp, path, out);
}

void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries,
                const std::vector<std::string>& comments) {
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  commit(tmp, path, out);
}

}  // namespace habitmfg
