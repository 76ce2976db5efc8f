#include "core/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vplate {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_or_throw(path);
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("csv row width mismatch in " + path);
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_g17(row[c]);
    out << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out = open_or_throw(path);
  out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << format_g17(v) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vplate
