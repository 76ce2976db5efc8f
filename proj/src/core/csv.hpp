#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vplate {

/// One double at 17 significant digits (round-trip exact).
std::string format_g17(double v);

/// Comma-separated file with a header row; every cell at 17 significant
/// digits.  Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Two-column key,value file for scalar reports.
void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, double>>& rows);

}  // namespace vplate
