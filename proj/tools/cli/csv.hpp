#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace robust_merton::cli {

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double v);

/// Writes one CSV line terminated by '\n'. Fields are written verbatim.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace robust_merton::cli
