#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gatewave {

/// Decimal formatting with 12 significant digits; used everywhere a number
/// is written to a file so reruns are byte-identical.
std::string fmt_g12(double v);

/// Shorter form for plot coordinates.
std::string fmt_g6(double v);

/// Write content to path atomically (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Read a two-column CSV with header "v,cap_f". Throws ParseError with the
/// file/line on malformed input.
std::vector<std::pair<double, double>> read_cv_table(const std::filesystem::path& path);

}  // namespace gatewave
