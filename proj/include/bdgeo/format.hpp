#pragma once

#include <array>
#include <cstdio>
#include <string>

/// Output formatting shared by every command: floating-point values are
/// always printed with 17 significant digits so records round-trip exactly
/// and repeated runs are byte-identical.
namespace bdgeo::cli {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

template <std::size_t N>
std::string format_array(const std::array<double, N>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < N; ++i) {
    if (i != 0) out += ",";
    out += format_double(values[i]);
  }
  out += "]";
  return out;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += "\"";
  return out;
}

}  // namespace bdgeo::cli
