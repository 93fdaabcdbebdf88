#pragma once

#include <charconv>
#include <string>
#include <string_view>

namespace dctwin {

// Shortest round-trip decimal form; integral values keep a trailing ".0"
// so CSV cells read the same as the JSON numbers.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, ptr);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

// Fixed two-decimal rendering used for percentage tables.
inline std::string format_fixed2(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  std::string out(buf, ptr);
  if (out == "-0.00") out = "0.00";
  return out;
}

}  // namespace dctwin
