#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace abrade {

// Locale-independent decimal formatting with 17 significant digits, enough
// to round-trip any double exactly. CSV cells use this form.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Shortest representation that still round-trips exactly; used for grammar
// strings, flag echoes and SVG coordinates.
inline std::string format_double_short(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace abrade
