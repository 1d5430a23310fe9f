#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace mce::detail {

/// Shortest decimal that parses back to exactly `v`.
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// `v` rounded to 10 significant digits, the precision of all JSON output.
inline double round10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace mce::detail
