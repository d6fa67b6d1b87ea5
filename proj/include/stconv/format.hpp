#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace stconv {

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace stconv
