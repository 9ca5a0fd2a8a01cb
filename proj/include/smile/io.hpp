#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace smile {

/// Decimal with 17 significant digits so reruns diff cleanly.
inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline std::string format_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string("NA");
}

}  // namespace smile
