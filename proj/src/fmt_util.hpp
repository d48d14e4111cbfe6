#pragma once

#include <cstdio>
#include <string>

namespace udep::detail {

// 17 significant digits: enough for exact double round-trips, and the
// format every CSV writer in the project shares.
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace udep::detail
