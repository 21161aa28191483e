#pragma once

#include <cstdio>
#include <string>

namespace dencomb {

/// Decimal with 15 significant digits, as written to every CSV and weights file.
inline std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// 17 significant digits; round-trips doubles exactly (matrix files).
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace dencomb
