#pragma once

#include <cstdio>
#include <string>

namespace crossdiff {

/// Fixed 9-significant-digit rendering used by every text output.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace crossdiff
