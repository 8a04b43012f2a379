#pragma once

#include <cstdio>
#include <string>

namespace esgbo::detail {

// 17 significant digits round-trip a double exactly through text.
inline std::string g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace esgbo::detail
