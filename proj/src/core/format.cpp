#include "nediff/core/format.hpp"

#include <cstdio>

namespace nediff {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace nediff
