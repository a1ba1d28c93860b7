#include "fracstep/format.hpp"

#include <cstdio>

namespace fracstep {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

}  // namespace fracstep
