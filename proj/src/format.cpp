#include "rgdc/format.hpp"

#include <cstdio>

namespace rgdc::detail {

std::string g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace rgdc::detail
