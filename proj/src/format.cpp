#include "rankmat/format.hpp"

#include <charconv>
#include <cmath>

namespace rankmat {

std::string format_real(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace rankmat
