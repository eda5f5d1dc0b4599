#pragma once

#include <string>

namespace rankmat {

// Shortest text that round-trips to the same double; "NaN" for NaN.
std::string format_real(double value);

}  // namespace rankmat
