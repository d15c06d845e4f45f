#pragma once

#include <string>

namespace fracwdw {

// Shortest round-trip decimal form; independent of the C locale.
std::string format_number(double x);
// Fixed significant digits, also locale independent.
std::string format_sig(double x, int digits);

}  // namespace fracwdw
