#include "fracwdw/format.hpp"

#include <charconv>
#include <cmath>

namespace fracwdw {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

std::string format_sig(double x, int digits) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
    return std::string(buf, p);
}

}  // namespace fracwdw
