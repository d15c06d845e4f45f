#include "fracwdw/dd.hpp"

#include <limits>

namespace fracwdw {

dd exp(const dd& a) {
    if (a.hi > 709.78) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -745.2) return {0.0, 0.0};
    if (a.hi == 0.0 && a.lo == 0.0) return {1.0, 0.0};

    double k = std::nearbyint(a.hi / ddk::ln2.hi);
    dd r = ldexp(a - ddk::ln2 * k, -10);

    // expm1 of the reduced argument, then undo the 2^10 scaling by doubling
    dd term = r;
    dd s = r;
    for (int j = 2; j <= 10; ++j) {
        term = term * r / static_cast<double>(j);
        s += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    for (int j = 0; j < 10; ++j) s = ldexp(s, 1) + sqr(s);
    return ldexp(s + 1.0, static_cast<int>(k));
}

dd log(const dd& a) {
    if (a.hi <= 0.0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    dd x = std::log(a.hi);
    return x + a * exp(-x) - 1.0;
}

dd sin_pi(const dd& a) {
    dd r = a - ldexp(nint(ldexp(a, -1)), 1);
    if (r.hi > 0.5) r = 1.0 - r;
    else if (r.hi < -0.5) r = -1.0 - r;
    dd x = ddk::pi * r;
    dd x2 = sqr(x);
    dd term = x;
    dd s = x;
    for (int j = 1; j < 40; ++j) {
        term = -term * x2 / static_cast<double>((2 * j) * (2 * j + 1));
        s += term;
        if (std::abs(term.hi) < 1e-34 * std::abs(s.hi)) break;
    }
    return s;
}

}  // namespace fracwdw
