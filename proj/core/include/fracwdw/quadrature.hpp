#pragma once

#include <cmath>
#include <vector>

namespace fracwdw {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// n-point Gauss-Legendre rule; rules are cached per n.
const GaussRule& gauss_legendre(int n);

// Composite 16-point rule on [a, b] with `panels` equal panels.
template <class F>
double composite_gl(F&& f, double a, double b, int panels) {
    const GaussRule& g = gauss_legendre(16);
    double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double c = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + 0.5 * h * g.x[i]);
        total += 0.5 * h * s;
    }
    return total;
}

struct QuadSum {
    double value = 0.0;
    double abs = 0.0;  // integral of |f|
};

template <class F>
QuadSum composite_gl_abs(F&& f, double a, double b, int panels) {
    const GaussRule& g = gauss_legendre(16);
    double h = (b - a) / panels;
    QuadSum out;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * h;
        double s = 0.0, sa = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            double v = f(c + 0.5 * h * g.x[i]);
            s += g.w[i] * v;
            sa += g.w[i] * std::abs(v);
        }
        out.value += 0.5 * h * s;
        out.abs += 0.5 * std::abs(h) * sa;
    }
    return out;
}

}  // namespace fracwdw
