#include "fracwdw/bessel.hpp"

#include <cmath>
#include <numbers>

#include "fracwdw/dd.hpp"
#include "fracwdw/errors.hpp"
#include "fracwdw/quadrature.hpp"

namespace fracwdw {

namespace {

constexpr double kSeriesLimit = 20.0;

// sum_k (-1)^k (x/2)^(2k+nu) / (k! (k+nu)!) accumulated in dd
double series_j(int nu, double x) {
    dd q = two_prod(0.5 * x, 0.5 * x);
    dd term = nu == 0 ? dd(1.0) : dd(0.5 * x);
    dd sum = term;
    for (int k = 1; k < 200; ++k) {
        term = -term * q / static_cast<double>(k * (k + nu));
        sum += term;
        if (std::abs(term.hi) < 1e-34 * std::max(1.0, std::abs(sum.hi)) && k > x) break;
    }
    return sum.to_double();
}

// Hankel asymptotic form for x >= kSeriesLimit
double hankel_j(int nu, double x) {
    double mu4 = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double a = 1.0;
    double prev = 1e300;
    for (int k = 1; k < 60; ++k) {
        a *= (mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
        double t = std::abs(a);
        if (t > prev || t < 1e-18) break;
        prev = t;
        if (k % 2 == 1) q += ((k / 2) % 2 == 0 ? a : -a);
        else p += ((k / 2) % 2 == 0 ? a : -a);
    }
    double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    return x < kSeriesLimit ? series_j(0, x) : hankel_j(0, x);
}

double bessel_j1(double x) {
    double s = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    return s * (x < kSeriesLimit ? series_j(1, x) : hankel_j(1, x));
}

const char* to_string(ZeroMode m) { return m == ZeroMode::Asymptotic ? "asymptotic" : "exact"; }

ZeroMode parse_zero_mode(const std::string& s) {
    if (s == "asymptotic") return ZeroMode::Asymptotic;
    if (s == "exact") return ZeroMode::ExactRoot;
    throw ConfigError("zeros must be 'asymptotic' or 'exact', got '" + s + "'");
}

EigenSpec eigen(int k, ZeroMode mode) {
    if (k < 1) throw Error("eigen: k must be >= 1");
    EigenSpec e;
    e.k = k;
    e.zero_mode = mode;
    double guess = k * std::numbers::pi - 0.25 * std::numbers::pi;
    if (mode == ZeroMode::Asymptotic) {
        e.mu_k = guess;
    } else {
        double b = 8.0 * guess;
        double mcmahon = guess + 1.0 / b - 124.0 / (3.0 * b * b * b);
        double lo = mcmahon - 0.3, hi = mcmahon + 0.3;
        double flo = bessel_j0(lo), fhi = bessel_j0(hi);
        if (flo * fhi > 0.0) throw RootBracketError("eigen: no sign change around the asymptotic root guess");
        double z = mcmahon;
        for (int it = 0; it < 100; ++it) {
            double fz = bessel_j0(z);
            if (fz == 0.0) break;
            if ((fz < 0.0) == (flo < 0.0)) lo = z;
            else hi = z;
            double step = fz / bessel_j1(z);  // J0' = -J1
            double zn = z + step;
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) <= 1e-16 * z) {
                z = zn;
                break;
            }
            z = zn;
        }
        if (!(z >= mcmahon - 0.3 && z <= mcmahon + 0.3)) throw RootBracketError("eigen: refinement escaped the bracket");
        e.mu_k = z;
    }
    e.lambda_k = -e.mu_k * e.mu_k;
    return e;
}

double fourier_bessel_coeff(const RadialFunction& f, const EigenSpec& e, const QuadratureSpec& quad) {
    if (f.is_zero()) return 0.0;
    double j1 = bessel_j1(e.mu_k);
    if (j1 == 0.0) throw QuadratureError("fourier_bessel_coeff: J1(mu_k) vanishes");
    auto g = [&](double r) { return f(r) * bessel_j0(e.mu_k * r) * r; };
    auto gabs = [&](double r) { return std::abs(g(r)); };
    int n = std::max(quad.panels, 1);
    double prev = composite_gl(g, 0.0, 1.0, n);
    double scale = composite_gl(gabs, 0.0, 1.0, n);
    for (;;) {
        n *= 2;
        double cur = composite_gl(g, 0.0, 1.0, n);
        if (std::abs(cur - prev) <= quad.tol * std::max(scale, 1e-300)) return 2.0 * cur / (j1 * j1);
        if (n >= quad.max_panels)
            throw QuadratureError("fourier_bessel_coeff: Richardson estimate above tolerance at " + std::to_string(n) +
                                  " panels");
        prev = cur;
    }
}

double synthesize(const std::vector<std::pair<EigenSpec, double>>& coeffs, double r) {
    double s = 0.0;
    for (const auto& [e, c] : coeffs) s += c * bessel_j0(e.mu_k * r);
    return s;
}

double orthogonality_defect(int K, ZeroMode mode, const QuadratureSpec& quad) {
    double worst = 0.0;
    for (int j = 1; j <= K; ++j) {
        EigenSpec ej = eigen(j, mode);
        auto basis = RadialFunction::callable([mu = ej.mu_k](double r) { return bessel_j0(mu * r); }, "basis");
        for (int k = 1; k <= K; ++k) {
            if (k == j) continue;
            worst = std::max(worst, std::abs(fourier_bessel_coeff(basis, eigen(k, mode), quad)));
        }
    }
    return worst;
}

}  // namespace fracwdw
