#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fracwdw/errors.hpp"
#include "fracwdw/specfun.hpp"

namespace fracwdw {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kLogEps = 36.8;  // -log(1e-16)
constexpr double kMinHalfWidth = 0.02;
constexpr double kMaxGrowth = 2.5;  // bound on mu (1 - sin a), the log of roundoff growth at the vertex




// Angle a in (0, pi/2) at which the contour sigma + mu (1 + sin(iu - a))
// passes through z. Empty when z stays on one side for every a.
std::optional<double> crossing_angle(cplx z, double mu, double sigma) {
    double X = 1.0 - (z.real() - sigma) / mu;
    double Y = std::abs(z.imag()) / mu;
    if (X <= 0.0 || (Y == 0.0 && X >= 1.0)) return std::nullopt;
    auto f = [&](double a) {
        double p = X / std::sin(a), q = Y / std::cos(a);
        return p * p - q * q - 1.0;
    };
    double lo = 1e-12, hi = 0.5 * kPi - 1e-12;
    if (f(lo) <= 0.0 || f(hi) >= 0.0) return std::nullopt;
    for (int i = 0; i < 48; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Always to the right of every contour of the family.
bool always_outside(cplx z, double mu, double sigma) { return 1.0 - (z.real() - sigma) / mu <= 0.0; }

struct Transform {
    double alpha, beta, gamma, x, y;
    double shift = 0.0;
    std::vector<cplx> poles;
    std::vector<cplx> branch_points;  // off the negative axis, must stay enclosed

    Transform(double al, double be, double ga, double xx, double yy) : alpha(al), beta(be), gamma(ga), x(xx), y(yy) {
        if (!(al > 0.0) || !(be > 0.0) || !(ga > 0.0))
            throw PoleError("E2 inversion: alpha, beta, gamma must be positive");
        double rho = y == 0.0 ? 0.0 : std::pow(std::abs(y), 1.0 / al);
        shift = y > 0.0 ? 1.5 * rho : 0.5 * rho;
        if (y < 0.0 && al > 1.0) {
            cplx q = std::polar(rho, kPi / al);
            branch_points = {q, std::conj(q)};
        }
        if (be > 1.0 && x != 0.0) find_poles();
    }

    cplx symbol(cplx s) const {
        cplx ls = std::log(s);
        return std::exp(beta * ls + gamma * std::log(1.0 - y * std::exp(-alpha * ls)));
    }

    cplx symbol_slope(cplx s) const {
        cplx ls = std::log(s);
        cplx z = 1.0 - y * std::exp(-alpha * ls);
        cplx phi = std::exp(beta * ls + gamma * std::log(z));
        return phi * (beta / s + gamma * alpha * y * std::exp((-alpha - 1.0) * ls) / z);
    }

    // Newton from the root of s^beta = x nearest the positive imaginary side.
    void find_poles() {
        cplx s = std::polar(std::pow(std::abs(x), 1.0 / beta), x < 0.0 ? kPi / beta : 0.0);
        if (x > 0.0) s += 1.0;
        bool ok = false;
        for (int it = 0; it < 100 && !ok; ++it) {
            cplx ds = (symbol(s) - x) / symbol_slope(s);
            s -= ds;
            ok = std::abs(ds) <= 1e-15 * std::abs(s);
        }
        if (!ok || !(std::abs(symbol(s) - x) <= 1e-10 * std::abs(x)))
            throw NonConvergence("E2 inversion: pole search did not converge");
        if (std::abs(s.imag()) > 1e-12 * std::abs(s)) {
            if (s.imag() < 0.0) s = std::conj(s);
            poles = {s, std::conj(s)};
        } else {
            poles = {cplx(s.real(), 0.0)};
        }
    }

    struct Contour {
        double mu = 0, a = 0, h = 0;
        int n = 0;
        bool residues = false;
    };

    // Cheapest contour over a log grid of mu; poles are either enclosed
    // (strip below their crossing angle) or left outside (strip above it).
    Contour contour(double mu_scale) const {
        Contour best;
        for (int i = 0; i <= 30; ++i) {
            double mu = mu_scale * std::pow(10.0, -1.3 + 3.6 * i / 30.0);
            double hi_common = 0.5 * kPi;
            bool bad = false;
            for (cplx q : branch_points) {
                if (always_outside(q, mu, shift)) bad = true;
                if (auto a = crossing_angle(q, mu, shift)) hi_common = std::min(hi_common, *a);
            }
            if (bad) continue;
            std::optional<double> ap;
            bool forced_out = false;
            for (cplx p : poles) {
                if (always_outside(p, mu, shift)) forced_out = true;
                if (auto a = crossing_angle(p, mu, shift)) ap = ap ? std::max(*ap, *a) : *a;
            }
            for (int out = 0; out < 2; ++out) {
                if (poles.empty() && out == 1) break;
                if (forced_out && out == 0) continue;
                double lo = 0.0, hi = hi_common;
                if (ap && out) lo = *ap;
                if (ap && !out) hi = std::min(hi, *ap);
                double w = 0.5 * (hi - lo);
                if (w < kMinHalfWidth) continue;
                double a = lo + w;
                if (mu * (1.0 - std::sin(a)) > kMaxGrowth) continue;
                double h = 2.0 * kPi * w / (kLogEps + mu * (1.0 - std::sin(lo)));
                double U = std::acosh((1.0 + kLogEps / mu) / std::sin(a));
                int n = static_cast<int>(std::ceil(U / h));
                if (best.n == 0 || n < best.n) best = Contour{mu, a, h, n, out == 1};
            }
        }
        if (best.n == 0) throw NonConvergence("E2 inversion: no admissible contour");
        return best;
    }

    double integrate(const Contour& c, double d, double* scale) const {
        const cplx I(0.0, 1.0);
        double sum = 0.0, mag = 0.0;
        for (int k = 0; k <= c.n; ++k) {
            cplx z = I * (k * c.h) - c.a;
            cplx s = shift + c.mu * (1.0 + std::sin(z));
            cplx ds = I * c.mu * std::cos(z);
            cplx t = std::exp(s + (beta - d) * std::log(s)) / (symbol(s) - x) * ds;
            double wgt = k == 0 ? 1.0 : 2.0;
            sum += wgt * t.imag();
            mag += wgt * std::abs(t);
        }
        double v = c.h / (2.0 * kPi) * sum;
        *scale = c.h / (2.0 * kPi) * mag;
        if (c.residues) {
            for (cplx p : poles) {
                if (p.imag() < 0.0) continue;
                cplx r = std::exp(p + (beta - d) * std::log(p)) / symbol_slope(p);
                v += p.imag() == 0.0 ? r.real() : 2.0 * r.real();
                *scale = std::max(*scale, std::abs(r));
            }
        }
        return v;
    }
};

}  // namespace

SeriesResult e2_region_inversion(double alpha, double beta, double gamma, double d, double x, double y) {
    Transform tr(alpha, beta, gamma, x, y);
    auto c1 = tr.contour(1.0);
    auto c2 = tr.contour(1.7);
    double s1 = 0.0, s2 = 0.0;
    double v1 = tr.integrate(c1, d, &s1);
    double v2 = tr.integrate(c2, d, &s2);
    double g = gamma_fn(gamma);
    SeriesResult r;
    r.value = v1 / g;
    r.terms_used = 2 * (c1.n + c2.n + 2);
    r.est_abs_error = std::max(std::abs(v1 - v2), 1e-16 * std::max(s1, s2)) / g;
    r.converged = std::isfinite(r.value);
    return r;
}

std::vector<std::complex<double>> e2_region_poles(double alpha, double beta, double gamma, double x, double y) {
    return Transform(alpha, beta, gamma, x, y).poles;
}

}  // namespace fracwdw
