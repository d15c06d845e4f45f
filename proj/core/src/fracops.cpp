#include "fracwdw/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"
#include "fracwdw/quadrature.hpp"
#include "fracwdw/specfun.hpp"

namespace fracwdw {

namespace {

using Pieces = QuadSum;

// int_0^inf F(w) dw over unit panels in w; the integrand decays like a
// geometric sequence per panel, so the remaining tail is estimated from the
// ratio of the last two panels.
Pieces exp_tail(const RealFn& F, int sub, double tol) {
    Pieces out;
    double prev_panel = 0.0, prev_est = 0.0;
    for (int j = 0; j < 4000; ++j) {
        Pieces p = composite_gl_abs(F, j, j + 1.0, sub);
        out.value += p.value;
        out.abs += p.abs;
        double tail = 0.0;
        if (j > 0 && prev_panel != 0.0) {
            double r = p.value / prev_panel;
            if (r > 0.0 && r < 1.0) tail = p.value * r / (1.0 - r);
            else tail = std::abs(p.value) > 0.0 ? 1e300 : 0.0;
        }
        double est = out.value + tail;
        if (j >= 3 && std::abs(tail) < 1e299 &&
            (std::abs(p.abs) <= 1e-3 * tol * out.abs || std::abs(est - prev_est) <= 0.1 * tol * out.abs)) {
            out.value = est;
            return out;
        }
        if (out.abs == 0.0 && j >= 3) return out;
        prev_panel = p.value;
        prev_est = est;
    }
    throw QuadratureError("prabhakar_integral: endpoint tail did not decay");
}

// Local coordinates on [0, h]: substitutions x = hl e^-w and h - x = ht e^-w
// on the end panels, composite rule in between, `n` subpanels per unit.
Pieces integrate(const RealFn& kernel, const RealFn& y, double h, int n, double tol) {
    double hl = h / 8.0, ht = h / 8.0;
    Pieces out;
    auto add = [&](const Pieces& p) {
        out.value += p.value;
        out.abs += p.abs;
    };
    add(exp_tail(
        [&](double w) {
            double d = hl * std::exp(-w);
            return d * kernel(h - d) * y(d);
        },
        n, tol));
    add(composite_gl_abs([&](double x) { return kernel(h - x) * y(x); }, hl, h - ht, 2 * n));
    add(exp_tail(
        [&](double w) {
            double s = ht * std::exp(-w);
            return s * kernel(s) * y(h - s);
        },
        n, tol));
    return out;
}

// y is given in local coordinates, y(x) = original(a + x); h = t - a.
double integral_impl(double alpha, double beta, double gamma, double delta, const RealFn& y, double h,
                     const FracOpOptions& opt) {
    if (!(h > 0.0)) throw QuadratureError("prabhakar_integral: requires t > a");
    PrabhakarSeries E(alpha, beta, gamma, std::abs(delta) * std::pow(h, alpha));
    RealFn kernel;
    if (beta > 0.0) {
        kernel = [&](double s) { return std::pow(s, beta - 1.0) * E(delta * std::pow(s, alpha)); };
    } else {
        // drop the constant term; what remains is s^(alpha-1) times a series in s^alpha
        kernel = [&](double s) {
            double z = delta * std::pow(s, alpha);
            return z == 0.0 ? 0.0 : (E(z) - E(0.0)) / s;
        };
    }

    // beta = 0: the kernel is a delta at s = 0 plus the k >= 1 terms of the series
    double identity = beta == 0.0 ? y(h) : 0.0;

    int n = 1;
    Pieces prev = integrate(kernel, y, h, n, opt.tol);
    for (;;) {
        n *= 2;
        Pieces cur = integrate(kernel, y, h, n, opt.tol);
        if (std::abs(cur.value - prev.value) <= opt.tol * std::max(cur.abs, 1e-300)) return identity + cur.value;
        if (n >= opt.max_panels)
            throw QuadratureError("prabhakar_integral: panel difference " + format_sig((cur.value - prev.value) / cur.abs, 3) +
                                  " above tolerance");
        prev = cur;
    }
}

}  // namespace

double prabhakar_integral(const FracOpSpec& spec, const RealFn& y, double t, const FracOpOptions& opt) {
    RealFn yl = [&](double x) { return y(spec.a + x); };
    return integral_impl(spec.alpha, spec.beta, spec.gamma, spec.delta, yl, t - spec.a, opt);
}

double prabhakar_caputo(const FracOpSpec& spec, const DerivFn& y, double t, const FracOpOptions& opt) {
    DerivFn yl = [&](double x, int order) { return y(spec.a + x, order); };
    return prabhakar_caputo_local(spec, yl, t - spec.a, opt);
}

double prabhakar_caputo_local(const FracOpSpec& spec, const DerivFn& y, double tau, const FracOpOptions& opt) {
    if (!(spec.m - 1 < spec.beta && spec.beta <= spec.m))
        throw Error("prabhakar_caputo: need m - 1 < beta <= m");
    RealFn ym = [&](double x) { return y(x, spec.m); };
    return integral_impl(spec.alpha, spec.m - spec.beta, -spec.gamma, spec.delta, ym, tau, opt);
}

double central_derivative(const RealFn& y, double x, int order, double h, double* noise) {
    auto d = [&](double s) {
        if (order == 0) return y(x);
        if (order == 1) return (-y(x + 2 * s) + 8 * y(x + s) - 8 * y(x - s) + y(x - 2 * s)) / (12 * s);
        if (order == 2) return (-y(x + 2 * s) + 16 * y(x + s) - 30 * y(x) + 16 * y(x - s) - y(x - 2 * s)) / (12 * s * s);
        throw DifferentiationError("central_derivative: orders above 2 are not supported");
    };
    double fine = d(h);
    if (noise) *noise = std::abs(fine - d(2 * h)) / 15.0;
    return fine;
}

double prabhakar_caputo_fd(const FracOpSpec& spec, const RealFn& y, double t, const FracOpOptions& opt) {
    double h = (t - spec.a) * opt.fd_step;
    DerivFn dy = [&](double x, int order) {
        double step = std::min(h, (x - spec.a) / 4.0);
        double noise = 0.0;
        double v = central_derivative(y, x, order, step, &noise);
        if (noise > opt.fd_tol * (1.0 + std::abs(v)))
            throw DifferentiationError("prabhakar_caputo_fd: finite-difference noise " + format_sig(noise, 3) +
                                       " above tolerance");
        return v;
    };
    FracOpOptions loose = opt;
    loose.tol = std::max(opt.tol, opt.fd_tol);
    return prabhakar_caputo(spec, dy, t, loose);
}

}  // namespace fracwdw
