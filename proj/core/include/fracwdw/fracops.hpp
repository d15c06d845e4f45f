#pragma once

#include <functional>

namespace fracwdw {

struct FracOpSpec {
    double a = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 0.0;
    double delta = 0.0;
    int m = 1;
};

struct FracOpOptions {
    double tol = 1e-12;  // relative to the integral of |integrand|
    int max_panels = 512;
    double fd_step = 2e-3;  // times (t - a)
    double fd_tol = 1e-6;
};

using RealFn = std::function<double(double)>;
// y(t, order) returns the order-th derivative of y at t.
using DerivFn = std::function<double(double, int)>;

// int_a^t (t-xi)^(beta-1) E^gamma_{alpha,beta}(delta (t-xi)^alpha) y(xi) dxi
double prabhakar_integral(const FracOpSpec& spec, const RealFn& y, double t, const FracOpOptions& opt = {});

// Integral with parameters (alpha, m - beta, -gamma, delta) applied to y^(m).
double prabhakar_caputo(const FracOpSpec& spec, const DerivFn& y, double t, const FracOpOptions& opt = {});

// As above with y and tau measured from the lower terminal, which keeps
// resolution near a when a is far from zero.
double prabhakar_caputo_local(const FracOpSpec& spec, const DerivFn& y, double tau, const FracOpOptions& opt = {});

// Same operator with y^(m) from 4th-order central differences.
double prabhakar_caputo_fd(const FracOpSpec& spec, const RealFn& y, double t, const FracOpOptions& opt = {});

double central_derivative(const RealFn& y, double x, int order, double h, double* noise = nullptr);

}  // namespace fracwdw
