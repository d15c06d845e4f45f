#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fracwdw/dd.hpp"

namespace fracwdw {

double gamma_fn(double x);
double recip_gamma(double x);

struct LogGamma {
    dd value;      // log|Gamma(x)|
    int sign = 1;  // sign of Gamma(x)
    bool pole = false;
};

LogGamma lgamma_dd(const dd& x);

struct SeriesOptions {
    double abs_tol = 1e-12;
    double cancel_ratio = 1e12;
    std::int64_t max_terms = 250000;
    // When false, failures are reported through the result instead of thrown.
    bool throw_on_failure = true;
};

struct SeriesResult {
    double value = 0.0;
    std::int64_t terms_used = 0;
    double est_abs_error = 0.0;
    bool cancellation_flag = false;
    bool converged = true;
};

// E^gamma_{alpha,beta}(z) = sum (gamma)_k z^k / (Gamma(alpha k + beta) k!)
SeriesResult prabhakar_e(double alpha, double beta, double gamma, double z, const SeriesOptions& opt = {});

// Cached coefficients of E^gamma_{alpha,beta} for repeated evaluation at
// moderate arguments, as needed by fractional-integral kernels.
class PrabhakarSeries {
public:
    PrabhakarSeries(double alpha, double beta, double gamma, double z_max);
    double operator()(double z) const;
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

private:
    double alpha_, beta_, gamma_;
    std::vector<double> c_;
};

struct BivMLSignature {
    double g1 = 1, a1 = 0, b1 = 0, g2 = 1, a2 = 0;
    double d1 = 1, a3 = 1, b2 = 0, d2 = 1, a4 = 0, d3 = 1, b3 = 0;

    void validate() const;
};

// Bivariate Mittag-Leffler E_2 with a lazily grown coefficient table.
// Not thread safe; give each worker its own instance.
class BivariateML {
public:
    explicit BivariateML(const BivMLSignature& sig, SeriesOptions opt = {});

    SeriesResult operator()(double x, double y);
    const BivMLSignature& signature() const { return sig_; }
    const SeriesOptions& options() const { return opt_; }

private:
    struct Coef {
        dd mant;  // signed mantissa, |mant| in [0.5, 1) or 0
        int e2 = 0;
        double log_mag = 0.0;
    };

    const Coef& coef(std::int64_t m, std::int64_t n);
    Coef make_coef(std::int64_t m, std::int64_t n);
    LogGamma lg_g2(std::int64_t m);
    LogGamma lg_d2(std::int64_t m);
    LogGamma lg_d3(std::int64_t n);

    BivMLSignature sig_;
    SeriesOptions opt_;
    dd lg_g1_, lg_g2_0_;
    bool lg_g1_sign_flip_ = false;
    std::vector<std::vector<Coef>> rows_;
    std::vector<LogGamma> g2_cache_, d2_cache_, d3_cache_;
};

SeriesResult biml_e2(const BivMLSignature& sig, double x, double y, const SeriesOptions& opt = {});

// E2 under the region signature (gamma, gamma, 1, 1, 0, d, beta, alpha,
// gamma, gamma, 1, 1) by inverting its Laplace transform: Gamma(gamma) E2(x, y)
// is the value at 1 of the inverse of
//   w^(beta - d) / (w^beta (1 - y w^-alpha)^gamma - x)
// taken on a hyperbolic contour, with residues at poles left outside it.
// Cost does not grow with |x|; the error is absolute, near 1e-15.
// est_abs_error compares two independent contours.
SeriesResult e2_region_inversion(double alpha, double beta, double gamma, double d, double x, double y);

// Poles of the transform above on the principal sheet (upper one first).
std::vector<std::complex<double>> e2_region_poles(double alpha, double beta, double gamma, double x, double y);

}  // namespace fracwdw
