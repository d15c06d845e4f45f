#include "fracwdw/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"

namespace fracwdw {

namespace {

constexpr double kRoundUnit = 0x1p-104;

// Bernoulli numbers B_2 .. B_28 as exact numerator/denominator pairs.
constexpr double kBernNum[14] = {1,      -1,         1,      -1,          5,       -691,    7,
                                 -3617,  43867,      -174611, 854513,     -236364091, 8553103, -23749461029.0};
constexpr double kBernDen[14] = {6, 30, 42, 30, 66, 2730, 6, 510, 798, 330, 138, 2730, 6, 870};

struct StirlingTable {
    dd c[14];
    StirlingTable() {
        for (int j = 1; j <= 14; ++j) {
            double den = kBernDen[j - 1] * (2.0 * j) * (2.0 * j - 1.0);
            c[j - 1] = dd(kBernNum[j - 1]) / dd(den);
        }
    }
};

const StirlingTable& stirling() {
    static const StirlingTable t;
    return t;
}

dd stirling_lgamma(const dd& z) {
    const auto& t = stirling();
    dd w = 1.0 / z;
    dd w2 = sqr(w);
    dd s = t.c[13];
    for (int j = 12; j >= 0; --j) s = s * w2 + t.c[j];
    s = s * w;
    return (z - 0.5) * log(z) - z + ddk::half_log_2pi + s;
}

bool is_nonpositive_integer(const dd& x) { return x.hi <= 0.0 && nint(x) == x; }

dd arg_of(double base, double s1, std::int64_t i1, double s2, std::int64_t i2) {
    return dd(base) + two_prod(s1, static_cast<double>(i1)) + two_prod(s2, static_cast<double>(i2));
}

// Signed dd mantissa with a binary exponent; keeps huge and tiny factors in range.
struct Scaled {
    dd mant{1.0};
    int e2 = 0;

    void normalize() {
        if (mant.hi == 0.0) {
            e2 = 0;
            return;
        }
        int e;
        std::frexp(mant.hi, &e);
        mant = ldexp(mant, -e);
        e2 += e;
    }
};

Scaled scaled_exp(const dd& L, int sign) {
    Scaled s;
    double e = std::nearbyint(L.hi / ddk::ln2.hi);
    s.mant = exp(L - ddk::ln2 * e);
    if (sign < 0) s.mant = -s.mant;
    s.e2 = static_cast<int>(e);
    s.normalize();
    return s;
}

Scaled scaled_of(double x) {
    Scaled s;
    if (x == 0.0) {
        s.mant = dd(0.0);
        return s;
    }
    int e;
    double m = std::frexp(x, &e);
    s.mant = dd(m);
    s.e2 = e;
    return s;
}

dd unscale(const dd& m, int e2) {
    if (m.hi == 0.0 || e2 < -1100) return dd(0.0);
    return ldexp(m, e2);
}

// Ratio-test state shared by the single and double series.
struct DecayTracker {
    int run = 0;
    double prev = 0.0;
    double rho = 1.0;

    void push(double mag) {
        if (prev > 0.0 && mag < 0.5 * prev) {
            ++run;
            rho = mag / prev;
        } else if (prev > 0.0 || mag > 0.0) {
            run = 0;
        }
        if (mag > 0.0 || prev > 0.0) prev = mag;
    }
    bool settled() const { return run >= 3; }
    double tail(double mag) const { return mag * rho / (1.0 - rho); }
};

SeriesResult finish(SeriesResult r, double maxabs, const SeriesOptions& opt, const char* what) {
    r.cancellation_flag = maxabs > opt.cancel_ratio * std::abs(r.value);
    if (!opt.throw_on_failure) return r;
    if (!r.converged) throw NonConvergence(std::string(what) + ": max_terms exceeded before terms decayed");
    if (r.cancellation_flag && r.est_abs_error > opt.abs_tol)
        throw CancellationError(std::string(what) + ": cancellation error estimate " + format_sig(r.est_abs_error, 3) +
                                " exceeds abs_tol");
    return r;
}

double target_tol(const SeriesOptions& opt, const dd& sum) {
    return std::max(std::min(opt.abs_tol, 1e-18 * std::abs(sum.hi)), 1e-300);
}

}  // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::nearbyint(x)) throw PoleError("gamma_fn: pole at non-positive integer " + format_number(x));
    return std::tgamma(x);
}

double recip_gamma(double x) {
    if (x <= 0.0 && x == std::nearbyint(x)) return 0.0;
    if (x > 170.0) return std::exp(-std::lgamma(x));
    return 1.0 / std::tgamma(x);
}

LogGamma lgamma_dd(const dd& x) {
    LogGamma r;
    if (is_nonpositive_integer(x)) {
        r.pole = true;
        return r;
    }
    if (x.hi < 0.5) {
        r = lgamma_dd(1.0 - x);
        dd s = sin_pi(x);
        r.value = ddk::log_pi - log(abs(s)) - r.value;
        if (s.hi < 0.0) r.sign = -r.sign;
        return r;
    }
    dd z = x;
    dd prod(1.0);
    bool shifted = false;
    while (z.hi < 30.0) {
        prod *= z;
        z += 1.0;
        shifted = true;
    }
    r.value = stirling_lgamma(z);
    if (shifted) r.value -= log(prod);
    return r;
}

SeriesResult prabhakar_e(double alpha, double beta, double gamma, double z, const SeriesOptions& opt) {
    if (!(alpha > 0.0)) throw Error("prabhakar_e: alpha must be positive");
    SeriesResult res;
    dd sum(0.0);
    double maxabs = 0.0;
    double errsum = 0.0;
    double lz = z != 0.0 ? std::abs(std::log(std::abs(z))) : 0.0;

    Scaled zp;          // z^k
    dd poch(1.0);       // (gamma)_k / k!
    Scaled zs = scaled_of(z);
    DecayTracker dec;

    for (std::int64_t k = 0;; ++k) {
        if (k >= opt.max_terms) {
            res.converged = false;
            break;
        }
        dd a = arg_of(beta, alpha, k, 0.0, 0);
        LogGamma lg = lgamma_dd(a);
        double mag = 0.0;
        if (!lg.pole && poch.hi != 0.0) {
            Scaled c = scaled_exp(-lg.value, lg.sign);
            dd t = unscale(c.mant * zp.mant * poch, c.e2 + zp.e2);
            sum += t;
            mag = std::abs(t.hi);
            maxabs = std::max(maxabs, mag);
            errsum += mag * (std::abs(lg.value.hi) + k * lz + k + 8.0);
        }
        res.terms_used = k + 1;
        if (z == 0.0 || (poch.hi == 0.0 && k > 0)) break;
        dec.push(mag);
        if (dec.settled() && a.hi > 1.0) {
            double tail = dec.tail(mag);
            if (tail <= target_tol(opt, sum)) {
                res.est_abs_error += tail;
                break;
            }
        }
        poch = poch * (gamma + static_cast<double>(k)) / static_cast<double>(k + 1);
        zp.mant *= zs.mant;
        zp.e2 += zs.e2;
        zp.normalize();
    }
    res.value = sum.to_double();
    res.est_abs_error += errsum * kRoundUnit;
    if (!res.converged) res.est_abs_error = std::numeric_limits<double>::infinity();
    return finish(res, maxabs, opt, "prabhakar_e");
}

PrabhakarSeries::PrabhakarSeries(double alpha, double beta, double gamma, double z_max)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (!(alpha > 0.0)) throw Error("PrabhakarSeries: alpha must be positive");
    double zm = std::max(std::abs(z_max), 1e-300);
    dd poch(1.0);
    double acc = 0.0;
    int run = 0;
    for (int k = 0; k < 2000; ++k) {
        dd a = arg_of(beta, alpha, k, 0.0, 0);
        LogGamma lg = lgamma_dd(a);
        double c = 0.0;
        if (!lg.pole && poch.hi != 0.0) c = lg.sign * poch.to_double() * std::exp(-lg.value.hi);
        c_.push_back(c);
        double mag = std::abs(c) * std::pow(zm, k);
        acc += mag;
        if (poch.hi == 0.0 && k > 0) break;
        run = (mag <= 1e-18 * acc && a.hi > 1.0) ? run + 1 : 0;
        if (run >= 3) break;
        poch = poch * (gamma + static_cast<double>(k)) / static_cast<double>(k + 1);
    }
}

double PrabhakarSeries::operator()(double z) const {
    double s = 0.0;
    double p = 1.0;
    for (double c : c_) {
        s += c * p;
        p *= z;
    }
    return s;
}

void BivMLSignature::validate() const {
    if (!(a3 > 0.0) || a4 < 0.0 || b2 < 0.0 || b3 < 0.0)
        throw Error("BivMLSignature: requires a3 > 0 and a4, b2, b3 >= 0");
    if (a1 < 0.0 || a2 < 0.0 || b1 < 0.0) throw Error("BivMLSignature: numerator slopes must be non-negative");
    if (is_nonpositive_integer(dd(g1)) || is_nonpositive_integer(dd(g2)))
        throw PoleError("BivMLSignature: g1 and g2 must not be poles of Gamma");
}

BivariateML::BivariateML(const BivMLSignature& sig, SeriesOptions opt) : sig_(sig), opt_(opt) {
    sig_.validate();
    LogGamma a = lgamma_dd(dd(sig_.g1));
    LogGamma b = lgamma_dd(dd(sig_.g2));
    lg_g1_ = a.value;
    lg_g2_0_ = b.value;
    if (a.sign < 0) lg_g1_sign_flip_ = true;
    if (b.sign < 0) lg_g1_sign_flip_ = !lg_g1_sign_flip_;
}

LogGamma BivariateML::lg_g2(std::int64_t m) {
    while (static_cast<std::int64_t>(g2_cache_.size()) <= m) {
        auto i = static_cast<std::int64_t>(g2_cache_.size());
        g2_cache_.push_back(lgamma_dd(arg_of(sig_.g2, sig_.a2, i, 0.0, 0)));
    }
    return g2_cache_[m];
}

LogGamma BivariateML::lg_d2(std::int64_t m) {
    while (static_cast<std::int64_t>(d2_cache_.size()) <= m) {
        auto i = static_cast<std::int64_t>(d2_cache_.size());
        d2_cache_.push_back(lgamma_dd(arg_of(sig_.d2, sig_.a4, i, 0.0, 0)));
    }
    return d2_cache_[m];
}

LogGamma BivariateML::lg_d3(std::int64_t n) {
    while (static_cast<std::int64_t>(d3_cache_.size()) <= n) {
        auto i = static_cast<std::int64_t>(d3_cache_.size());
        d3_cache_.push_back(lgamma_dd(arg_of(sig_.d3, sig_.b3, i, 0.0, 0)));
    }
    return d3_cache_[n];
}

BivariateML::Coef BivariateML::make_coef(std::int64_t m, std::int64_t n) {
    Coef c;
    LogGamma num1 = lgamma_dd(arg_of(sig_.g1, sig_.a1, m, sig_.b1, n));
    LogGamma num2 = lg_g2(m);
    if (num1.pole || num2.pole) throw PoleError("biml_e2: numerator Gamma argument hits a pole");
    LogGamma den1 = lgamma_dd(arg_of(sig_.d1, sig_.a3, m, sig_.b2, n));
    LogGamma den2 = lg_d2(m);
    LogGamma den3 = lg_d3(n);
    if (den1.pole || den2.pole || den3.pole) {
        c.mant = dd(0.0);
        return c;
    }
    dd L = num1.value + num2.value - lg_g1_ - lg_g2_0_ - den1.value - den2.value - den3.value;
    int sign = num1.sign * num2.sign * den1.sign * den2.sign * den3.sign * (lg_g1_sign_flip_ ? -1 : 1);
    Scaled s = scaled_exp(L, sign);
    c.mant = s.mant;
    c.e2 = s.e2;
    c.log_mag = std::abs(num1.value.hi) + std::abs(num2.value.hi) + std::abs(den1.value.hi) +
                std::abs(den2.value.hi) + std::abs(den3.value.hi);
    return c;
}

const BivariateML::Coef& BivariateML::coef(std::int64_t m, std::int64_t n) {
    while (static_cast<std::int64_t>(rows_.size()) <= n) rows_.emplace_back();
    auto& row = rows_[n];
    while (static_cast<std::int64_t>(row.size()) <= m) row.push_back(make_coef(static_cast<std::int64_t>(row.size()), n));
    return row[m];
}

SeriesResult BivariateML::operator()(double x, double y) {
    SeriesResult res;
    dd sum(0.0);
    double maxabs = 0.0;
    double errsum = 0.0;
    double tails = 0.0;
    const double lx = x != 0.0 ? std::abs(std::log(std::abs(x))) : 0.0;
    const double ly = y != 0.0 ? std::abs(std::log(std::abs(y))) : 0.0;
    const Scaled xs = scaled_of(x);
    const Scaled ys = scaled_of(y);

    // Negative arguments give alternating sums whose value stays far below the
    // peak term; once rounding at the peak exceeds abs_tol the sum is hopeless.
    const bool alternating = opt_.throw_on_failure && x <= 0.0 && y <= 0.0;
    const double abort_mag = opt_.abs_tol / kRoundUnit;

    Scaled yp;
    DecayTracker rows;
    std::int64_t used = 0;

    for (std::int64_t n = 0;; ++n) {
        Scaled xp;
        DecayTracker cols;
        double row_abs = 0.0;
        double row_tol_scale = std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(n + 2, 60)));
        for (std::int64_t m = 0;; ++m) {
            if (used >= opt_.max_terms) {
                res.converged = false;
                break;
            }
            const Coef& c = coef(m, n);
            double mag = 0.0;
            ++used;
            if (c.mant.hi != 0.0) {
                dd t = unscale(c.mant * xp.mant * yp.mant, c.e2 + xp.e2 + yp.e2);
                sum += t;
                mag = std::abs(t.hi);
                row_abs += mag;
                maxabs = std::max(maxabs, mag);
                errsum += mag * (c.log_mag + m * lx + n * ly + m + n + 8.0);
                if (alternating && mag > abort_mag)
                    throw CancellationError("biml_e2: term magnitude " + format_sig(mag, 3) +
                                            " leaves no significant digits at abs_tol");
            }
            if (x == 0.0) break;
            cols.push(mag);
            bool past_poles = sig_.d1 + sig_.a3 * m + sig_.b2 * n > 1.0 && sig_.d2 + sig_.a4 * m > 1.0;
            if (cols.settled() && past_poles) {
                double tail = cols.tail(mag);
                if (tail <= target_tol(opt_, sum) * row_tol_scale) {
                    tails += tail;
                    row_abs += tail;
                    break;
                }
            }
            xp.mant *= xs.mant;
            xp.e2 += xs.e2;
            xp.normalize();
        }
        if (!res.converged || y == 0.0) break;
        rows.push(row_abs);
        bool past_poles = sig_.d1 + sig_.b2 * n > 1.0 && sig_.d3 + sig_.b3 * n > 1.0;
        if (rows.settled() && past_poles) {
            double tail = rows.tail(row_abs);
            if (tail <= target_tol(opt_, sum)) {
                tails += tail;
                break;
            }
        }
        yp.mant *= ys.mant;
        yp.e2 += ys.e2;
        yp.normalize();
    }
    res.terms_used = used;
    res.value = sum.to_double();
    res.est_abs_error = res.converged ? tails + errsum * kRoundUnit : std::numeric_limits<double>::infinity();
    return finish(res, maxabs, opt_, "biml_e2");
}

SeriesResult biml_e2(const BivMLSignature& sig, double x, double y, const SeriesOptions& opt) {
    BivariateML e(sig, opt);
    return e(x, y);
}

}  // namespace fracwdw
