#include "fracwdw/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"

namespace fracwdw {

const char* to_string(TransmissionRule r) {
    return r == TransmissionRule::AsPublished ? "published" : "consistent";
}

TransmissionRule parse_transmission_rule(const std::string& s) {
    if (s == "consistent") return TransmissionRule::ClosedFormConsistent;
    if (s == "published") return TransmissionRule::AsPublished;
    throw ConfigError("transmission rule must be 'consistent' or 'published', got '" + s + "'");
}

RegionParams ProblemConfig::region(int i) const {
    switch (i) {
        case 1: return {alpha1, beta1, gamma1, 0.0};
        case 2: return {alpha2, beta2, gamma2, T1};
        case 3: return {alpha3, beta3, gamma3, T2};
    }
    throw Error("region index must be 1, 2 or 3");
}

int ProblemConfig::region_of(double t) const {
    if (t <= T1) return 1;
    if (t <= T2) return 2;
    return 3;
}

void ProblemConfig::validate() const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    need(T1 > 0.0 && T1 < T2 && T2 < T, "times violate 0 < T1 < T2 < T");
    need(beta1 > 1.0 && beta1 <= 2.0, "beta1 violates 1 < beta1 <= 2");
    need(beta2 > 0.0 && beta2 <= 1.0, "beta2 violates 0 < beta2 <= 1");
    need(beta3 > 1.0 && beta3 <= 2.0, "beta3 violates 1 < beta3 <= 2");
    need(alpha1 > 0.0 && alpha2 > 0.0 && alpha3 > 0.0, "alpha1, alpha2, alpha3 must be positive");
    need(gamma1 > 0.0 && gamma2 > 0.0 && gamma3 > 0.0, "gamma1, gamma2, gamma3 must be positive");
    need(std::isfinite(delta), "delta must be finite");
    double x = xi_value();
    need(x >= T1 && x <= T2, "xi violates T1 <= xi <= T2");
    need(K >= 1, "K must be at least 1");
    need(n_r >= 2 && n_t >= 2, "n_r and n_t must be at least 2");
    need(abs_tol > 0.0 && resid_tol > 0.0 && det_tol_value() > 0.0, "tolerances must be positive");
    need(noise_ceiling >= 0.0, "noise_ceiling must be non-negative");
    if (strict_uniqueness)
        need(strict_hypotheses_hold(), "strict mode requires alpha2 = 1 and gamma2 = beta2");
}

std::vector<std::string> ProblemConfig::warnings() const {
    std::vector<std::string> w;
    if (!strict_hypotheses_hold())
        w.push_back("alpha2 = 1 and gamma2 = beta2 do not both hold; M1 != 0 is not guaranteed");
    if (!(beta1 > gamma1)) w.push_back("beta1 > gamma1 does not hold");
    if (!(beta2 > gamma2)) w.push_back("beta2 > gamma2 does not hold");
    double x = xi_value();
    if (x == T1) w.push_back("xi = T1 makes M1 = 0 and the inverse system singular");
    if (x == T2) w.push_back("xi = T2 sits on the region interface");
    return w;
}

BivMLSignature region_signature(const RegionParams& rp, double d) {
    BivMLSignature s;
    s.g1 = rp.gamma;
    s.a1 = rp.gamma;
    s.b1 = 1.0;
    s.g2 = 1.0;
    s.a2 = 0.0;
    s.d1 = d;
    s.a3 = rp.beta;
    s.b2 = rp.alpha;
    s.d2 = rp.gamma;
    s.a4 = rp.gamma;
    s.d3 = 1.0;
    s.b3 = 1.0;
    return s;
}

namespace {

// log of the largest term |x|^m / Gamma(d + beta m) of the leading row.
double peak_log_term(double beta, double d, double x) {
    double lx = std::log(std::abs(x));
    double best = -INFINITY;
    for (int m = 0; m < 100000; ++m) {
        double a = d + beta * m;
        if (a <= 0.0) continue;
        double v = m * lx - std::lgamma(a);
        best = std::max(best, v);
        if (m > 5 && v < best - 50.0) break;
    }
    return best;
}

}  // namespace

ModeKernel::ModeKernel(const ProblemConfig& cfg, const EigenSpec& e) : cfg_(cfg), eigen_(e) {}

double ModeKernel::G(int region, double d, double tau) {
    RegionParams rp = cfg_.region(region);
    if (tau == 0.0) return gamma_fn(rp.gamma) * recip_gamma(d);
    auto key = std::make_pair(region, d);
    auto it = fns_.find(key);
    if (it == fns_.end()) {
        SeriesOptions opt;
        opt.abs_tol = cfg_.abs_tol;
        it = fns_.emplace(key, std::make_unique<BivariateML>(region_signature(rp, d), opt)).first;
    }
    double x = eigen_.lambda_k * std::pow(tau, rp.beta);
    double y = cfg_.delta * std::pow(tau, rp.alpha);
    // Rounding at the peak term of double-double sums: beyond abs_tol the
    // series cannot succeed, so go straight to contour inversion.
    const double hopeless = std::log(cfg_.abs_tol) + 104.0 * std::numbers::ln2;
    auto invert = [&](const std::string& why) {
        SeriesResult r = e2_region_inversion(rp.alpha, rp.beta, rp.gamma, d, x, y);
        if (!r.converged || r.est_abs_error > cfg_.abs_tol)
            throw CancellationError(why + "; contour inversion error " + format_number(r.est_abs_error) +
                                    " above tolerance");
        ++inversions_;
        return r.value;
    };
    double e2 = 0.0;
    if (x < 0.0 && peak_log_term(rp.beta, d, x) > hopeless) {
        e2 = invert("E2 series: peak term beyond double-double range");
    } else {
        try {
            e2 = (*it->second)(x, y).value;
        } catch (const Error& series) {
            if (!dynamic_cast<const CancellationError*>(&series) && !dynamic_cast<const NonConvergence*>(&series))
                throw;
            e2 = invert(series.what());
        }
    }
    double& mx = max_e2_[key];
    mx = std::max(mx, std::abs(e2));
    return gamma_fn(rp.gamma) * e2;
}

double ModeKernel::max_abs_e2(int region, double d) const {
    auto it = max_e2_.find({region, d});
    return it == max_e2_.end() ? 0.0 : it->second;
}

double ModeKernel::power_term(int region, double d, double tau, int order) {
    double e = d - 1.0 - order;
    if (tau == 0.0) {
        if (e > 0.0) return 0.0;
        if (e == 0.0) return G(region, d - order, 0.0);
        return std::copysign(INFINITY, G(region, d - order, 0.0));
    }
    return std::pow(tau, e) * G(region, d - order, tau);
}

namespace {

template <class F>
double tagged(const char* what, F&& f) {
    auto msg = [&](const Error& e) { return std::string(what) + ": " + e.what(); };
    try {
        return f();
    } catch (const CancellationError& e) {
        throw CancellationError(msg(e));
    } catch (const NonConvergence& e) {
        throw NonConvergence(msg(e));
    } catch (const PoleError& e) {
        throw PoleError(msg(e));
    }
}

}  // namespace

Blocks ModeKernel::blocks() {
    Blocks b;
    double t1 = cfg_.T1;
    double p1 = std::pow(t1, cfg_.beta1);
    double xs = cfg_.xi_value() - t1;
    double w = cfg_.T2 - t1;
    b.P = tagged("M2", [&] { return p1 * G(1, cfg_.beta1 + 1.0, t1); });
    b.Q = tagged("M3", [&] { return p1 * G(1, cfg_.beta1 + 2.0, t1); });
    b.R = tagged("M4", [&] { return p1 * G(1, cfg_.beta1, t1); });
    b.S = tagged("M1", [&] { return xs == 0.0 ? 0.0 : std::pow(xs, cfg_.beta2) * G(2, cfg_.beta2 + 1.0, xs); });
    b.W = tagged("W", [&] { return std::pow(w, cfg_.beta2) * G(2, cfg_.beta2 + 1.0, w); });
    return b;
}

Blocks evaluate_blocks(ModeKernel& kernel) { return kernel.blocks(); }

MNotations m_notations(double lambda, double T1, const Blocks& b) {
    MNotations m;
    m.M1 = dd(b.S);
    m.M2 = dd(b.P);
    m.M3 = T1 + two_prod(lambda, T1) * b.Q;
    m.M4 = dd(b.R) / T1;
    m.W = dd(b.W);
    return m;
}

dd delta_printed(double lambda, double T1, const Blocks& b) {
    return dd(1.0) / lambda + T1 + two_prod(lambda, T1) * b.Q + b.P;
}

dd delta_rule(double lambda, const MNotations& m, double s) {
    return (1.0 + lambda * m.M2 - (s * lambda) * m.M3) / lambda;
}

Mat3 system_matrix(double lambda, const MNotations& m, double s) {
    Mat3 a;
    a[0] = {dd(0.0), 1.0 + lambda * m.M1, m.M1};
    a[1] = {m.M3, dd(-1.0), m.M2};
    a[2] = {1.0 + lambda * m.M2, dd(-s * lambda), m.M4 - 1.0};
    return a;
}

Vec3 system_rhs(double lambda, const MNotations& m, double phi, double psi) {
    return {dd(psi), -(phi * (1.0 + lambda * m.M2)), -(two_prod(lambda, phi) * m.M4)};
}

dd det3(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

dd tilde_delta_direct(double lambda, const MNotations& m, double s) { return det3(system_matrix(lambda, m, s)); }

dd tilde_delta_expanded(double lambda, double T1, const Blocks& b) {
    dd L(lambda), L2 = sqr(L);
    dd P(b.P), Q(b.Q), R(b.R), S(b.S), T(T1);
    dd P2 = sqr(P);
    return S + T + P + L * T * Q + 2.0 * L * P * S + L * P2 + L2 * S * P2 + 2.0 * L * S * T + 2.0 * L2 * S * T * Q - R -
           L * Q * R - L * S * R - L2 * S * Q * R;
}

PrintedForms printed_forms(double lambda, double T1, const Blocks& b, double phi, double psi) {
    dd L(lambda), L2 = sqr(L), L3 = L2 * L;
    dd P(b.P), Q(b.Q), R(b.R), S(b.S), W(b.W), T(T1);
    dd P2 = sqr(P);
    dd ph(phi), ps(psi);
    dd M4 = R / T;
    PrintedForms o;
    o.tilde_delta = tilde_delta_expanded(lambda, T1, b);
    o.num_A2 = ps - ps * M4 + ph * M4 - ph - 2.0 * L * ph * S - L * ph * P - 2.0 * L2 * ph * S * P - L * ps * P;
    o.num_A3 = ps * P + L * ps * P2 - L * ph * S * R - L2 * ph * S * R * Q + ph * S + 2.0 * L * ph * S * P +
               L2 * ph * S * P2 - ps * R - L * ps * R * Q + ps * T + L * ps * T * Q;
    o.num_f = ps - ph - 2.0 * L * ph * P - L2 * ph * P2 - L * ph * S - 2.0 * L2 * ph * S * P - L3 * ph * S * P2 +
              L * ps * T + L2 * ps * T * Q + L * ps * P + L * ph * R + L2 * ph * R * Q + L2 * ph * S * R +
              L3 * ph * S * R * Q;
    o.num_A4 = o.num_A3 + 2.0 * L * ps * P * W + L2 * ps * P2 * W - L * ps * R * W - L2 * ps * R * Q * W + ps * W -
               ph * W - 2.0 * L * ph * P * W - L2 * ph * P2 * W + L * ph * R * W + L2 * ph * R * Q * W;
    o.num_A5 = -2.0 * L * ph * S - 4.0 * L2 * ph * S * P - 2.0 * L3 * ph * S * P2 + 4.0 * L2 * ph * S * R +
               L3 * ph * S * R * Q - L2 * ph * W * R - L3 * ph * W * Q * R + ps - ph - 2.0 * L * ph * P -
               L2 * ph * P2 + L * ph * R + L2 * ph * R * Q - L2 * ps * P2 + L * ps * R + L2 * ps * R * Q -
               2.0 * L2 * ps * P * W - L3 * ps * P2 * W + L2 * ps * R * W + L3 * ps * R * Q * W - L * ps * W +
               L * ph * W - 2.0 * L2 * ph * P * W + L3 * ph * P2 * W;
    o.A2 = o.num_A2 / o.tilde_delta;
    o.A3 = o.num_A3 / o.tilde_delta;
    o.f = o.num_f / o.tilde_delta;
    o.A4 = o.num_A4 / o.tilde_delta;
    o.A5 = o.num_A5 / o.tilde_delta;
    return o;
}

Solve3 cramer_solve(const Mat3& a, const Vec3& b, double det_tol) {
    dd D = det3(a);
    if (!(std::abs(D.hi) > det_tol))
        throw SingularModeError("inverse system determinant " + format_sig(D.hi, 3) + " within det_tol");
    auto col = [&](int j) {
        Mat3 c = a;
        for (int i = 0; i < 3; ++i) c[i][j] = b[i];
        return (det3(c) / D).to_double();
    };
    return {col(0), col(1), col(2)};
}

Solve3 generic_solve(const Mat3& a, const Vec3& b) {
    Eigen::Matrix3d m;
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = a[i][j].to_double();
        v(i) = b[i].to_double();
    }
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(m);
    Eigen::Vector3d x0 = lu.solve(v);
    std::array<dd, 3> x = {dd(x0(0)), dd(x0(1)), dd(x0(2))};
    for (int it = 0; it < 3; ++it) {
        Eigen::Vector3d r;
        for (int i = 0; i < 3; ++i) {
            dd s = b[i];
            for (int j = 0; j < 3; ++j) s -= a[i][j] * x[j];
            r(i) = s.to_double();
        }
        Eigen::Vector3d dx = lu.solve(r);
        for (int i = 0; i < 3; ++i) x[i] += dx(i);
    }
    return {x[0].to_double(), x[1].to_double(), x[2].to_double()};
}

namespace {

void fill_common(ModeData& md, const EigenSpec& e, const Blocks& b, const MNotations& m, double T1, double s) {
    double lambda = e.lambda_k;
    md.eigen = e;
    md.blocks = b;
    md.M1 = m.M1.to_double();
    md.M2 = m.M2.to_double();
    md.M3 = m.M3.to_double();
    md.M4 = m.M4.to_double();
    md.W = m.W.to_double();
    md.Delta_k = delta_printed(lambda, T1, b).to_double();
    md.Delta_rule = delta_rule(lambda, m, s).to_double();
    md.TildeDelta_k = tilde_delta_direct(lambda, m, s).to_double();
}

void chain_tail(ModeData& md, const MNotations& m, double s) {
    double lambda = md.eigen.lambda_k;
    dd A4 = md.A3 * (1.0 + lambda * m.W) + md.f_k * m.W;
    md.A4 = A4.to_double();
    md.A5 = (md.f_k + (s * lambda) * A4).to_double();
}

}  // namespace

ModeData forward_coefficients(const ProblemConfig& cfg, const EigenSpec& e, const Blocks& b, double phi_k,
                              double f_k) {
    double lambda = e.lambda_k;
    double s = cfg.sign();
    MNotations m = m_notations(lambda, cfg.T1, b);
    ModeData md;
    fill_common(md, e, b, m, cfg.T1, s);
    dd D = delta_rule(lambda, m, s);
    if (!(std::abs(D.hi) > cfg.det_tol_value()))
        throw SingularModeError("forward determinant " + format_sig(D.hi, 3) + " within det_tol");
    md.phi_k = phi_k;
    md.f_k = f_k;
    md.A1 = phi_k;
    dd num = f_k * (1.0 - m.M4 + (s * lambda) * m.M2) + (s * lambda * phi_k) * (1.0 + lambda * m.M2) -
             two_prod(lambda, phi_k) * m.M4;
    dd A2 = num / (lambda * D);
    dd A3 = phi_k * (1.0 + lambda * m.M2) + A2 * m.M3 + f_k * m.M2;
    md.A2 = A2.to_double();
    md.A3 = A3.to_double();
    md.psi_k = (A3 * (1.0 + lambda * m.M1) + f_k * m.M1).to_double();
    chain_tail(md, m, s);
    return md;
}

ModeData forward_coefficients(const ProblemConfig& cfg, ModeKernel& kernel, double phi_k, double f_k) {
    return forward_coefficients(cfg, kernel.eigen(), kernel.blocks(), phi_k, f_k);
}

ModeData cramer_inverse(const ProblemConfig& cfg, const EigenSpec& e, const Blocks& b, double phi_k, double psi_k) {
    double lambda = e.lambda_k;
    double s = cfg.sign();
    MNotations m = m_notations(lambda, cfg.T1, b);
    if (cfg.strict_uniqueness && m.M1.hi == 0.0) throw SingularModeError("M1 = 0 in strict mode");
    ModeData md;
    fill_common(md, e, b, m, cfg.T1, s);
    Solve3 x = cramer_solve(system_matrix(lambda, m, s), system_rhs(lambda, m, phi_k, psi_k), cfg.det_tol_value());
    md.phi_k = phi_k;
    md.psi_k = psi_k;
    md.A1 = phi_k;
    md.A2 = x.A2;
    md.A3 = x.A3;
    md.f_k = x.f;
    chain_tail(md, m, s);
    return md;
}

ModeData cramer_inverse(const ProblemConfig& cfg, ModeKernel& kernel, double phi_k, double psi_k) {
    return cramer_inverse(cfg, kernel.eigen(), kernel.blocks(), phi_k, psi_k);
}

double temporal_solution(int region, const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double t,
                         int order) {
    return temporal_local(region, cfg, kernel, md, t - cfg.region(region).start, order);
}

double temporal_local(int region, const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double tau,
                      int order) {
    RegionParams rp = cfg.region(region);
    double lambda = md.eigen.lambda_k;
    double c0 = 0, c1 = 0;
    std::array<std::pair<double, double>, 2> terms{};
    int nterms = 0;
    switch (region) {
        case 1:
            c0 = md.A1;
            c1 = md.A2;
            terms[nterms++] = {md.A1 * lambda + md.f_k, rp.beta + 1.0};
            terms[nterms++] = {md.A2 * lambda, rp.beta + 2.0};
            break;
        case 2:
            c0 = md.A3;
            terms[nterms++] = {md.A3 * lambda + md.f_k, rp.beta + 1.0};
            break;
        default:
            c0 = md.A4;
            c1 = md.A5;
            terms[nterms++] = {md.A4 * lambda + md.f_k, rp.beta + 1.0};
            terms[nterms++] = {md.A5 * lambda, rp.beta + 2.0};
            break;
    }
    double v = order == 0 ? c0 + c1 * tau : (order == 1 ? c1 : 0.0);
    for (int i = 0; i < nterms; ++i)
        if (terms[i].first != 0.0) v += terms[i].first * kernel.power_term(region, terms[i].second, tau, order);
    return v;
}

double temporal_solution(const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double t) {
    return temporal_solution(cfg.region_of(t), cfg, kernel, md, t, 0);
}

double ModalResiduals::max() const {
    return std::max({value_T1, slope_T1, value_T2, slope_T2, measurement, continuity_row, transmission_row, cont_T1, cont_T2});
}

ModalResiduals modal_residuals(const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md) {
    double lambda = md.eigen.lambda_k;
    double s = cfg.sign();
    MNotations m = m_notations(lambda, cfg.T1, md.blocks);
    ModalResiduals r;
    double u1 = temporal_solution(1, cfg, kernel, md, cfg.T1);
    double u2a = temporal_solution(2, cfg, kernel, md, cfg.T1);
    double u2b = temporal_solution(2, cfg, kernel, md, cfg.T2);
    double u3 = temporal_solution(3, cfg, kernel, md, cfg.T2);
    r.value_T1 = std::abs(u1 - md.A3);
    r.slope_T1 = std::abs(temporal_solution(1, cfg, kernel, md, cfg.T1, 1) - (md.f_k + s * lambda * md.A3));
    r.value_T2 = std::abs(u2b - md.A4);
    r.slope_T2 = std::abs(temporal_solution(3, cfg, kernel, md, cfg.T2, 1) - (md.f_k + s * lambda * md.A4));
    r.measurement = std::abs(temporal_solution(2, cfg, kernel, md, cfg.xi_value()) - md.psi_k);
    dd A2(md.A2), A3(md.A3), f(md.f_k), A1(md.A1);
    r.continuity_row = std::abs((A2 * m.M3 - A3 + f * m.M2 + A1 * (1.0 + lambda * m.M2)).to_double());
    r.transmission_row =
        std::abs((A2 * (1.0 + lambda * m.M2) - (s * lambda) * A3 + f * (m.M4 - 1.0) + (lambda * A1) * m.M4).to_double());
    r.cont_T1 = std::abs(u1 - u2a);
    r.cont_T2 = std::abs(u2b - u3);
    return r;
}

}  // namespace fracwdw
