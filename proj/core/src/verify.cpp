#include "fracwdw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"
#include "fracwdw/fracops.hpp"
#include "fracwdw/parallel.hpp"

namespace fracwdw {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Info: return "info";
    }
    return "info";
}

bool VerificationReport::all_pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "mode: " << mode << "\n";
    os << "K: " << K << "\n";
    os << "K_effective: " << K_effective << "\n";
    os << "overall: " << (all_pass() ? "pass" : "fail") << "\n";
    os << "\ncheck_map:\n";
    for (const auto& c : checks) os << "  " << c.id << " -> " << c.relation << "\n";
    for (const auto& c : checks) {
        os << "\ncheck: " << c.id << "\n";
        os << "relation: " << c.relation << "\n";
        os << "status: " << to_string(c.status) << "\n";
        os << "measured: " << format_number(c.measured) << "\n";
        os << "tolerance: " << format_number(c.tolerance) << "\n";
        if (!c.detail.empty()) os << "detail: " << c.detail << "\n";
    }
    return os.str();
}

std::string VerificationReport::to_csv() const {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    std::ostringstream os;
    os << "id,relation,status,measured,tolerance,detail\n";
    for (const auto& c : checks)
        os << c.id << "," << quote(c.relation) << "," << to_string(c.status) << "," << format_number(c.measured) << ","
           << format_number(c.tolerance) << "," << quote(c.detail) << "\n";
    return os.str();
}

double rel_diff(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

bool eventually_decreasing(const std::vector<double>& v) {
    if (v.size() < 2) return false;
    std::size_t start = v.size() / 2;
    if (start + 1 >= v.size()) start = v.size() - 2;
    for (std::size_t i = start; i + 1 < v.size(); ++i)
        if (!(v[i + 1] < v[i])) return false;
    return true;
}

OdeResiduals ode_residuals(const ProblemConfig& cfg, ModeKernel& kern, const ModeData& md, int times_per_region) {
    OdeResiduals out;
    double lambda = md.eigen.lambda_k;
    const double len[3] = {cfg.T1, cfg.T2 - cfg.T1, cfg.T - cfg.T2};
    for (int reg = 1; reg <= 3; ++reg) {
        RegionParams rp = cfg.region(reg);
        FracOpSpec spec{0.0, rp.alpha, rp.beta, rp.gamma, cfg.delta, static_cast<int>(std::ceil(rp.beta))};
        DerivFn y = [&](double x, int order) { return temporal_local(reg, cfg, kern, md, x, order); };
        for (int i = 1; i <= times_per_region; ++i) {
            double tau = len[reg - 1] * i / (times_per_region + 1.0);
            double D = 0.0, U = 0.0;
            try {
                D = prabhakar_caputo_local(spec, y, tau);
                U = temporal_local(reg, cfg, kern, md, tau);
            } catch (const Error& e) {
                if (out.first_error.empty()) out.first_error = e.what();
                ++out.skipped;
                continue;
            }
            double scale = std::abs(md.f_k) + std::abs(lambda * U);
            if (scale == 0.0) continue;
            out.consistent[reg - 1] = std::max(out.consistent[reg - 1], std::abs(D - (md.f_k + lambda * U)) / scale);
            out.printed[reg - 1] = std::max(out.printed[reg - 1], std::abs(D - (md.f_k - lambda * U)) / scale);
            ++out.points;
        }
    }
    return out;
}

TransmitResiduals transmit_residuals(const ProblemConfig& cfg, ModeKernel& kern, const ModeData& md) {
    TransmitResiduals r;
    double eps = 1e-5 * (cfg.T2 - cfg.T1);
    auto rich = [](double g1, double g2, double p) {
        double c = std::pow(2.0, p);
        return (c * g1 - g2) / (c - 1.0);
    };
    RegionParams r2 = cfg.region(2);
    FracOpSpec spec{0.0, r2.alpha, r2.beta, r2.gamma, cfg.delta, static_cast<int>(std::ceil(r2.beta))};
    DerivFn y2 = [&](double x, int order) { return temporal_local(2, cfg, kern, md, x, order); };
    auto frac2 = [&](double tau) { return prabhakar_caputo_local(spec, y2, tau); };
    double w = cfg.T2 - cfg.T1;

    auto s1 = [&](double e) { return temporal_local(1, cfg, kern, md, cfg.T1 - e, 1); };
    r.slope_T1 = rich(s1(eps), s1(2 * eps), 1.0);
    r.frac_T1 = rich(frac2(eps), frac2(2 * eps), cfg.beta2);
    r.frac_T2 = rich(frac2(w - eps), frac2(w - 2 * eps), 1.0);
    auto s3 = [&](double e) { return temporal_local(3, cfg, kern, md, e, 1); };
    r.slope_T2 = rich(s3(eps), s3(2 * eps), cfg.beta3 - 1.0);
    double scale = 1.0 + std::abs(md.phi_k) + std::abs(md.f_k);
    r.at_T1 = std::abs(r.frac_T1 - r.slope_T1) / scale;
    r.at_T2 = std::abs(r.frac_T2 - r.slope_T2) / scale;
    return r;
}

IdentityResiduals identity_residuals(const ProblemConfig& cfg, double lambda, const Blocks& b, double phi, double psi) {
    IdentityResiduals out;
    double T1 = cfg.T1;
    MNotations m = m_notations(lambda, T1, b);
    PrintedForms pf = printed_forms(lambda, T1, b, phi, psi);
    dd direct = tilde_delta_direct(lambda, m, -1.0);
    out.determinant = std::abs((direct - pf.tilde_delta).to_double()) / std::abs(direct.to_double());

    Solve3 g = generic_solve(system_matrix(lambda, m, -1.0), system_rhs(lambda, m, phi, psi));
    out.cramer = std::max({rel_diff(pf.A2.to_double(), g.A2), rel_diff(pf.A3.to_double(), g.A3),
                           rel_diff(pf.f.to_double(), g.f)});

    dd A4 = pf.A3 * (1.0 + lambda * m.W) + pf.f * m.W;
    dd A5 = pf.f - lambda * A4;
    out.A4 = rel_diff(pf.A4.to_double(), A4.to_double());
    out.A5 = rel_diff(pf.A5.to_double(), A5.to_double());

    dd L(lambda), L3 = L * L * L;
    double xs = std::pow(cfg.xi_value() - T1, cfg.beta2);
    dd lit = pf.num_f - L * psi * T1 + L * psi * std::pow(T1, cfg.beta1) - L3 * phi * b.S * b.R * b.Q +
             L3 * phi * (xs == 0.0 ? 0.0 : b.S / xs) * b.R * b.Q;
    out.f_literal = rel_diff((lit / pf.tilde_delta).to_double(), g.f);
    return out;
}

namespace {

struct ModeChecks {
    bool active = false;
    OdeResiduals ode;
    TransmitResiduals tr;
    IdentityResiduals id;
    double cont = 0.0;
    double measurement = 0.0;
    double modal = 0.0;
    double delta = 0.0, tilde_delta = 0.0;
    bool tr_ok = false;
    std::string error;
};

std::string join_values(const std::vector<int>& k, const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(k[i]) + ":" + format_sig(v[i], 6);
    }
    return s;
}

}  // namespace

VerificationReport run_battery(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& data,
                               RunMode mode, const BatteryOptions& opt) {
    VerificationReport rep;
    rep.mode = mode == RunMode::Forward ? "forward" : "inverse";
    rep.K = cfg.K;
    SolutionGrid grid;
    double psi_residual = 0.0;
    if (mode == RunMode::Forward) {
        grid = forward_solve(cfg, phi, data);
    } else {
        InverseResult inv = inverse_solve(cfg, phi, data);
        psi_residual = inv.psi_residual;
        grid = std::move(inv.grid);
    }
    rep.K_effective = grid.K_effective;
    bool consistent = cfg.rule == TransmissionRule::ClosedFormConsistent;

    std::vector<ModeChecks> mc(grid.ledger.size());
    parallel_for(static_cast<int>(grid.ledger.size()), [&](int i) {
        const ModeOutcome& o = grid.ledger[i];
        const ModeData& md = o.data;
        if (!o.retained || (md.phi_k == 0.0 && md.f_k == 0.0 && md.psi_k == 0.0)) return;
        ModeChecks& c = mc[i];
        c.active = true;
        double scale = 1.0 + std::abs(md.phi_k) + std::abs(md.f_k);
        c.cont = std::max(o.residuals.cont_T1, o.residuals.cont_T2) / scale;
        c.measurement = o.residuals.measurement / (scale + std::abs(md.psi_k));
        c.modal = o.residuals.max() / (scale + std::abs(md.psi_k));
        MNotations m = m_notations(md.eigen.lambda_k, cfg.T1, md.blocks);
        c.delta = md.Delta_k;
        c.tilde_delta = tilde_delta_direct(md.eigen.lambda_k, m, -1.0).to_double();
        ModeKernel kern(cfg, o.eigen);
        if (opt.times_per_region > 0) c.ode = ode_residuals(cfg, kern, md, opt.times_per_region);
        try {
            c.tr = transmit_residuals(cfg, kern, md);
            c.tr_ok = true;
        } catch (const Error& e) {
            c.error = "mode " + std::to_string(o.k) + ": " + e.what();
        }
        c.id = identity_residuals(cfg, md.eigen.lambda_k, md.blocks, md.phi_k, md.psi_k);
    });

    std::string tr_error, ode_error;
    int ode_points = 0, ode_skipped = 0, tr_modes = 0, tr_skipped = 0;
    double ode_c[3] = {0, 0, 0}, ode_p[3] = {0, 0, 0};
    double tr1 = 0, tr2 = 0, cont = 0, meas = 0, modal = 0;
    double det = 0, cram = 0, a4 = 0, a5 = 0, flit = 0;
    std::vector<int> ks;
    std::vector<double> dgap, tgap;
    int active = 0;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        const ModeChecks& c = mc[i];
        if (!c.active) continue;
        ++active;
        ode_points += c.ode.points;
        ode_skipped += c.ode.skipped;
        if (ode_error.empty() && !c.ode.first_error.empty())
            ode_error = "mode " + std::to_string(grid.ledger[i].k) + ": " + c.ode.first_error;
        if (c.tr_ok) {
            ++tr_modes;
        } else {
            ++tr_skipped;
            if (tr_error.empty()) tr_error = c.error;
        }
        for (int r = 0; r < 3; ++r) {
            ode_c[r] = std::max(ode_c[r], c.ode.consistent[r]);
            ode_p[r] = std::max(ode_p[r], c.ode.printed[r]);
        }
        tr1 = std::max(tr1, c.tr.at_T1);
        tr2 = std::max(tr2, c.tr.at_T2);
        cont = std::max(cont, c.cont);
        meas = std::max(meas, c.measurement);
        modal = std::max(modal, c.modal);
        det = std::max(det, c.id.determinant);
        cram = std::max(cram, c.id.cramer);
        a4 = std::max(a4, c.id.A4);
        a5 = std::max(a5, c.id.A5);
        flit = std::max(flit, c.id.f_literal);
        ks.push_back(grid.ledger[i].k);
        dgap.push_back(std::abs(c.delta - cfg.T1));
        tgap.push_back(std::abs(c.tilde_delta - cfg.T1));
    }
    auto pass = [](bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; };
    auto add = [&](std::string id, std::string rel, CheckStatus st, double meas_v, double tol, std::string detail) {
        rep.checks.push_back({std::move(id), std::move(rel), st, meas_v, tol, std::move(detail)});
    };
    std::string sign_note = consistent ? "expected D U = f + lambda U" : "expected D U = f - lambda U";
    const char* region_rel[3] = {"fractional wave equation on (0, T1)", "fractional diffusion equation on (T1, T2)",
                                 "fractional wave equation on (T2, T)"};
    bool need = active > 0 && opt.times_per_region > 0;
    std::string ode_note = "; " + std::to_string(ode_points) + " points evaluated, " + std::to_string(ode_skipped) +
                           " skipped" + (ode_error.empty() ? "" : " (first: " + ode_error + ")");
    for (int r = 0; r < 3; ++r) {
        double mv = consistent ? ode_c[r] : ode_p[r];
        double other = consistent ? ode_p[r] : ode_c[r];
        add("a" + std::to_string(r + 1) + "_region" + std::to_string(r + 1) + "_equation", region_rel[r],
            pass(mv <= opt.ode_tol && (!need || ode_points > 0)), mv, opt.ode_tol,
            sign_note + "; opposite sign gives " + format_sig(other, 3) + ode_note);
    }
    double init_tol = opt.identity_tol * std::max(1, grid.K_effective);
    add("b_initial_condition", "u(0, r) = phi(r)", pass(grid.initial_residual <= init_tol), grid.initial_residual,
        init_tol,
        "against the retained partial sum of phi; tail bound " + format_sig(grid.tail_bound, 3) +
            ", skipped-mode data mass " + format_sig(grid.skipped_mass, 3));
    bool exact = cfg.zeros == ZeroMode::ExactRoot;
    add("c1_boundary_condition", "u(t, 1) = 0", exact ? pass(grid.boundary_residual <= 1e-12) : CheckStatus::Info,
        grid.boundary_residual, 1e-12,
        exact ? "exact Bessel zeros" : "asymptotic zeros leave J0(mu_k) != 0; reported only");
    add("c2_axis_condition", "r u_r(t, r) -> 0 as r -> 0", CheckStatus::Pass, 0.0, 0.0,
        "J0'(0) = 0 for every mode");
    std::string tr_note = "Richardson one-sided limits, eps = 1e-5 (T2 - T1); " + std::to_string(tr_modes) +
                          " modes evaluated, " + std::to_string(tr_skipped) + " skipped" +
                          (tr_error.empty() ? "" : " (first: " + tr_error + ")");
    add("d0_continuity", "u continuous across t = T1 and t = T2", pass(cont <= 1e-9), cont, 1e-9,
        "scaled by 1 + |phi_k| + |f_k|");
    add("d1_transmission_T1", "lim D u (T1+) = lim u_t (T1-)", pass(tr1 <= opt.transmit_tol && (active == 0 || tr_modes > 0)), tr1,
        opt.transmit_tol, tr_note);
    add("d2_transmission_T2", "lim D u (T2-) = lim u_t (T2+)", pass(tr2 <= opt.transmit_tol && (active == 0 || tr_modes > 0)), tr2,
        opt.transmit_tol, tr_note);
    if (mode == RunMode::Forward) {
        add("e_measurement", "u(xi, r) = psi(r)", pass(meas <= cfg.resid_tol), meas, cfg.resid_tol,
            "mode-wise, psi_k taken from the forward run");
    } else {
        double tol = grid.tail_bound + grid.skipped_mass + cfg.resid_tol;
        add("e_measurement", "u(xi, r) = psi(r)", pass(psi_residual <= tol), psi_residual, tol,
            "on the r grid; tolerance is tail bound + skipped-mode data mass + resid_tol");
    }
    add("e2_modal_relations", "modal interface and measurement relations", pass(modal <= cfg.resid_tol), modal,
        cfg.resid_tol, "largest scaled residual of the per-mode relations");
    add("f1_determinant_expansion", "written-out determinant of the inverse system",
        pass(det <= opt.identity_tol), det, opt.identity_tol, "against cofactor expansion in double-double");
    add("f2_cramer_closed_forms", "closed forms for A2, A3, f", pass(cram <= opt.identity_tol), cram,
        opt.identity_tol,
        "against pivoted LU; f numerator as printed (two misprints kept) differs by " + format_sig(flit, 3));
    add("f3_A4_closed_form", "closed form for A4", pass(a4 <= opt.identity_tol), a4, opt.identity_tol,
        "against substitution of A3 and f into the continuity relation at T2");
    add("f4_A5_closed_form", "closed form for A5", pass(a5 <= opt.identity_tol), a5, opt.identity_tol,
        "against substitution into the derivative relation at T2");
    bool hyp = cfg.lemma_hypotheses_hold();
    auto trend = [&](const std::vector<double>& v) {
        if (!hyp || v.size() < 2) return CheckStatus::Info;
        return pass(eventually_decreasing(v));
    };
    std::string hyp_note = hyp ? "" : "hypotheses beta1 > gamma1, beta2 > gamma2 not met; ";
    add("g1_delta_limit", "|Delta_k - T1| decreasing in k", trend(dgap), dgap.empty() ? 0.0 : dgap.back(), 0.0,
        hyp_note + "|Delta_k - T1| by k: " + join_values(ks, dgap));
    add("g2_tilde_delta_limit", "|tilde Delta_k - T1| decreasing in k", trend(tgap), tgap.empty() ? 0.0 : tgap.back(),
        0.0, hyp_note + "|tilde Delta_k - T1| by k: " + join_values(ks, tgap));
    return rep;
}

}  // namespace fracwdw
