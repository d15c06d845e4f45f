#include "fracwdw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracwdw/errors.hpp"
#include "fracwdw/parallel.hpp"

namespace fracwdw {

std::vector<double> time_nodes(const ProblemConfig& cfg, std::vector<int>* regions) {
    std::vector<double> t;
    std::vector<int> reg;
    const double ends[4] = {0.0, cfg.T1, cfg.T2, cfg.T};
    for (int r = 1; r <= 3; ++r) {
        double a = ends[r - 1], b = ends[r];
        for (int i = r == 1 ? 0 : 1; i < cfg.n_t; ++i) {
            t.push_back(i == cfg.n_t - 1 ? b : a + (b - a) * i / (cfg.n_t - 1));
            reg.push_back(r);
        }
    }
    if (regions) *regions = std::move(reg);
    return t;
}

std::vector<double> radial_nodes(int n) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (n - 1)));
    r.front() = 0.0;
    r.back() = 1.0;
    return r;
}

namespace {

struct ModeRun {
    ModeOutcome out;
    std::vector<double> ut;
    double uxi = 0.0;
};

// E2 signatures behind the bound constants, in order.
std::array<std::pair<int, double>, 6> bound_keys(const ProblemConfig& cfg) {
    return {{{1, cfg.beta1},
             {1, cfg.beta1 + 1.0},
             {1, cfg.beta1 + 2.0},
             {2, cfg.beta2 + 1.0},
             {3, cfg.beta3 + 1.0},
             {3, cfg.beta3 + 2.0}}};
}

ModeRun run_mode(const ProblemConfig& cfg, int k, double phi_k, double second, bool inverse,
                 const std::vector<double>& t, const std::vector<int>& reg) {
    ModeRun run;
    ModeOutcome& o = run.out;
    o.k = k;
    o.eigen = eigen(k, cfg.zeros);
    o.data.eigen = o.eigen;
    o.data.phi_k = phi_k;
    o.data.A1 = phi_k;
    (inverse ? o.data.psi_k : o.data.f_k) = second;
    run.ut.assign(t.size(), 0.0);
    if (phi_k == 0.0 && second == 0.0) {
        o.retained = true;
        return run;
    }
    try {
        ModeKernel kern(cfg, o.eigen);
        o.data = inverse ? cramer_inverse(cfg, kern, phi_k, second) : forward_coefficients(cfg, kern, phi_k, second);
        for (std::size_t i = 0; i < t.size(); ++i) run.ut[i] = temporal_solution(reg[i], cfg, kern, o.data, t[i]);
        run.uxi = temporal_solution(2, cfg, kern, o.data, cfg.xi_value());
        o.residuals = modal_residuals(cfg, kern, o.data);
        if (inverse) {
            MNotations m = m_notations(o.eigen.lambda_k, cfg.T1, o.data.blocks);
            Mat3 a = system_matrix(o.eigen.lambda_k, m, cfg.sign());
            dd cof = a[1][0] * a[2][1] - a[1][1] * a[2][0];
            o.noise_gain = std::abs((cof / det3(a)).to_double());
        }
        auto keys = bound_keys(cfg);
        for (int i = 0; i < 6; ++i) o.e2_max[i] = kern.max_abs_e2(keys[i].first, keys[i].second);
        o.retained = true;
    } catch (const Error& e) {
        o.retained = false;
        o.reason = e.what();
        run.ut.assign(t.size(), 0.0);
        run.uxi = 0.0;
    }
    return run;
}

std::vector<double> fb_coeffs(const RadialFunction& g, const std::vector<EigenSpec>& e) {
    std::vector<double> c(e.size(), 0.0);
    if (g.is_zero()) return c;
    parallel_for(static_cast<int>(e.size()), [&](int i) { c[i] = fourier_bessel_coeff(g, e[i]); });
    return c;
}

SolutionGrid assemble(const ProblemConfig& cfg, std::vector<ModeRun>& runs) {
    SolutionGrid g;
    g.t_nodes = time_nodes(cfg, &g.t_region);
    g.r_nodes = radial_nodes(cfg.n_r);
    const std::size_t nt = g.t_nodes.size(), nr = g.r_nodes.size();
    std::vector<std::vector<double>> J(runs.size(), std::vector<double>(nr));
    for (std::size_t k = 0; k < runs.size(); ++k)
        for (std::size_t j = 0; j < nr; ++j) J[k][j] = bessel_j0(runs[k].out.eigen.mu_k * g.r_nodes[j]);

    g.u.assign(nt * nr, 0.0);
    parallel_for(static_cast<int>(nt), [&](int i) {
        for (std::size_t j = 0; j < nr; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < runs.size(); ++k)
                if (runs[k].out.retained) s += runs[k].ut[i] * J[k][j];
            g.u[i * nr + j] = s;
        }
    });
    g.u_xi.assign(nr, 0.0);
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t k = 0; k < runs.size(); ++k)
            if (runs[k].out.retained) g.u_xi[j] += runs[k].uxi * J[k][j];

    for (std::size_t k = 0; k < runs.size(); ++k) {
        ModeOutcome& o = runs[k].out;
        const ModeData& d = o.data;
        if (!o.retained) {
            g.skipped_mass += std::abs(d.phi_k) + std::abs(d.f_k) + std::abs(d.psi_k);
            continue;
        }
        ++g.K_effective;
        double peak = 0.0;
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t j = 0; j < nr; ++j) peak = std::max(peak, std::abs(runs[k].ut[i] * J[k][j]));
        o.peak = peak;
        g.tail_bound = 10.0 * peak;
        g.interface_T1 = std::max(g.interface_T1, o.residuals.cont_T1);
        g.interface_T2 = std::max(g.interface_T2, o.residuals.cont_T2);
    }
    for (std::size_t j = 0; j < nr; ++j) {
        double phi = 0.0;
        for (std::size_t k = 0; k < runs.size(); ++k)
            if (runs[k].out.retained) phi += runs[k].out.data.phi_k * J[k][j];
        g.initial_residual = std::max(g.initial_residual, std::abs(g.u[j] - phi));
    }
    for (std::size_t i = 0; i < nt; ++i) g.boundary_residual = std::max(g.boundary_residual, std::abs(g.at(i, nr - 1)));

    g.warnings = cfg.warnings();
    for (auto& r : runs) {
        if (!r.out.retained) g.warnings.push_back("mode " + std::to_string(r.out.k) + " skipped: " + r.out.reason);
        g.ledger.push_back(std::move(r.out));
    }
    if (g.K_effective == 0) throw NumericalFailure("no mode could be evaluated (K_effective = 0)");
    return g;
}

std::vector<EigenSpec> eigens(const ProblemConfig& cfg) {
    std::vector<EigenSpec> e;
    for (int k = 1; k <= cfg.K; ++k) e.push_back(eigen(k, cfg.zeros));
    return e;
}

}  // namespace

SolutionGrid forward_solve(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& f) {
    cfg.validate();
    auto e = eigens(cfg);
    auto pc = fb_coeffs(phi, e);
    auto fc = fb_coeffs(f, e);
    std::vector<int> reg;
    auto t = time_nodes(cfg, &reg);
    std::vector<ModeRun> runs(cfg.K);
    parallel_for(cfg.K, [&](int i) { runs[i] = run_mode(cfg, i + 1, pc[i], fc[i], false, t, reg); });
    return assemble(cfg, runs);
}

InverseResult inverse_solve(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& psi) {
    cfg.validate();
    auto e = eigens(cfg);
    auto pc = fb_coeffs(phi, e);
    auto sc = fb_coeffs(psi, e);
    std::vector<int> reg;
    auto t = time_nodes(cfg, &reg);
    std::vector<ModeRun> runs(cfg.K);
    parallel_for(cfg.K, [&](int i) { runs[i] = run_mode(cfg, i + 1, pc[i], sc[i], true, t, reg); });

    InverseResult res;
    if (cfg.noise_ceiling > 0.0) {
        for (auto& r : runs) {
            if (res.truncated_at == 0 && r.out.retained && r.out.noise_gain > cfg.noise_ceiling) res.truncated_at = r.out.k;
            if (res.truncated_at != 0 && r.out.retained) {
                r.out.retained = false;
                r.out.reason = "beyond noise ceiling cut-off at mode " + std::to_string(res.truncated_at);
            }
        }
    }
    res.grid = assemble(cfg, runs);
    const auto& r = res.grid.r_nodes;
    res.f_radial.assign(r.size(), 0.0);
    for (const auto& o : res.grid.ledger) {
        if (!o.retained) continue;
        res.f_coeffs.emplace_back(o.eigen, o.data.f_k);
        for (std::size_t j = 0; j < r.size(); ++j) res.f_radial[j] += o.data.f_k * bessel_j0(o.eigen.mu_k * r[j]);
    }
    for (std::size_t j = 0; j < r.size(); ++j)
        res.psi_residual = std::max(res.psi_residual, std::abs(res.grid.u_xi[j] - psi(r[j])));
    return res;
}

double decay_slope(const std::vector<EigenSpec>& e, const std::vector<double>& c, int k_lo, int k_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < e.size() && i < c.size(); ++i) {
        if (e[i].k < k_lo || e[i].k > k_hi || c[i] == 0.0) continue;
        double x = std::log(e[i].mu_k), y = std::log(std::abs(c[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

ConvergenceReport convergence_report(const ProblemConfig& cfg, const SolutionGrid& grid) {
    ConvergenceReport c;
    std::vector<EigenSpec> e;
    for (const auto& o : grid.ledger) {
        c.k.push_back(o.k);
        c.mu.push_back(o.eigen.mu_k);
        c.phi.push_back(o.data.phi_k);
        c.psi.push_back(o.retained ? o.data.psi_k : 0.0);
        c.f.push_back(o.data.f_k);
        c.retained.push_back(o.retained);
        e.push_back(o.eigen);
        if (o.retained)
            for (int i = 0; i < 6; ++i) c.bound_constants[i] = std::max(c.bound_constants[i], o.e2_max[i]);
    }
    auto sums = [&](const std::vector<double>& v, std::array<std::vector<double>, 5>& out) {
        for (int m = 0; m < 5; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                s += std::pow(c.mu[i], 2 * m) * std::abs(v[i]);
                out[m].push_back(s);
            }
        }
    };
    sums(c.phi, c.phi_sums);
    sums(c.psi, c.psi_sums);
    sums(c.f, c.f_sums);
    c.phi_slope = decay_slope(e, c.phi, 4, cfg.K);
    c.psi_slope = decay_slope(e, c.psi, 4, cfg.K);
    c.f_slope = decay_slope(e, c.f, 4, cfg.K);
    c.tail = grid.tail_bound;
    return c;
}

}  // namespace fracwdw
