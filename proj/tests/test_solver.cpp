#include <cmath>

#include "doctest.h"
#include "fracwdw/errors.hpp"
#include "fracwdw/parallel.hpp"
#include "fracwdw/solver.hpp"

using namespace fracwdw;

namespace {

ProblemConfig benign_cfg(int K) {
    ProblemConfig c;
    c.alpha2 = c.beta2 = c.gamma2 = 1.0;
    c.T2 = 0.515;
    c.xi = 0.5075;
    c.zeros = ZeroMode::ExactRoot;
    c.K = K;
    c.n_r = 33;
    c.n_t = 9;
    return c;
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("grids") {
        ProblemConfig c = benign_cfg(4);
        std::vector<int> reg;
        auto t = time_nodes(c, &reg);
        CHECK(t.size() == 3u * c.n_t - 2u);
        CHECK(t.front() == 0.0);
        CHECK(t.back() == c.T);
        CHECK(std::count(t.begin(), t.end(), c.T1) == 1);
        CHECK(std::count(t.begin(), t.end(), c.T2) == 1);
        auto r = radial_nodes(5);
        CHECK(r.front() == 0.0);
        CHECK(r.back() == 1.0);
    }

    TEST_CASE("zero data gives a zero grid") {
        ProblemConfig c = benign_cfg(6);
        c.zeros = ZeroMode::Asymptotic;
        SolutionGrid g = forward_solve(c, RadialFunction(), RadialFunction());
        CHECK(g.K_effective == 6);
        for (double v : g.u) CHECK(v == 0.0);
        InverseResult inv = inverse_solve(c, RadialFunction(), RadialFunction());
        for (double v : inv.f_radial) CHECK(v == 0.0);
        for (double v : inv.grid.u) CHECK(v == 0.0);
        ConvergenceReport cr = convergence_report(c, g);
        for (const auto& s : cr.f_sums)
            for (double v : s) CHECK(v == 0.0);
        CHECK(cr.tail == 0.0);
    }

    TEST_CASE("single-mode initial data and boundary") {
        ProblemConfig c = benign_cfg(6);
        RadialFunction phi = RadialFunction::parse("catalog:bessel_mode(1)");
        RadialFunction f = RadialFunction::parse("catalog:bessel_mode(2)");
        SolutionGrid g = forward_solve(c, phi, f);
        CHECK(g.K_effective == 6);
        for (std::size_t j = 0; j < g.r_nodes.size(); ++j)
            CHECK(std::abs(g.at(0, j) - phi(g.r_nodes[j])) <= g.tail_bound + 1e-12);
        CHECK(g.boundary_residual < 1e-12);
        CHECK(g.interface_T1 < 6 * c.resid_tol);
        CHECK(g.interface_T2 < 6 * c.resid_tol);
    }

    TEST_CASE("manufactured inverse recovers planted coefficients") {
        ProblemConfig c = benign_cfg(8);
        RadialFunction phi = RadialFunction::parse("catalog:one_minus_r2");
        RadialFunction f = RadialFunction::parse("catalog:poly_smooth(s=3)");
        SolutionGrid g = forward_solve(c, phi, f);
        std::vector<double> r(g.r_nodes);
        RadialFunction psi = RadialFunction::callable(
            [&](double x) {
                double s = 0.0;
                for (const auto& o : g.ledger) s += o.data.psi_k * bessel_j0(o.eigen.mu_k * x);
                return s;
            },
            "psi");
        InverseResult inv = inverse_solve(c, phi, psi);
        REQUIRE(inv.f_coeffs.size() == 8u);
        for (std::size_t i = 0; i < inv.f_coeffs.size(); ++i) {
            double planted = g.ledger[i].data.f_k;
            CHECK(std::abs(inv.f_coeffs[i].second - planted) / (1.0 + std::abs(planted)) < 1e-8);
        }
        CHECK(inv.psi_residual < 1e-8);
    }

    TEST_CASE("partial sums are nondecreasing") {
        ProblemConfig c = benign_cfg(8);
        SolutionGrid g = forward_solve(c, RadialFunction::parse("catalog:poly_smooth(s=2)"), RadialFunction());
        ConvergenceReport cr = convergence_report(c, g);
        for (const auto& s : cr.phi_sums)
            for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1]);
    }

    TEST_CASE("unevaluable modes are skipped and reported") {
        ProblemConfig c;
        c.K = 4;
        c.n_r = 9;
        c.n_t = 5;
        c.abs_tol = 1e-17;  // below what the contour fallback can certify
        SolutionGrid g = forward_solve(c, RadialFunction::parse("catalog:one_minus_r2"),
                                       RadialFunction::parse("catalog:poly_smooth(s=5)"));
        CHECK(g.K_effective < c.K);
        CHECK_FALSE(g.ledger[2].retained);
        CHECK(g.ledger[2].reason.find("M1") != std::string::npos);
        CHECK(g.ledger[2].reason.find("contour inversion") != std::string::npos);
        CHECK(g.skipped_mass > 0.0);
    }

    TEST_CASE("modes past the series range are evaluated by contour inversion") {
        ProblemConfig c;
        c.K = 6;
        c.n_r = 9;
        c.n_t = 5;
        SolutionGrid g = forward_solve(c, RadialFunction::parse("catalog:one_minus_r2"),
                                       RadialFunction::parse("catalog:poly_smooth(s=5)"));
        CHECK(g.K_effective == 6);
        for (const auto& o : g.ledger) CHECK(o.residuals.max() < 1e-8);
    }

    TEST_CASE("no evaluable mode is a numerical failure") {
        ProblemConfig c;
        c.K = 5;
        c.n_r = 5;
        c.n_t = 3;
        c.det_tol = 1e10;
        CHECK_THROWS_AS(forward_solve(c, RadialFunction::parse("catalog:one_minus_r2"), RadialFunction()),
                        NumericalFailure);
    }

    TEST_CASE("noise ceiling truncates the inverse") {
        ProblemConfig c = benign_cfg(8);
        RadialFunction phi = RadialFunction::parse("catalog:one_minus_r2");
        InverseResult full = inverse_solve(c, phi, phi);
        std::vector<double> gain;
        for (const auto& o : full.grid.ledger) gain.push_back(o.noise_gain);
        c.noise_ceiling = 1.5 * gain[0];
        int expect = 0;
        for (std::size_t i = 0; i < gain.size() && !expect; ++i)
            if (gain[i] > c.noise_ceiling) expect = static_cast<int>(i) + 1;
        REQUIRE(expect > 1);
        InverseResult cut = inverse_solve(c, phi, phi);
        CHECK(cut.truncated_at == expect);
        CHECK(cut.grid.K_effective == expect - 1);
    }

    TEST_CASE("parallel_for rethrows the lowest failing index") {
        std::vector<int> hit(50, 0);
        CHECK_THROWS_WITH(parallel_for(50,
                                       [&](int i) {
                                           hit[i] = 1;
                                           if (i == 7 || i == 31) throw Error("index " + std::to_string(i));
                                       }),
                          "index 7");
    }
}
