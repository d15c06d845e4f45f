#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracwdw/errors.hpp"
#include "fracwdw/modal.hpp"
#include "fracwdw/specfun.hpp"
#include "mpfr_oracle.hpp"
#include "oracle_values.hpp"

using namespace fracwdw;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_SUITE("specfun") {
    TEST_CASE("gamma trivial values") {
        CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-15);
        CHECK(rel(gamma_fn(7.3), oracle::gamma_7_3) < 1e-14);
        CHECK(rel(gamma_fn(7.3), 6.3 * gamma_fn(6.3)) < 1e-14);
    }

    TEST_CASE("gamma against MPFR on a grid") {
        double worst = 0.0;
        for (double x = -4.75; x <= 40.0; x += 0.37) worst = std::max(worst, rel(gamma_fn(x), mp_oracle::gamma(x)));
        CHECK(worst < 5e-14);
    }

    TEST_CASE("gamma poles raise PoleError") {
        CHECK_THROWS_AS(gamma_fn(0.0), PoleError);
        CHECK_THROWS_AS(gamma_fn(-3.0), PoleError);
        CHECK(recip_gamma(-3.0) == 0.0);
    }

    TEST_CASE("prabhakar trivial reductions") {
        CHECK(rel(prabhakar_e(1, 2, 1, 0).value, 1.0) < 1e-15);
        CHECK(rel(prabhakar_e(0.7, 1.3, 0, 5.0).value, 1.0 / std::tgamma(1.3)) < 1e-14);
        CHECK(rel(prabhakar_e(1, 1, 1, 1).value, std::exp(1.0)) < 1e-14);
        CHECK(rel(prabhakar_e(0.8, 1.1, 1.5, -3.2).value, oracle::prabhakar_08_11_15_m32) < 1e-12);
    }

    TEST_CASE("prabhakar against MPFR series") {
        const double cases[][4] = {{0.5, 1.0, 1.0, -2.0}, {1.5, 0.7, 2.5, 3.0}, {0.9, 1.4, -1.2, -0.8},
                                   {2.0, 2.0, 0.5, -6.0}, {1.2, 0.3, 1.0, 1.5}};
        for (const auto& c : cases) {
            double want = mp_oracle::prabhakar(c[0], c[1], c[2], c[3]);
            CHECK(rel(prabhakar_e(c[0], c[1], c[2], c[3]).value, want) < 1e-12);
        }
    }

    TEST_CASE("prabhakar series cache matches direct evaluation") {
        PrabhakarSeries s(0.9, 0.6, -1.2, 4.0);
        for (double z = -4.0; z <= 4.0; z += 0.5) CHECK(rel(s(z), prabhakar_e(0.9, 0.6, -1.2, z).value) < 1e-11);
    }

    TEST_CASE("bivariate ML at the origin") {
        BivMLSignature s{1.2, 1.2, 1, 1, 0, 2.8, 1.8, 0.9, 1.2, 1.2, 1, 1};
        double want = 1.0 / (std::tgamma(2.8) * std::tgamma(1.2) * std::tgamma(1.0));
        CHECK(rel(biml_e2(s, 0, 0).value, want) < 1e-14);
    }

    TEST_CASE("bivariate ML against brute-force sums") {
        RegionParams rp{0.9, 1.8, 1.2, 0.0};
        CHECK(rel(biml_e2(region_signature(rp, 2.8), -2.0, 0.5).value, oracle::e2_spec_example) < 1e-12);
        CHECK(rel(biml_e2(region_signature(rp, 2.8), -2.0, 0.5).value,
                  mp_oracle::e2(region_signature(rp, 2.8), -2.0, 0.5)) < 1e-12);
        RegionParams r2{1.0, 0.7, 0.7, 0.0};
        for (double d : {0.7, 1.7, 2.7}) {
            BivMLSignature s = region_signature(r2, d);
            CHECK(rel(biml_e2(s, -3.0, -0.1).value, mp_oracle::e2(s, -3.0, -0.1)) < 1e-11);
        }
    }

    TEST_CASE("bivariate ML reduces to a single series at y = 0") {
        BivMLSignature s{1.1, 0.6, 0.4, 1.3, 0.8, 1.5, 1.2, 0.5, 0.9, 0.7, 1.0, 1.0};
        double x = -1.3;
        double want = 0.0;
        for (int m = 0; m < 80; ++m)
            want += std::tgamma(s.g1 + s.a1 * m) * std::tgamma(s.g2 + s.a2 * m) * std::pow(x, m) /
                    (std::tgamma(s.g1) * std::tgamma(s.g2) * std::tgamma(s.d1 + s.a3 * m) *
                     std::tgamma(s.d2 + s.a4 * m) * std::tgamma(s.d3));
        CHECK(rel(biml_e2(s, x, 0.0).value, want) < 1e-12);
    }

    TEST_CASE("bivariate ML flags hopeless cancellation") {
        RegionParams rp{1.5, 1.8, 1.2, 0.0};
        CHECK_THROWS_AS(biml_e2(region_signature(rp, 2.8), -2000.0, -5.0), CancellationError);
        SeriesOptions quiet;
        quiet.throw_on_failure = false;
        SeriesResult r = biml_e2(region_signature(rp, 2.8), -2000.0, -5.0, quiet);
        CHECK((r.cancellation_flag || !r.converged));
    }
    TEST_CASE("contour inversion agrees with the series where both work") {
        double worst = 0.0;
        int n = 0;
        struct P { double al, be, ga; };
        for (P p : {P{1.5, 1.8, 1.2}, P{1.0, 0.7, 0.7}, P{1.5, 1.9, 1.1}, P{0.6, 1.2, 0.9}, P{1.9, 1.2, 0.9}, P{1.0, 1.0, 1.0}})
            for (double de : {-0.4, -0.2, 0.0, 0.3})
                for (double lam : {-0.5, -5.55, -30.0, -120.0})
                    for (double tau : {0.05, 0.3, 0.8})
                        for (double d : {p.be - 1.0, p.be, p.be + 1.0, p.be + 2.0}) {
                            RegionParams rp{p.al, p.be, p.ga, 0.0};
                            SeriesOptions quiet;
                            quiet.throw_on_failure = false;
                            SeriesResult sr = biml_e2(region_signature(rp, d), lam * std::pow(tau, p.be),
                                                      de * std::pow(tau, p.al), quiet);
                            if (!sr.converged || sr.cancellation_flag || sr.est_abs_error > 1e-14) continue;
                            double inv = e2_region_inversion(p.al, p.be, p.ga, d, lam * std::pow(tau, p.be),
                                                             de * std::pow(tau, p.al)).value;
                            worst = std::max(worst, std::abs(inv - sr.value) / std::max(1.0, std::abs(sr.value)));
                            ++n;
                        }
        MESSAGE("compared " << n << " points, worst " << worst);
        CHECK(n > 500);
        CHECK(worst < 1e-12);
    }

    TEST_CASE("contour inversion at large |lambda| against high-precision sums") {
        struct C { double al, be, ga, de, lam, d, tau, want; };
        for (C c : {C{1.5, 1.8, 1.2, -0.2, -593, 2.8, 0.5, oracle::contour_r1_m593},
                    C{1.5, 1.8, 1.2, 0.4, -2000, 1.8, 0.5, oracle::contour_dpos_m2000},
                    C{0.6, 1.2, 0.9, -0.5, -900, 2.2, 0.7, oracle::contour_a06_m900},
                    C{1.9, 1.2, 0.9, -0.5, -900, 1.2, 0.7, oracle::contour_a19_m900},
                    C{1.0, 0.7, 0.7, -0.2, -74.6, 1.7, 0.25, oracle::contour_b07_m746},
                    C{1.5, 1.9, 1.1, -0.2, -593, 2.9, 0.2, oracle::contour_b19_m593}}) {
            SeriesResult r = e2_region_inversion(c.al, c.be, c.ga, c.d, c.lam * std::pow(c.tau, c.be),
                                                 c.de * std::pow(c.tau, c.al));
            CHECK(std::abs(std::tgamma(c.ga) * r.value - c.want) < 1e-13);
            CHECK(r.est_abs_error < 1e-12);
        }
    }

    TEST_CASE("contour inversion finds the complex pole pair") {
        auto p = e2_region_poles(1.5, 1.8, 1.2, -593.0, -0.2);
        REQUIRE(p.size() == 2);
        CHECK(p[0].imag() > 0.0);
        CHECK(p[1] == std::conj(p[0]));
        CHECK(e2_region_poles(1.0, 0.7, 0.7, -593.0, -0.2).empty());
    }
}
