#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracwdw/bessel.hpp"
#include "fracwdw/errors.hpp"
#include "mpfr_oracle.hpp"
#include "oracle_values.hpp"

using namespace fracwdw;

TEST_SUITE("bessel") {
    TEST_CASE("J0 and J1 trivial values") {
        CHECK(bessel_j0(0.0) == 1.0);
        CHECK(bessel_j1(0.0) == 0.0);
        CHECK(std::abs(bessel_j0(oracle::j0_zero_1)) < 1e-15);
    }

    TEST_CASE("J0 and J1 against MPFR") {
        double w0 = 0.0, w1 = 0.0;
        for (double x = 0.0; x <= 120.0; x += 0.173) {
            w0 = std::max(w0, std::abs(bessel_j0(x) - mp_oracle::j0(x)));
            w1 = std::max(w1, std::abs(bessel_j1(x) - mp_oracle::j1(x)));
        }
        CHECK(w0 < 1e-14);
        CHECK(w1 < 1e-14);
    }

    TEST_CASE("asymptotic eigenvalues") {
        EigenSpec e = eigen(1, ZeroMode::Asymptotic);
        CHECK(e.mu_k == doctest::Approx(0.75 * std::numbers::pi).epsilon(1e-15));
        CHECK(e.lambda_k == doctest::Approx(-std::pow(0.75 * std::numbers::pi, 2)).epsilon(1e-15));
        for (int k = 1; k <= 40; ++k) {
            EigenSpec ek = eigen(k, ZeroMode::Asymptotic);
            double alt = -std::pow(4.0 * k - 1.0, 2) * std::pow(std::numbers::pi / 4.0, 2);
            CHECK(std::abs(ek.lambda_k - alt) <= 1e-13 * std::abs(alt));
        }
    }

    TEST_CASE("exact zeros are roots and increase") {
        CHECK(eigen(1, ZeroMode::ExactRoot).mu_k == doctest::Approx(oracle::j0_zero_1).epsilon(1e-15));
        double prev = 0.0;
        for (int k = 1; k <= 60; ++k) {
            double mu = eigen(k, ZeroMode::ExactRoot).mu_k;
            CHECK(std::abs(mp_oracle::j0(mu)) < 1e-14);
            CHECK(mu > prev);
            prev = mu;
        }
    }

    TEST_CASE("Fourier-Bessel coefficients") {
        RadialFunction zero;
        for (int k = 1; k <= 4; ++k) CHECK(fourier_bessel_coeff(zero, eigen(k, ZeroMode::ExactRoot)) == 0.0);
        RadialFunction mode1 = RadialFunction::parse("catalog:bessel_mode(1)");
        CHECK(fourier_bessel_coeff(mode1, eigen(1, ZeroMode::ExactRoot)) == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 2; k <= 8; ++k) CHECK(std::abs(fourier_bessel_coeff(mode1, eigen(k, ZeroMode::ExactRoot))) < 1e-10);
        RadialFunction q = RadialFunction::parse("catalog:one_minus_r2");
        CHECK(fourier_bessel_coeff(q, eigen(1, ZeroMode::ExactRoot)) ==
              doctest::Approx(oracle::fb_one_minus_r2_k1).epsilon(1e-13));
        // closed form 8 / (mu^3 J1(mu)) for 1 - r^2
        for (int k = 1; k <= 10; ++k) {
            EigenSpec e = eigen(k, ZeroMode::ExactRoot);
            double want = 8.0 / (std::pow(e.mu_k, 3) * mp_oracle::j1(e.mu_k));
            CHECK(std::abs(fourier_bessel_coeff(q, e) - want) < 1e-12);
        }
    }

    TEST_CASE("synthesis") {
        CHECK(synthesize({}, 0.3) == 0.0);
        CHECK(synthesize({{eigen(1, ZeroMode::ExactRoot), 1.0}}, 0.0) == 1.0);
        RadialFunction mode1 = RadialFunction::parse("catalog:bessel_mode(1)");
        std::vector<std::pair<EigenSpec, double>> c;
        for (int k = 1; k <= 8; ++k) {
            EigenSpec e = eigen(k, ZeroMode::ExactRoot);
            c.emplace_back(e, fourier_bessel_coeff(mode1, e));
        }
        for (double r = 0.0; r <= 1.0; r += 0.05) CHECK(std::abs(synthesize(c, r) - mode1(r)) < 1e-9);
    }

    TEST_CASE("orthogonality of exact-zero modes") { CHECK(orthogonality_defect(8, ZeroMode::ExactRoot) < 1e-10); }

    TEST_CASE("radial function parsing") {
        CHECK(RadialFunction::parse("catalog:zero").is_zero());
        CHECK(RadialFunction::parse("catalog:constant(0)").is_zero());
        RadialFunction p = RadialFunction::parse("catalog:poly_smooth(s=5)");
        CHECK(p.smoothness_class() == 5);
        CHECK(p(0.0) == 0.0);
        CHECK(p(1.0) == 0.0);
        RadialFunction b = RadialFunction::parse("catalog:bessel_series(a1=2,a3=-1)");
        double mu1 = eigen(1, ZeroMode::ExactRoot).mu_k, mu3 = eigen(3, ZeroMode::ExactRoot).mu_k;
        CHECK(b(0.4) == doctest::Approx(2 * bessel_j0(mu1 * 0.4) - bessel_j0(mu3 * 0.4)).epsilon(1e-15));
        CHECK(RadialFunction::parse(b.describe())(0.4) == b(0.4));
        CHECK_THROWS_AS(RadialFunction::parse("catalog:nope"), ConfigError);
        CHECK_THROWS_AS(RadialFunction::parse("nope"), ConfigError);
        CHECK_THROWS_AS(RadialFunction::parse("catalog:poly_smooth(s=2.5)"), ConfigError);
        CHECK_THROWS_AS(RadialFunction::parse("csv:/nonexistent/file.csv"), IoError);
    }

    TEST_CASE("sampled functions interpolate monotonically") {
        RadialFunction s = RadialFunction::samples({0.0, 0.5, 1.0}, {1.0, 0.5, 0.0});
        CHECK(s(0.25) == doctest::Approx(0.75));
        CHECK_THROWS_AS(RadialFunction::samples({0.0, 0.0}, {1.0, 2.0}), ConfigError);
    }
}
