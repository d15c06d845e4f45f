#pragma once

#include <string>
#include <vector>

#include "fracwdw/bessel.hpp"
#include "fracwdw/modal.hpp"
#include "fracwdw/solver.hpp"

namespace fracwdw {

enum class CheckStatus { Pass, Fail, Info };
const char* to_string(CheckStatus s);

struct CheckResult {
    std::string id;
    std::string relation;  // the condition or identity the check exercises
    CheckStatus status = CheckStatus::Info;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::string mode;
    int K = 0;
    int K_effective = 0;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_text() const;
    std::string to_csv() const;
};

enum class RunMode { Forward, Inverse };

struct BatteryOptions {
    int times_per_region = 10;
    double ode_tol = 1e-6;
    double transmit_tol = 1e-5;
    double identity_tol = 1e-10;
};

// Region equation residuals of one mode at interior times, measured with the
// numerical Prabhakar-Caputo operator against f_k + s lambda_k U for s = +1
// and s = -1, relative to |f_k| + |lambda_k U|. Points where the kernel
// cannot be evaluated to tolerance are counted in skipped.
struct OdeResiduals {
    double consistent[3] = {0, 0, 0};
    double printed[3] = {0, 0, 0};
    int points = 0;
    int skipped = 0;
    std::string first_error;
};
OdeResiduals ode_residuals(const ProblemConfig& cfg, ModeKernel& kern, const ModeData& md, int times_per_region);

// One-sided limits at t = T1 +- eps and T2 +- eps, eps = 1e-5 (T2 - T1),
// Richardson-extrapolated from eps and 2 eps.
struct TransmitResiduals {
    double slope_T1 = 0, frac_T1 = 0;  // lim U1'(T1-) and lim D U2(T1+)
    double frac_T2 = 0, slope_T2 = 0;  // lim D U2(T2-) and lim U3'(T2+)
    double at_T1 = 0, at_T2 = 0;  // |difference| / (1 + |phi_k| + |f_k|)
};
TransmitResiduals transmit_residuals(const ProblemConfig& cfg, ModeKernel& kern, const ModeData& md);

// Printed closed forms against independent routes, relative differences.
struct IdentityResiduals {
    double determinant = 0;  // expanded determinant vs cofactor expansion
    double cramer = 0;       // printed (A2, A3, f) vs pivoted solve, worst of three
    double A4 = 0;           // printed A4 vs substitution chain
    double A5 = 0;           // printed A5 vs substitution chain
    double f_literal = 0;    // f numerator exactly as printed, vs pivoted solve
};
IdentityResiduals identity_residuals(const ProblemConfig& cfg, double lambda, const Blocks& b, double phi, double psi);

double rel_diff(double a, double b);

// True when the last half of the sequence is strictly decreasing.
bool eventually_decreasing(const std::vector<double>& v);

VerificationReport run_battery(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& data,
                               RunMode mode, const BatteryOptions& opt = {});

}  // namespace fracwdw
