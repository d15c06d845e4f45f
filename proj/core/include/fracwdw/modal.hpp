#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracwdw/bessel.hpp"
#include "fracwdw/dd.hpp"
#include "fracwdw/specfun.hpp"

namespace fracwdw {

// Sign of the lambda term in the interface relations. The closed-form
// temporal solutions satisfy D U = f + lambda U; the printed relations use
// f - lambda U.
enum class TransmissionRule { ClosedFormConsistent, AsPublished };

const char* to_string(TransmissionRule r);
TransmissionRule parse_transmission_rule(const std::string& s);

struct RegionParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double start = 0.0;  // time origin of the region
};

struct ProblemConfig {
    double alpha1 = 1.5, alpha2 = 1.0, alpha3 = 1.5;
    double beta1 = 1.8, beta2 = 0.7, beta3 = 1.9;
    double gamma1 = 1.2, gamma2 = 0.7, gamma3 = 1.1;
    double delta = -0.2;
    double T1 = 0.5, T2 = 0.8, T = 1.0;
    std::optional<double> xi;
    int K = 8;
    double abs_tol = 1e-12;
    double resid_tol = 1e-9;
    std::optional<double> det_tol;
    ZeroMode zeros = ZeroMode::Asymptotic;
    TransmissionRule rule = TransmissionRule::ClosedFormConsistent;
    bool strict_uniqueness = false;
    int n_r = 64;
    int n_t = 32;
    double noise_ceiling = 0.0;  // 0 disables spectral cut-off
    std::uint64_t seed = 0;

    double xi_value() const { return xi ? *xi : 0.5 * (T1 + T2); }
    double det_tol_value() const { return det_tol ? *det_tol : 1e-10 * (1.0 + T1); }
    // +1 for the consistent rule, -1 for the printed one
    double sign() const { return rule == TransmissionRule::AsPublished ? -1.0 : 1.0; }
    RegionParams region(int i) const;
    int region_of(double t) const;

    void validate() const;
    std::vector<std::string> warnings() const;
    bool strict_hypotheses_hold() const { return alpha2 == 1.0 && gamma2 == beta2; }
    bool lemma_hypotheses_hold() const { return beta1 > gamma1 && beta2 > gamma2; }
};

// Raw E2 products the M-notations are built from.
//   P = T1^b1 G1(b1+1, T1), Q = T1^b1 G1(b1+2, T1), R = T1^b1 G1(b1, T1)
//   S = (xi-T1)^b2 G2(b2+1, xi-T1), W = (T2-T1)^b2 G2(b2+1, T2-T1)
// with G(d, tau) = Gamma(gamma) E2(lambda tau^beta, delta tau^alpha).
struct Blocks {
    double P = 0, Q = 0, R = 0, S = 0, W = 0;
};

struct MNotations {
    dd M1, M2, M3, M4, W;
};

// Per-mode evaluator of G(d, tau) for each region. Not thread safe.
class ModeKernel {
public:
    ModeKernel(const ProblemConfig& cfg, const EigenSpec& e);

    const EigenSpec& eigen() const { return eigen_; }
    double lambda() const { return eigen_.lambda_k; }
    double G(int region, double d, double tau);
    // d^p/dtau^p [tau^(d-1) G(d, tau)] = tau^(d-1-p) G(d-p, tau)
    double power_term(int region, double d, double tau, int order);
    Blocks blocks();
    // Largest |E2| seen so far for (region, d); 0 when never evaluated.
    double max_abs_e2(int region, double d) const;
    // Evaluations that fell back to contour inversion after the series failed.
    long inversions() const { return inversions_; }

private:
    ProblemConfig cfg_;
    EigenSpec eigen_;
    std::map<std::pair<int, double>, std::unique_ptr<BivariateML>> fns_;
    std::map<std::pair<int, double>, double> max_e2_;
    long inversions_ = 0;
};

BivMLSignature region_signature(const RegionParams& rp, double d);

struct ModeData {
    EigenSpec eigen;
    double phi_k = 0, psi_k = 0, f_k = 0;
    double A1 = 0, A2 = 0, A3 = 0, A4 = 0, A5 = 0;
    double M1 = 0, M2 = 0, M3 = 0, M4 = 0, W = 0;
    double Delta_k = 0;       // printed determinant 1/lambda + M2 + M3
    double Delta_rule = 0;    // determinant of the forward chain under the active rule
    double TildeDelta_k = 0;  // determinant of the inverse system under the active rule
    Blocks blocks;
};

MNotations m_notations(double lambda, double T1, const Blocks& b);
// Evaluates the blocks, tagging failures with the notation they feed.
Blocks evaluate_blocks(ModeKernel& kernel);

dd delta_printed(double lambda, double T1, const Blocks& b);
dd delta_rule(double lambda, const MNotations& m, double s);

using Mat3 = std::array<std::array<dd, 3>, 3>;
using Vec3 = std::array<dd, 3>;

// Rows: measurement at xi, continuity at T1, derivative transmission at T1.
// Unknowns (A2, A3, f).
Mat3 system_matrix(double lambda, const MNotations& m, double s);
Vec3 system_rhs(double lambda, const MNotations& m, double phi, double psi);
dd det3(const Mat3& a);

dd tilde_delta_direct(double lambda, const MNotations& m, double s);
// The written-out expansion of the printed determinant.
dd tilde_delta_expanded(double lambda, double T1, const Blocks& b);

// Printed closed forms, each a numerator over the expanded determinant. The
// f numerator carries two normalised misprints (see README).
struct PrintedForms {
    dd tilde_delta;
    dd A2, A3, f, A4, A5;
    dd num_A2, num_A3, num_f, num_A4, num_A5;
};
PrintedForms printed_forms(double lambda, double T1, const Blocks& b, double phi, double psi);

struct Solve3 {
    double A2 = 0, A3 = 0, f = 0;
};

Solve3 cramer_solve(const Mat3& a, const Vec3& b, double det_tol);
// Partial-pivot LU with residual refinement in double-double.
Solve3 generic_solve(const Mat3& a, const Vec3& b);

ModeData forward_coefficients(const ProblemConfig& cfg, ModeKernel& kernel, double phi_k, double f_k);
ModeData forward_coefficients(const ProblemConfig& cfg, const EigenSpec& e, const Blocks& b, double phi_k, double f_k);
ModeData cramer_inverse(const ProblemConfig& cfg, ModeKernel& kernel, double phi_k, double psi_k);
ModeData cramer_inverse(const ProblemConfig& cfg, const EigenSpec& e, const Blocks& b, double phi_k, double psi_k);

// d^order/dt^order of the region's temporal solution at absolute time t.
double temporal_solution(int region, const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double t,
                         int order = 0);
// Same with tau measured from the region's start time.
double temporal_local(int region, const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double tau,
                      int order = 0);
// Region chosen by t; T1 and T2 belong to the left region.
double temporal_solution(const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md, double t);

struct ModalResiduals {
    double value_T1 = 0;  // U1(T1) against A3
    double slope_T1 = 0;  // U1'(T1) against f + s lambda A3
    double value_T2 = 0;  // U2(T2) against A4
    double slope_T2 = 0;  // U3'(T2) against f + s lambda A4
    double measurement = 0;  // U2(xi) against psi_k
    double continuity_row = 0;    // algebraic continuity relation at T1
    double transmission_row = 0;  // algebraic derivative relation at T1
    double cont_T1 = 0;  // |U1(T1) - U2(T1)|
    double cont_T2 = 0;  // |U2(T2) - U3(T2)|
    double max() const;
};

ModalResiduals modal_residuals(const ProblemConfig& cfg, ModeKernel& kernel, const ModeData& md);

}  // namespace fracwdw
