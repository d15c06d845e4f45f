#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fracwdw/bessel.hpp"
#include "fracwdw/modal.hpp"

namespace fracwdw {

struct ModeOutcome {
    int k = 0;
    EigenSpec eigen;
    bool retained = false;
    std::string reason;  // why the mode was skipped, empty when retained
    ModeData data;
    ModalResiduals residuals;
    double peak = 0.0;  // max over the grid of |U_k(t) J0(mu_k r)|
    double noise_gain = 0.0;  // |d f_k / d psi_k| for inverse runs
    std::array<double, 6> e2_max{};  // |E2| maxima feeding the bound constants
};

struct SolutionGrid {
    std::vector<double> t_nodes;
    std::vector<int> t_region;
    std::vector<double> r_nodes;
    std::vector<double> u;  // row-major, u[i * r_nodes.size() + j] = u(t_i, r_j)
    std::vector<double> u_xi;  // u(xi, r_j)
    std::vector<ModeOutcome> ledger;
    int K_effective = 0;
    double tail_bound = 0.0;
    double skipped_mass = 0.0;  // sum of |phi_k| + |f_k| + |psi_k| over skipped modes
    double initial_residual = 0.0;  // max_r |u(0, r) - sum of retained phi_k J0|
    double boundary_residual = 0.0;  // max_t |u(t, 1)|
    double interface_T1 = 0.0;
    double interface_T2 = 0.0;
    std::vector<std::string> warnings;

    double at(std::size_t i, std::size_t j) const { return u[i * r_nodes.size() + j]; }
};

struct InverseResult {
    std::vector<std::pair<EigenSpec, double>> f_coeffs;  // retained modes only
    std::vector<double> f_radial;  // on grid.r_nodes
    SolutionGrid grid;
    double psi_residual = 0.0;  // max_r |u(xi, r) - psi(r)|
    int truncated_at = 0;  // first mode dropped by the noise ceiling, 0 if none
};

struct ConvergenceReport {
    std::vector<int> k;
    std::vector<double> mu, phi, psi, f;
    std::vector<bool> retained;
    // partial sums of mu_k^m |c_k| for m = 0, 2, 4, 6, 8, indexed [m/2][k]
    std::array<std::vector<double>, 5> phi_sums, psi_sums, f_sums;
    double phi_slope = 0.0, psi_slope = 0.0, f_slope = 0.0;
    std::array<double, 6> bound_constants{};
    double tail = 0.0;
};

std::vector<double> time_nodes(const ProblemConfig& cfg, std::vector<int>* regions = nullptr);
std::vector<double> radial_nodes(int n);

SolutionGrid forward_solve(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& f);
InverseResult inverse_solve(const ProblemConfig& cfg, const RadialFunction& phi, const RadialFunction& psi);

// Least-squares slope of log|c_k| against log mu_k over k in [k_lo, k_hi].
double decay_slope(const std::vector<EigenSpec>& e, const std::vector<double>& c, int k_lo, int k_hi);

ConvergenceReport convergence_report(const ProblemConfig& cfg, const SolutionGrid& grid);

}  // namespace fracwdw
