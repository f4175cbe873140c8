#pragma once

#include <array>
#include <vector>

#include "rhd/radial.hpp"
#include "rhd/solver.hpp"

namespace rhd {

// ---- box norms (spectral multipliers, exact Parseval) ---------------------

// || grad^j f ||^2 with the full j-tensor convention (|xi|^{2j} weights).
double grad_norm_sq(const std::vector<cxd>& hat, const SolverContext& ctx, int j);

// Same over the five components (n, u, m).
double grad_norm_sq(const SpectralField& state, const SolverContext& ctx, int j);

// (sum_{j<=k} ||grad^j (n,u,m)||^2)^{1/2}
double hk_norm(const SpectralField& state, const SolverContext& ctx, int k);

// sum_{|alpha|=j} <d^alpha u, grad d^alpha n> (multinomial weights):
// L^3 sum_k |xi|^{2j} Im[(xi . u_hat) conj(n_hat)].
double cross_term(const SpectralField& state, const SolverContext& ctx, int j);

// ---- Lyapunov functional ---------------------------------------------------

struct LyapunovValue {
    double value = 0;   // ||grad^k .||_{H^2}^2 + delta (cross_k + cross_{k+1})
    double norm_sq = 0; // ||grad^k .||_{H^2}^2
    double ratio = 1.0; // value / norm_sq
};

// Throws EquivalenceError when the ratio leaves [1/c_eq, c_eq].
LyapunovValue lyapunov_functional(const SpectralField& state, const SolverContext& ctx,
                                  int k, double delta, double c_eq = 2.0);

// ---- a priori inequality audit ---------------------------------------------

struct EnergyReport {
    std::vector<double> times;
    std::vector<std::array<double, 3>> hk;    // ||(n,u,m)||_{H^k}, k = 0..2
    std::vector<std::array<double, 3>> cross; // cross_term j = 0..2
    std::vector<double> lyapunov;             // weighted Lyapunov quantity
    std::vector<double> diss_raw;             // identity dissipation incl. flux terms
    std::vector<double> diss_qsub;            // flux terms replaced by the damping multiplier
    std::vector<double> margins;              // dF/dt + D at interior snapshots
    double worst_margin_ratio = 0;            // max margin / dissipation
    bool lyapunov_decreasing = false;
    double delta = 0;

    bool margins_pass(double slack = 0.1) const;
};

// Discrete time derivative of the weighted Lyapunov quantity plus the
// matching dissipation, per snapshot interval. Snapshots must be dense
// enough for centered differencing.
EnergyReport audit_apriori(const Trajectory& traj, const SolverContext& ctx,
                           double delta = 0.05);

// ---- decay bootstrap envelope ----------------------------------------------

struct FunctionalSeries {
    int k = 0;
    std::vector<double> times;
    std::vector<double> G;     // running sup of the weighted sum
    double growth_ratio = 0;   // G(T) / G(T/2)
    bool bounded = false;      // growth_ratio <= 2 (saturation heuristic)
};

// F_series[i] holds F_i(t) sampled at `times`, i = 0..k.
FunctionalSeries bootstrap_G(const std::vector<double>& times,
                             const std::vector<std::vector<double>>& F_series, int k);

// F_i(t) series for a radial profile under the linear flow, i = 0..kmax.
std::vector<std::vector<double>> radial_lyapunov_series(const RadialProfile& prof0,
                                                        const std::vector<double>& times,
                                                        const ValidatedParams& p, int kmax,
                                                        double delta);

} // namespace rhd
