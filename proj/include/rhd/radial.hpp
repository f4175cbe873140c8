#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rhd/params.hpp"
#include "rhd/symbol.hpp"

namespace rhd {

// Log-spaced radial frequency grid for spherically reduced spectral data.
struct RadialGrid {
    std::vector<double> r;
    static RadialGrid log_spaced(double lo = 1e-4, double hi = 1e3, int n = 2049);
};

// Radially symmetric spectral data: complex amplitudes per node for the
// density and temperature components, the velocity component aligned with
// the frequency vector, and the magnitude of the transverse velocity part.
// amp_at_zero holds each component's |amplitude| in the xi -> 0 limit, the
// working surrogate for the L1 norm of the physical field.
struct RadialProfile {
    std::vector<double> r;
    std::vector<cxd> n, u_long, u_perp, m;
    std::array<double, 4> amp_at_zero{0, 0, 0, 0};

    std::size_t size() const { return r.size(); }
};

// Spectral amplitude amp * r^power * exp(-width r^2) per component
// (n, u_long, u_perp, m). power = 0 is the plain Gaussian family; positive
// power makes the profile vanish at xi = 0 (used by the derivative-data
// decay variant).
RadialProfile gaussian_profile(const std::array<double, 4>& amps, double width,
                               const RadialGrid& grid, double power = 0.0);

// Per-node eigenstructure cache so repeated propagation over many times
// costs a handful of flops per node.
class RadialPropagator {
  public:
    RadialPropagator(const std::vector<double>& r, const ValidatedParams& p);
    RadialProfile apply(const RadialProfile& prof, double t) const;

  private:
    struct Node {
        LongitudinalEig eig;
        Mat3c block;      // only filled on the coalescence fallback path
        double visc_rate; // transverse eigenvalue
        bool fallback;
    };
    std::vector<Node> nodes_;
    ValidatedParams params_;
};

// One-shot propagation by the semigroup; equals RadialPropagator::apply.
RadialProfile propagate_hat(const RadialProfile& prof, double t, const ValidatedParams& p);

// (4 pi integral r^{2k} |amplitudes|^2 r^2 dr)^{1/2}: the L2 norm of the k-th
// gradient under the radial Plancherel convention. Throws QuadratureError if
// the tail estimate exceeds 1e-6 of the total.
double sobolev_norm(const RadialProfile& prof, int k);

// Same weighted integral with an arbitrary real |xi|-power (diagnostics,
// e.g. negative-order data norms).
double weighted_l2(const RadialProfile& prof, double two_k_power);

struct DecayCurve {
    int k = 0;
    std::vector<double> times;
    std::vector<double> norms;
};

struct DecayFit {
    double slope = 0;
    double target = 0;
    double rel_err = 0;
    double t1 = 0, t2 = 0; // fit window
    bool pass(double tol) const { return std::abs(slope - target) <= tol; }
};

DecayCurve decay_curve(const RadialProfile& prof0, int k, const std::vector<double>& times,
                       const ValidatedParams& p);

// Least-squares slope of log norm vs log(1+t) over [t1, t2]. Throws FitError
// when the curve increases by more than 1e-3 relative between consecutive
// window samples.
DecayFit fit_decay_exponent(const DecayCurve& curve, double t1, double t2, double target);

struct LowerBoundReport {
    double sigma1 = 0, sigma2 = 0, sigma3 = 0;
    double eps = 0, K = 0;
    std::vector<double> times;
    std::vector<double> ratio_series; // ||n(t)|| (1+t)^{3/4}
    std::vector<double> F_values;     // kernel functional by direct quadrature
    // per time: [0] low-frequency mass of n(t), [1] remainder mass,
    // [2] model-kernel mass on n0, [3] damped mass of (u0, m0)
    std::vector<std::array<double, 4>> T_terms;
    double ratio_floor = 0;
    double F_floor = 0;
    bool pass = false;
};

LowerBoundReport lower_bound_scan(const RadialProfile& prof0, const std::vector<double>& times,
                                  const ValidatedParams& p, double eps, double K);

// Bisection over the amplitude mix (1, s, s, s): the smallest s at which the
// ratio-series floor drops below 10% of the density-only floor. unbounded is
// set when no degeneration occurs up to s = 64.
struct MixThreshold {
    double s_star = 0;
    double ratio_surrogate = 0; // 1/s*^2
    bool unbounded = false;
};

MixThreshold lower_bound_mix_threshold(double width, const std::vector<double>& times,
                                       const ValidatedParams& p, const RadialGrid& grid);

} // namespace rhd
