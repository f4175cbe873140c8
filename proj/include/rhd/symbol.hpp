#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rhd/params.hpp"

namespace rhd {

using cxd = std::complex<double>;
using Mat5c = Eigen::Matrix<cxd, 5, 5>;
using Mat3c = Eigen::Matrix<cxd, 3, 3>;
using Vec3c = Eigen::Matrix<cxd, 3, 1>;

// Combined damping of temperature modes: heat conduction plus the nonlocal
// radiative operator. Stays O(1) at high frequency when kappa = 0, which is
// what lets radiation stand in for heat conduction.
double radiative_damping(double a2, const ValidatedParams& p);

// Fourier symbol of the linearized system at frequency xi, rows/columns
// ordered (n, u1, u2, u3, m). Derived directly from the PDE: the density row
// is (0, -i xi^T, 0) independent of the gas constant.
struct SymbolMatrix {
    Eigen::Vector3d xi;
    Mat5c entries;
};

SymbolMatrix assemble_symbol(const Eigen::Vector3d& xi, const ValidatedParams& p);

// 3x3 restriction of the symbol to the compressional subspace, in the basis
// (density, velocity component along xi, temperature). Depends on |xi| only.
Mat3c longitudinal_block(double xi_norm, const ValidatedParams& p);

// Monic cubic lambda^3 + c2 lambda^2 + c1 lambda + c0 whose roots are the
// three compressional eigenvalue branches; obtained from the determinant of
// the longitudinal block.
struct CubicCoeffs {
    double c2 = 0, c1 = 0, c0 = 0;
    double a2 = 0; // |xi|^2
    double h = 0;  // radiative damping at a2

    cxd eval(cxd lam) const { return ((lam + c2) * lam + c1) * lam + c0; }
    cxd deriv(cxd lam) const { return (3.0 * lam + 2.0 * c2) * lam + c1; }
};

CubicCoeffs characteristic_cubic(double a2, const ValidatedParams& p);

// The four eigenvalue branches at one frequency.
//   lambda1 — branch that is real near xi = 0 (radiative-thermal mode),
//   lambda2, lambda3 — conjugate pair while non-real (acoustic modes);
//       when all three compressional roots are real, lambda1 is the largest,
//       lambda2 the smallest, lambda3 the middle one,
//   lambda4 — transverse viscous rate -mu |xi|^2, multiplicity 2.
struct DispersionPoint {
    double xi_norm = 0;
    cxd lambda1, lambda2, lambda3;
    double lambda4 = 0;
    bool degenerate = false; // two branches within coalescence tolerance

    std::array<cxd, 4> all() const { return {lambda1, lambda2, lambda3, cxd(lambda4, 0.0)}; }
};

// Coalescence tolerance: |li - lj| < tol * max(1, |li|, |lj|).
inline constexpr double kCoalescenceTol = 1e-6;

DispersionPoint dispersion_roots(const Eigen::Vector3d& xi, const ValidatedParams& p);
DispersionPoint dispersion_roots(double xi_norm, const ValidatedParams& p);

// Branch-continuous labeling along an increasing |xi| grid: the first point
// is labeled by the isolated-point rule, later points by nearest-neighbor
// matching over root permutations, ties broken by the sign of Im.
std::vector<DispersionPoint> dispersion_scan(const std::vector<double>& xi_norms,
                                             const ValidatedParams& p);

// Spectral projectors of the symbol. P1..P3 come from outer products of the
// left/right eigenvectors of the longitudinal block (normalized bilinearly),
// P4 acts as I - xi xi^T/|xi|^2 on the velocity block and zero elsewhere.
struct ProjectorSet {
    Mat5c P1, P2, P3, P4;
    enum class Source { explicit_formula, expm_fallback } source = Source::explicit_formula;
};

// Throws DegenerateSpectrum when roots.degenerate is set; callers then go
// through the matrix-exponential fallback of semigroup_matrix.
ProjectorSet projector_set(const Eigen::Vector3d& xi, const ValidatedParams& p,
                           const DispersionPoint& roots);

// 3x3 spectral projectors of the longitudinal block (same construction,
// not embedded). Shared with the radial propagator.
struct LongitudinalEig {
    std::array<cxd, 3> lambda;
    std::array<Mat3c, 3> proj;
    bool degenerate = false;
};
LongitudinalEig longitudinal_eig(double xi_norm, const ValidatedParams& p);

// e^{t A(xi)}: spectral sum over the projectors when the spectrum is simple,
// scaling-and-squaring exponential otherwise. t = 0 or xi = 0 give I.
Mat5c semigroup_matrix(const Eigen::Vector3d& xi, double t, const ValidatedParams& p,
                       bool* used_fallback = nullptr);

// Compressional 3x3 semigroup at radius |xi| (basis n, u_par, m).
Mat3c longitudinal_semigroup(double xi_norm, double t, const ValidatedParams& p);

// Independent oracle: Pade + scaling-and-squaring, no spectral information.
Mat5c matrix_exponential_oracle(const Mat5c& M);

// ---- asymptotic expansion fits ------------------------------------------

enum class Regime { low, high };

struct FitItem {
    std::string name;
    double fitted = 0;
    double target = 0;
    bool has_target = false;
    double rel_err = 0;       // |fitted-target|/|target| when has_target
    double power = 0;         // measured log-log slope of the branch
    double expected_power = 0;
};

struct ExpansionReport {
    Regime regime = Regime::low;
    bool kappa_positive = true;
    std::vector<FitItem> items;

    double max_rel_err() const;
    bool pass(double tol) const; // all targeted items within tol
};

// Least-squares fit of the leading behavior of each branch over the grid,
// compared against the closed-form limits computed from p. Throws FitError
// when a branch's measured power differs from the expected one by > 0.1.
ExpansionReport asymptotic_fit(const ValidatedParams& p, Regime regime,
                               const std::vector<double>& grid);

// Default fit grids.
std::vector<double> log_grid(double lo, double hi, int n);

// ---- frequency-annulus scans ---------------------------------------------

struct GapScan {
    double max_re = 0;        // max over samples and branches of Re(lambda)
    double argmax_xi = 0;
    double min_branch_gap = 0; // min over samples of min pairwise |li - lj|
    double argmin_gap_xi = 0;
    std::vector<double> flagged; // local minima of the branch gap (coalescence candidates)
};

GapScan spectral_gap_scan(const ValidatedParams& p, double eps, double K, int n_samples);

// Best grid constants for the pointwise semigroup bounds. For each candidate
// rate c the amplitude sup |G_ij| e^{+c s} (s = |xi|^2 t on the low annulus,
// s = t on the high one) is maximized over the grid; the returned rate is the
// largest c whose amplitude stays below amp_cap. A rate of 0 means no
// candidate passed.
struct PointwiseBounds {
    double c_low = 0;
    double amp_low = 0;
    double c_high = 0;
    double amp_high = 0;
    double amp_cap = 0;
};

PointwiseBounds pointwise_bound_fit(const ValidatedParams& p,
                                    const std::vector<double>& xi_grid,
                                    const std::vector<double>& t_grid,
                                    double eps, double amp_cap = 10.0);

// Constants of the low-frequency decay kernel: thermal rate, acoustic
// damping, sound speed.
struct DecayKernelConstants {
    double sigma1; // (kappa+4)/(R+Cv)
    double sigma2; // nu/2 + (kappa+4) R / (2 Cv (Cv+R))
    double sigma3; // sqrt(R + R^2/Cv)
};

DecayKernelConstants decay_kernel_constants(const ValidatedParams& p);

} // namespace rhd
