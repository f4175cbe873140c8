#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rhd/fft3.hpp"
#include "rhd/params.hpp"
#include "rhd/symbol.hpp"

namespace rhd {

struct GridSpec {
    int N = 64;
    double L = 16.0 * 3.14159265358979323846;
    std::string dealias = "two-thirds";

    void validate() const; // N in {16,32,64,128}, L > 0
    std::size_t points() const { return static_cast<std::size_t>(N) * N * N; }
};

// Spectral coefficients of the five scalar components (n, u1, u2, u3, m)
// over the wavenumber lattice, x fastest. Physical fields are real, so the
// coefficients are Hermitian-symmetric.
struct SpectralField {
    int N = 0;
    std::array<std::vector<cxd>, 5> comp;

    static SpectralField zero(int N);
};

struct StepDiag {
    double t = 0;
    double max_abs_n = 0;
    double max_abs_m = 0;
    double min_one_plus_n = 1.0;
    double max_abs_u = 0;
    double advective_cfl = 0;       // dt * max|u| * N / L
    double aliasing_fraction = 0;   // masked-band share of RHS energy before masking
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> snaps;
    std::vector<StepDiag> diags;
    double dt_used = 0;
    int dt_halvings = 0;
};

struct SolverConfig {
    GridSpec grid;
    FluidParams params;
    double dt = 1e-2;
    double t_final = 1.0;
    double snap_interval = 0.0; // <= 0: snapshot only at t = 0 and t_final
    double amplitude = 1e-2;    // max-norm scale of the random initial data
    int data_modes = 2;         // band limit (per component index) of the data
    unsigned long long seed = 1;
    bool linear_only = false;   // drop the nonlinear sources entirely
    double positivity_floor = 0.1;
    double stability_cap = 1.0;
    bool store_snapshots = true;
    int max_dt_halvings = 3;
};

// Wavenumber tables, dealias mask, and per-|k|^2 exponential-integrator
// weights for one (grid, params, dt) triple.
class SolverContext {
  public:
    SolverContext(const GridSpec& grid, const ValidatedParams& p, double dt);

    const GridSpec& grid() const { return grid_; }
    const ValidatedParams& params() const { return params_; }
    double dt() const { return dt_; }
    const Fft3& fft() const { return fft_; }

    const std::vector<unsigned char>& mask() const { return mask_; }
    // integer wavenumber component along axis, in [-N/2, N/2)
    int kcomp(std::size_t idx, int axis) const { return kint_[axis][idx_coord(idx, axis)]; }
    double xi(std::size_t idx, int axis) const {
        return two_pi_over_L_ * kcomp(idx, axis);
    }
    double xi_sq(std::size_t idx) const { return two_pi_over_L_ * two_pi_over_L_ * ksq_[idx]; }
    // Fourier multiplier of the inverse-elliptic Laplacian: -|xi|^2/(1+|xi|^2)
    double nonlocal_multiplier(std::size_t idx) const {
        const double a2 = xi_sq(idx);
        return -a2 / (1.0 + a2);
    }

    // Weight selection for the exponential integrator.
    enum class Piece { exp, phi1, phi2 };
    // dst_c = op(dt A)(src_c) applied mode-wise across all five components.
    void apply_linear(Piece piece, const std::array<std::vector<cxd>, 5>& src,
                      std::array<std::vector<cxd>, 5>& dst) const;

    void apply_mask(std::vector<cxd>& hat) const;
    // masked-band energy share of the field (diagnostic, computed pre-mask)
    double masked_energy_fraction(const std::array<std::vector<cxd>, 5>& hats) const;

  private:
    std::size_t idx_coord(std::size_t idx, int axis) const {
        const std::size_t N = static_cast<std::size_t>(grid_.N);
        if (axis == 0) return idx % N;
        if (axis == 1) return (idx / N) % N;
        return idx / (N * N);
    }

    struct ModeOp {
        Mat3c E, F1, F2;   // longitudinal exp / phi1 / phi2 of dt*A
        cxd tE, tF1, tF2;  // transverse counterparts
    };

    GridSpec grid_;
    ValidatedParams params_;
    double dt_;
    double two_pi_over_L_;
    Fft3 fft_;
    std::array<std::vector<int>, 3> kint_;
    std::vector<int> ksq_;                // integer |k|^2 per mode
    std::vector<unsigned char> mask_;     // 1 = kept
    std::vector<int> op_slot_;            // |k|^2 -> index into ops_
    std::vector<ModeOp> ops_;
};

SolverContext init_grid(const GridSpec& grid, const ValidatedParams& p, double dt);

// Multiplies each mode by -|xi|^2/(1+|xi|^2).
void nonlocal_apply(std::vector<cxd>& field_hat, const SolverContext& ctx);

// Spectral right-hand sides of the reduced system: mass, momentum (3), and
// energy source (the energy one not yet divided by Cv). Dealiased. Throws
// PositivityError when min(1+n) falls under the configured floor.
struct NonlinearRhs {
    std::array<std::vector<cxd>, 5> comp;
};

NonlinearRhs nonlinear_rhs(const SpectralField& state, const SolverContext& ctx,
                           double positivity_floor = 0.1, StepDiag* diag = nullptr);

// One second-order exponential Runge-Kutta step. Exact for vanishing
// nonlinearity. Throws StabilityError when diagnostics leave their caps.
SpectralField step(const SpectralField& state, const SolverContext& ctx,
                   const SolverConfig& cfg, StepDiag* diag = nullptr);

// Radiative flux slaved to the temperature: q_hat = -4 i xi s_hat/(1+|xi|^2)
// with s = m + 3/2 m^2 + m^3 + 1/4 m^4, and div q accordingly.
struct FluxFields {
    std::array<std::vector<cxd>, 3> q_hat;
    std::vector<cxd> divq_hat;
};

FluxFields recover_flux_q(const std::vector<cxd>& m_hat, const SolverContext& ctx);

// Band-limited random real data from the config seed, max-norm-scaled to
// cfg.amplitude, zero mean.
SpectralField random_initial_data(const SolverConfig& cfg, const SolverContext& ctx);

using SnapshotCallback = std::function<void(double t, const SpectralField&)>;

// Integrates to t_final, storing snapshots every snap_interval. Retries with
// halved dt on StabilityError up to max_dt_halvings, then rethrows.
Trajectory run(const SolverConfig& cfg, const SnapshotCallback& on_snapshot = nullptr);

// ---- snapshot file format -------------------------------------------------
// little-endian: magic "RHD1", u32 N, f64 L, u32 component count (5, or 8
// with the recovered flux), then components as contiguous f64 physical-space
// arrays in x-fastest order.

void write_snapshot(const std::string& path, const SpectralField& field,
                    const SolverContext& ctx, bool include_q);

struct SnapshotData {
    int N = 0;
    double L = 0;
    std::vector<std::vector<double>> comps;
};

SnapshotData read_snapshot(const std::string& path);

} // namespace rhd
