#include "rhd/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>

#include "rhd/errors.hpp"
#include "rhd/expm.hpp"
#include "rhd/parallel.hpp"

namespace rhd {

void GridSpec::validate() const {
    if (N != 16 && N != 32 && N != 64 && N != 128)
        throw ConfigError("GridSpec: N must be one of 16, 32, 64, 128");
    if (!(L > 0.0)) throw ConfigError("GridSpec: L must be positive");
    if (dealias != "two-thirds") throw ConfigError("GridSpec: unknown dealias rule " + dealias);
}

SpectralField SpectralField::zero(int N) {
    SpectralField f;
    f.N = N;
    const std::size_t n = static_cast<std::size_t>(N) * N * N;
    for (auto& c : f.comp) c.assign(n, cxd(0.0, 0.0));
    return f;
}

SolverContext::SolverContext(const GridSpec& grid, const ValidatedParams& p, double dt)
    : grid_(grid), params_(p), dt_(dt), two_pi_over_L_(2.0 * M_PI / grid.L), fft_(grid.N) {
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("SolverContext: dt must be positive");

    const int N = grid_.N;
    const std::size_t n = grid_.points();
    for (int axis = 0; axis < 3; ++axis) {
        kint_[axis].resize(N);
        for (int i = 0; i < N; ++i) kint_[axis][i] = (i <= N / 2 - 1) ? i : i - N;
    }

    const int kmax = N / 3; // two-thirds rule: keep |k_i| <= floor(N/3)
    ksq_.resize(n);
    mask_.resize(n);
    int max_ksq = 0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const int k1 = kcomp(idx, 0), k2 = kcomp(idx, 1), k3 = kcomp(idx, 2);
        ksq_[idx] = k1 * k1 + k2 * k2 + k3 * k3;
        mask_[idx] = (std::abs(k1) <= kmax && std::abs(k2) <= kmax && std::abs(k3) <= kmax) ? 1 : 0;
        max_ksq = std::max(max_ksq, ksq_[idx]);
    }

    // one exponential-integrator weight set per distinct |k|^2
    op_slot_.assign(max_ksq + 1, -1);
    std::vector<int> keys;
    for (std::size_t idx = 0; idx < n; ++idx) {
        int& slot = op_slot_[ksq_[idx]];
        if (slot >= 0) continue;
        slot = static_cast<int>(keys.size());
        keys.push_back(ksq_[idx]);
    }
    ops_.resize(keys.size());
    parallel_for(keys.size(), [&](std::size_t s) {
        ModeOp& op = ops_[s];
        const double a = two_pi_over_L_ * std::sqrt(static_cast<double>(keys[s]));
        const Mat3c M = longitudinal_block(a, params_) * cxd(dt_, 0.0);
        expm_phi12(M, op.E, op.F1, op.F2);
        const cxd z(-params_.mu() * a * a * dt_, 0.0);
        op.tE = std::exp(z);
        op.tF1 = phi1_scalar(z);
        op.tF2 = phi2_scalar(z);
    });
}

void SolverContext::apply_linear(Piece piece, const std::array<std::vector<cxd>, 5>& src,
                                 std::array<std::vector<cxd>, 5>& dst) const {
    const std::size_t n = grid_.points();
    for (int c = 0; c < 5; ++c) dst[c].resize(n);

    for (std::size_t idx = 0; idx < n; ++idx) {
        const ModeOp& op = ops_[op_slot_[ksq_[idx]]];
        const Mat3c* M = &op.E;
        cxd tr = op.tE;
        if (piece == Piece::phi1) {
            M = &op.F1;
            tr = op.tF1;
        } else if (piece == Piece::phi2) {
            M = &op.F2;
            tr = op.tF2;
        }

        if (ksq_[idx] == 0) {
            // A(0) = 0: every component sees the same scalar weight
            const cxd w = (*M)(0, 0);
            for (int c = 0; c < 5; ++c) dst[c][idx] = w * src[c][idx];
            continue;
        }

        const double k1 = kcomp(idx, 0), k2 = kcomp(idx, 1), k3 = kcomp(idx, 2);
        const double inv = 1.0 / std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        const double e1 = k1 * inv, e2 = k2 * inv, e3 = k3 * inv;

        const cxd u1 = src[1][idx], u2 = src[2][idx], u3 = src[3][idx];
        const cxd v = e1 * u1 + e2 * u2 + e3 * u3;
        const cxd nn = src[0][idx], mm = src[4][idx];

        const cxd n2 = (*M)(0, 0) * nn + (*M)(0, 1) * v + (*M)(0, 2) * mm;
        const cxd v2 = (*M)(1, 0) * nn + (*M)(1, 1) * v + (*M)(1, 2) * mm;
        const cxd m2 = (*M)(2, 0) * nn + (*M)(2, 1) * v + (*M)(2, 2) * mm;

        dst[0][idx] = n2;
        dst[4][idx] = m2;
        dst[1][idx] = tr * (u1 - v * e1) + v2 * e1;
        dst[2][idx] = tr * (u2 - v * e2) + v2 * e2;
        dst[3][idx] = tr * (u3 - v * e3) + v2 * e3;
    }
}

void SolverContext::apply_mask(std::vector<cxd>& hat) const {
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
        if (!mask_[idx]) hat[idx] = cxd(0.0, 0.0);
    }
}

double SolverContext::masked_energy_fraction(const std::array<std::vector<cxd>, 5>& hats) const {
    double masked = 0.0, total = 0.0;
    for (const auto& hat : hats) {
        for (std::size_t idx = 0; idx < hat.size(); ++idx) {
            const double e = std::norm(hat[idx]);
            total += e;
            if (!mask_[idx]) masked += e;
        }
    }
    return total > 0.0 ? masked / total : 0.0;
}

SolverContext init_grid(const GridSpec& grid, const ValidatedParams& p, double dt) {
    return SolverContext(grid, p, dt);
}

void nonlocal_apply(std::vector<cxd>& field_hat, const SolverContext& ctx) {
    for (std::size_t idx = 0; idx < field_hat.size(); ++idx) {
        field_hat[idx] *= ctx.nonlocal_multiplier(idx);
    }
}

namespace {

std::vector<double> to_phys(const std::vector<cxd>& hat, const Fft3& fft) {
    std::vector<cxd> tmp = hat;
    fft.backward(tmp);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

std::vector<cxd> to_spec(const std::vector<double>& phys, const Fft3& fft) {
    std::vector<cxd> tmp(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) tmp[i] = phys[i];
    fft.forward(tmp);
    return tmp;
}

std::vector<double> deriv_phys(const std::vector<cxd>& hat, int axis, const SolverContext& ctx) {
    std::vector<cxd> tmp(hat.size());
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
        tmp[idx] = cxd(0.0, ctx.xi(idx, axis)) * hat[idx];
    }
    ctx.fft().backward(tmp);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

// masked spectral powers of the temperature perturbation and the slaved
// potential s = m + 3/2 m^2 + m^3 + 1/4 m^4 = ((1+m)^4 - 1)/4
std::vector<cxd> potential_hat(const std::vector<cxd>& m_hat, const std::vector<double>& m_phys,
                               const SolverContext& ctx) {
    const std::size_t n = m_phys.size();
    std::vector<double> m2(n), prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = m_phys[i] * m_phys[i];
    std::vector<cxd> m2_hat = to_spec(prod, ctx.fft());
    ctx.apply_mask(m2_hat);
    m2 = to_phys(m2_hat, ctx.fft());

    for (std::size_t i = 0; i < n; ++i) prod[i] = m2[i] * m_phys[i];
    std::vector<cxd> m3_hat = to_spec(prod, ctx.fft());
    ctx.apply_mask(m3_hat);

    for (std::size_t i = 0; i < n; ++i) prod[i] = m2[i] * m2[i];
    std::vector<cxd> m4_hat = to_spec(prod, ctx.fft());
    ctx.apply_mask(m4_hat);

    std::vector<cxd> s_hat(n);
    for (std::size_t i = 0; i < n; ++i) {
        s_hat[i] = m_hat[i] + 1.5 * m2_hat[i] + m3_hat[i] + 0.25 * m4_hat[i];
    }
    return s_hat;
}

} // namespace

NonlinearRhs nonlinear_rhs(const SpectralField& state, const SolverContext& ctx,
                           double positivity_floor, StepDiag* diag) {
    const std::size_t n = ctx.grid().points();
    const ValidatedParams& p = ctx.params();
    const Fft3& fft = ctx.fft();

    std::array<std::vector<double>, 5> phys;
    for (int c = 0; c < 5; ++c) phys[c] = to_phys(state.comp[c], fft);
    const auto& nn = phys[0];
    const auto& mm = phys[4];

    double max_n = 0, max_m = 0, max_u = 0, min1pn = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        max_n = std::max(max_n, std::abs(nn[i]));
        max_m = std::max(max_m, std::abs(mm[i]));
        max_u = std::max({max_u, std::abs(phys[1][i]), std::abs(phys[2][i]),
                          std::abs(phys[3][i])});
        min1pn = std::min(min1pn, 1.0 + nn[i]);
    }
    if (diag) {
        diag->max_abs_n = max_n;
        diag->max_abs_m = max_m;
        diag->max_abs_u = max_u;
        diag->min_one_plus_n = min1pn;
        diag->advective_cfl = ctx.dt() * max_u * ctx.grid().N / ctx.grid().L;
    }
    if (min1pn < positivity_floor) {
        throw PositivityError("nonlinear_rhs: min(1+n) = " + std::to_string(min1pn) +
                              " under floor " + std::to_string(positivity_floor));
    }

    std::array<std::vector<double>, 3> dn, dm;
    std::array<std::array<std::vector<double>, 3>, 3> gu; // gu[i][j] = d u_i / d x_j
    for (int j = 0; j < 3; ++j) {
        dn[j] = deriv_phys(state.comp[0], j, ctx);
        dm[j] = deriv_phys(state.comp[4], j, ctx);
        for (int i = 0; i < 3; ++i) gu[i][j] = deriv_phys(state.comp[1 + i], j, ctx);
    }

    // combined viscous operator mu Lap u + (mu+mu') grad div u, spectrally
    std::array<std::vector<double>, 3> visc;
    {
        std::array<std::vector<cxd>, 3> tmp;
        for (int i = 0; i < 3; ++i) tmp[i].resize(n);
        for (std::size_t idx = 0; idx < n; ++idx) {
            const double a2 = ctx.xi_sq(idx);
            cxd div(0.0, 0.0);
            for (int j = 0; j < 3; ++j) div += ctx.xi(idx, j) * state.comp[1 + j][idx];
            for (int i = 0; i < 3; ++i) {
                tmp[i][idx] = -p.mu() * a2 * state.comp[1 + i][idx] -
                              (p.mu() + p.mu_prime()) * ctx.xi(idx, i) * div;
            }
        }
        for (int i = 0; i < 3; ++i) {
            fft.backward(tmp[i]);
            visc[i].resize(n);
            for (std::size_t idx = 0; idx < n; ++idx) visc[i][idx] = tmp[i][idx].real();
        }
    }

    std::vector<double> lap_m;
    if (!p.heat_conduction_free()) {
        std::vector<cxd> tmp(n);
        for (std::size_t idx = 0; idx < n; ++idx) {
            tmp[idx] = -ctx.xi_sq(idx) * state.comp[4][idx];
        }
        fft.backward(tmp);
        lap_m.resize(n);
        for (std::size_t idx = 0; idx < n; ++idx) lap_m[idx] = tmp[idx].real();
    }

    const std::vector<cxd> s_hat = potential_hat(state.comp[4], mm, ctx);
    std::vector<cxd> divq_hat(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        divq_hat[idx] = -4.0 * ctx.nonlocal_multiplier(idx) * s_hat[idx];
    }
    const std::vector<double> divq = to_phys(divq_hat, fft);

    std::vector<double> r1(n), r2x(n), r2y(n), r2z(n), r3(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double divu = gu[0][0][i] + gu[1][1][i] + gu[2][2][i];
        const double u1 = phys[1][i], u2 = phys[2][i], u3 = phys[3][i];
        const double ratio = nn[i] / (1.0 + nn[i]);

        r1[i] = -nn[i] * divu - (u1 * dn[0][i] + u2 * dn[1][i] + u3 * dn[2][i]);

        const double pressure_mismatch = p.R() * (nn[i] - mm[i]) / (1.0 + nn[i]);
        r2x[i] = -(u1 * gu[0][0][i] + u2 * gu[0][1][i] + u3 * gu[0][2][i]) -
                 ratio * visc[0][i] + pressure_mismatch * dn[0][i];
        r2y[i] = -(u1 * gu[1][0][i] + u2 * gu[1][1][i] + u3 * gu[1][2][i]) -
                 ratio * visc[1][i] + pressure_mismatch * dn[1][i];
        r2z[i] = -(u1 * gu[2][0][i] + u2 * gu[2][1][i] + u3 * gu[2][2][i]) -
                 ratio * visc[2][i] + pressure_mismatch * dn[2][i];

        double dd = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double d_ab = 0.5 * (gu[a][b][i] + gu[b][a][i]);
                dd += d_ab * d_ab;
            }
        }
        r3[i] = -p.Cv() * (u1 * dm[0][i] + u2 * dm[1][i] + u3 * dm[2][i]) -
                p.R() * mm[i] * divu +
                (2.0 * p.mu() * dd + p.mu_prime() * divu * divu) / (1.0 + nn[i]) +
                ratio * divq[i];
        if (!lap_m.empty()) r3[i] -= p.kappa() * ratio * lap_m[i];
    }

    NonlinearRhs rhs;
    rhs.comp[0] = to_spec(r1, fft);
    rhs.comp[1] = to_spec(r2x, fft);
    rhs.comp[2] = to_spec(r2y, fft);
    rhs.comp[3] = to_spec(r2z, fft);
    rhs.comp[4] = to_spec(r3, fft);
    // nonlocal elliptic source (1-Lap)^{-1} Lap (m^4 + 4 m^3 + 6 m^2) = 4(s - m)
    for (std::size_t idx = 0; idx < n; ++idx) {
        rhs.comp[4][idx] +=
            ctx.nonlocal_multiplier(idx) * 4.0 * (s_hat[idx] - state.comp[4][idx]);
    }

    if (diag) diag->aliasing_fraction = ctx.masked_energy_fraction(rhs.comp);
    for (auto& c : rhs.comp) ctx.apply_mask(c);
    return rhs;
}

namespace {

// energy row carries Cv m_t: divide its source by Cv for the state-space form
void to_state_space(NonlinearRhs& rhs, const ValidatedParams& p) {
    const double inv_cv = 1.0 / p.Cv();
    for (auto& c : rhs.comp[4]) c *= inv_cv;
}

void check_caps(const StepDiag& d, const SolverConfig& cfg) {
    if (!std::isfinite(d.max_abs_n) || !std::isfinite(d.max_abs_m) ||
        !std::isfinite(d.max_abs_u)) {
        throw StabilityError("step: non-finite field diagnostic");
    }
    if (d.max_abs_n >= cfg.stability_cap || d.max_abs_m >= cfg.stability_cap) {
        throw StabilityError("step: perturbation amplitude reached the stability cap");
    }
}

} // namespace

SpectralField step(const SpectralField& state, const SolverContext& ctx,
                   const SolverConfig& cfg, StepDiag* diag) {
    StepDiag local;
    StepDiag* d = diag ? diag : &local;
    const double dt = ctx.dt();

    if (cfg.linear_only) {
        const auto n_phys = to_phys(state.comp[0], ctx.fft());
        const auto m_phys = to_phys(state.comp[4], ctx.fft());
        for (std::size_t i = 0; i < n_phys.size(); ++i) {
            d->max_abs_n = std::max(d->max_abs_n, std::abs(n_phys[i]));
            d->max_abs_m = std::max(d->max_abs_m, std::abs(m_phys[i]));
            d->min_one_plus_n = std::min(d->min_one_plus_n, 1.0 + n_phys[i]);
        }
        check_caps(*d, cfg);
        SpectralField out;
        out.N = state.N;
        ctx.apply_linear(SolverContext::Piece::exp, state.comp, out.comp);
        return out;
    }

    NonlinearRhs rhs0 = nonlinear_rhs(state, ctx, cfg.positivity_floor, d);
    check_caps(*d, cfg);
    to_state_space(rhs0, ctx.params());

    SpectralField stage;
    stage.N = state.N;
    {
        std::array<std::vector<cxd>, 5> eu, f1;
        ctx.apply_linear(SolverContext::Piece::exp, state.comp, eu);
        ctx.apply_linear(SolverContext::Piece::phi1, rhs0.comp, f1);
        for (int c = 0; c < 5; ++c) {
            stage.comp[c].resize(eu[c].size());
            for (std::size_t i = 0; i < eu[c].size(); ++i) {
                stage.comp[c][i] = eu[c][i] + dt * f1[c][i];
            }
        }
    }

    NonlinearRhs rhs1 = nonlinear_rhs(stage, ctx, cfg.positivity_floor, nullptr);
    to_state_space(rhs1, ctx.params());

    std::array<std::vector<cxd>, 5> diff, f2;
    for (int c = 0; c < 5; ++c) {
        diff[c].resize(rhs1.comp[c].size());
        for (std::size_t i = 0; i < diff[c].size(); ++i) {
            diff[c][i] = rhs1.comp[c][i] - rhs0.comp[c][i];
        }
    }
    ctx.apply_linear(SolverContext::Piece::phi2, diff, f2);

    SpectralField out;
    out.N = state.N;
    for (int c = 0; c < 5; ++c) {
        out.comp[c].resize(stage.comp[c].size());
        for (std::size_t i = 0; i < out.comp[c].size(); ++i) {
            out.comp[c][i] = stage.comp[c][i] + dt * f2[c][i];
        }
    }
    return out;
}

FluxFields recover_flux_q(const std::vector<cxd>& m_hat, const SolverContext& ctx) {
    const std::size_t n = m_hat.size();
    const std::vector<double> m_phys = to_phys(m_hat, ctx.fft());
    const std::vector<cxd> s_hat = potential_hat(m_hat, m_phys, ctx);

    FluxFields out;
    out.divq_hat.resize(n);
    for (int j = 0; j < 3; ++j) out.q_hat[j].resize(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double a2 = ctx.xi_sq(idx);
        const cxd scaled = s_hat[idx] / (1.0 + a2);
        out.divq_hat[idx] = 4.0 * a2 * scaled;
        for (int j = 0; j < 3; ++j) {
            out.q_hat[j][idx] = cxd(0.0, -4.0 * ctx.xi(idx, j)) * scaled;
        }
    }
    return out;
}

SpectralField random_initial_data(const SolverConfig& cfg, const SolverContext& ctx) {
    SpectralField f = SpectralField::zero(ctx.grid().N);
    if (cfg.amplitude == 0.0) return f;

    const std::size_t n = ctx.grid().points();
    std::mt19937_64 eng(cfg.seed);
    const auto uniform = [&eng]() {
        return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
    };

    double max_abs = 0.0;
    std::array<std::vector<double>, 5> phys;
    for (int c = 0; c < 5; ++c) {
        std::vector<double> noise(n);
        for (auto& v : noise) v = uniform();
        std::vector<cxd> hat = to_spec(noise, ctx.fft());
        for (std::size_t idx = 0; idx < n; ++idx) {
            const bool keep = std::abs(ctx.kcomp(idx, 0)) <= cfg.data_modes &&
                              std::abs(ctx.kcomp(idx, 1)) <= cfg.data_modes &&
                              std::abs(ctx.kcomp(idx, 2)) <= cfg.data_modes &&
                              ctx.mask()[idx] && idx != 0; // zero mean
            if (!keep) hat[idx] = cxd(0.0, 0.0);
        }
        f.comp[c] = std::move(hat);
        phys[c] = to_phys(f.comp[c], ctx.fft());
        for (double v : phys[c]) max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs > 0.0) {
        const double scale = cfg.amplitude / max_abs;
        for (auto& c : f.comp) {
            for (auto& v : c) v *= scale;
        }
    }
    return f;
}

namespace {

Trajectory run_once(const SolverConfig& cfg, double dt_request,
                    const SnapshotCallback& on_snapshot) {
    const ValidatedParams p = validate_params(cfg.params);
    const long long nsteps = std::max<long long>(1, std::llround(cfg.t_final / dt_request));
    const double dt = cfg.t_final / static_cast<double>(nsteps);
    const SolverContext ctx(cfg.grid, p, dt);

    long long stride = nsteps;
    if (cfg.snap_interval > 0.0) {
        stride = std::max<long long>(1, std::llround(cfg.snap_interval / dt));
    }

    Trajectory traj;
    traj.dt_used = dt;
    SpectralField state = random_initial_data(cfg, ctx);

    const auto snapshot = [&](double t, const SpectralField& s) {
        traj.times.push_back(t);
        if (cfg.store_snapshots) traj.snaps.push_back(s);
        if (on_snapshot) on_snapshot(t, s);
    };
    snapshot(0.0, state);

    for (long long i = 1; i <= nsteps; ++i) {
        StepDiag d;
        state = step(state, ctx, cfg, &d);
        d.t = static_cast<double>(i) * dt;
        traj.diags.push_back(d);
        if (i % stride == 0 || i == nsteps) snapshot(d.t, state);
    }
    return traj;
}

} // namespace

Trajectory run(const SolverConfig& cfg, const SnapshotCallback& on_snapshot) {
    double dt = cfg.dt;
    for (int halvings = 0;; ++halvings) {
        try {
            Trajectory traj = run_once(cfg, dt, on_snapshot);
            traj.dt_halvings = halvings;
            return traj;
        } catch (const StabilityError&) {
            if (halvings >= cfg.max_dt_halvings) throw;
            dt *= 0.5;
        }
    }
}

// ---- snapshot file format -------------------------------------------------

namespace {
template <typename T>
void write_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_raw(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
} // namespace

void write_snapshot(const std::string& path, const SpectralField& field,
                    const SolverContext& ctx, bool include_q) {
    static_assert(std::endian::native == std::endian::little,
                  "snapshot format is little-endian");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("write_snapshot: cannot open " + path);

    os.write("RHD1", 4);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(field.N));
    write_raw<double>(os, ctx.grid().L);
    write_raw<std::uint32_t>(os, include_q ? 8u : 5u);

    const auto dump = [&os](const std::vector<double>& v) {
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    for (int c = 0; c < 5; ++c) dump(to_phys(field.comp[c], ctx.fft()));
    if (include_q) {
        const FluxFields q = recover_flux_q(field.comp[4], ctx);
        for (int j = 0; j < 3; ++j) dump(to_phys(q.q_hat[j], ctx.fft()));
    }
    if (!os) throw Error("write_snapshot: write failed for " + path);
}

SnapshotData read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("read_snapshot: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RHD1", 4) != 0)
        throw Error("read_snapshot: bad magic in " + path);

    SnapshotData out;
    out.N = static_cast<int>(read_raw<std::uint32_t>(is));
    out.L = read_raw<double>(is);
    const std::uint32_t ncomp = read_raw<std::uint32_t>(is);
    if (ncomp != 5 && ncomp != 8) throw Error("read_snapshot: bad component count");

    const std::size_t n = static_cast<std::size_t>(out.N) * out.N * out.N;
    out.comps.resize(ncomp);
    for (auto& c : out.comps) {
        c.resize(n);
        is.read(reinterpret_cast<char*>(c.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    }
    if (!is) throw Error("read_snapshot: truncated file " + path);
    return out;
}

} // namespace rhd
