#include "rhd/energy.hpp"

#include <cmath>

#include "rhd/errors.hpp"

namespace rhd {

namespace {
double box_volume(const SolverContext& ctx) {
    const double L = ctx.grid().L;
    return L * L * L;
}
} // namespace

double grad_norm_sq(const std::vector<cxd>& hat, const SolverContext& ctx, int j) {
    double sum = 0.0;
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
        sum += std::pow(ctx.xi_sq(idx), j) * std::norm(hat[idx]);
    }
    return box_volume(ctx) * sum;
}

double grad_norm_sq(const SpectralField& state, const SolverContext& ctx, int j) {
    double sum = 0.0;
    for (int c = 0; c < 5; ++c) sum += grad_norm_sq(state.comp[c], ctx, j);
    return sum;
}

double hk_norm(const SpectralField& state, const SolverContext& ctx, int k) {
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += grad_norm_sq(state, ctx, j);
    return std::sqrt(sum);
}

double cross_term(const SpectralField& state, const SolverContext& ctx, int j) {
    double sum = 0.0;
    const std::size_t n = state.comp[0].size();
    for (std::size_t idx = 0; idx < n; ++idx) {
        cxd xi_dot_u(0.0, 0.0);
        for (int a = 0; a < 3; ++a) xi_dot_u += ctx.xi(idx, a) * state.comp[1 + a][idx];
        sum += std::pow(ctx.xi_sq(idx), j) *
               std::imag(xi_dot_u * std::conj(state.comp[0][idx]));
    }
    return box_volume(ctx) * sum;
}

LyapunovValue lyapunov_functional(const SpectralField& state, const SolverContext& ctx,
                                  int k, double delta, double c_eq) {
    if (!(delta > 0.0)) throw DomainError("lyapunov_functional: delta must be positive");
    LyapunovValue out;
    for (int j = k; j <= k + 2; ++j) out.norm_sq += grad_norm_sq(state, ctx, j);
    out.value = out.norm_sq + delta * (cross_term(state, ctx, k) + cross_term(state, ctx, k + 1));
    if (out.norm_sq > 0.0) {
        out.ratio = out.value / out.norm_sq;
        if (out.ratio < 1.0 / c_eq || out.ratio > c_eq) {
            throw EquivalenceError("lyapunov_functional: equivalence ratio " +
                                   std::to_string(out.ratio) + " outside [1/" +
                                   std::to_string(c_eq) + ", " + std::to_string(c_eq) + "]");
        }
    }
    return out;
}

namespace {

struct DissipationPair {
    double raw;
    double qsub;
};

// Exact dissipation of the weighted energy identity:
//   d/dt [ sum_j R||grad^j n||^2 + ||grad^j u||^2 + Cv||grad^j m||^2
//          + delta sum_{j<=1} cross_j ]
//   = -2 sum_j [ mu ||grad^{j+1} u||^2 + (mu+mu') ||grad^j div u||^2
//                + kappa ||grad^{j+1} m||^2 + 1/4 ||grad^j q||^2
//                + 1/4 ||grad^j div q||^2 ]
//     - delta R sum_{j<=1} ||grad^{j+1} n||^2 + (coupling remainder),
// so the audit pairs exactly these terms against the discrete derivative.
DissipationPair dissipation(const SpectralField& state, const SolverContext& ctx,
                            double delta) {
    const ValidatedParams& p = ctx.params();
    const FluxFields q = recover_flux_q(state.comp[4], ctx);
    const std::size_t n = state.comp[0].size();

    double visc = 0, divu = 0, heat = 0, flux = 0, flux_lin = 0, ncross = 0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double a2 = ctx.xi_sq(idx);
        const double w012 = 1.0 + a2 + a2 * a2; // sum of |xi|^{2j}, j = 0..2
        const double w01 = 1.0 + a2;

        double usq = 0.0;
        cxd xi_dot_u(0.0, 0.0);
        for (int a = 0; a < 3; ++a) {
            usq += std::norm(state.comp[1 + a][idx]);
            xi_dot_u += ctx.xi(idx, a) * state.comp[1 + a][idx];
        }
        visc += w012 * a2 * usq;
        divu += w012 * std::norm(xi_dot_u);
        heat += w012 * a2 * std::norm(state.comp[4][idx]);

        double qsq = std::norm(q.divq_hat[idx]);
        for (int a = 0; a < 3; ++a) qsq += std::norm(q.q_hat[a][idx]);
        flux += w012 * qsq;
        flux_lin += w012 * 4.0 * a2 / (1.0 + a2) * std::norm(state.comp[4][idx]);

        ncross += w01 * a2 * std::norm(state.comp[0][idx]);
    }
    const double vol = box_volume(ctx);
    const double common = 2.0 * (p.mu() * visc + (p.mu() + p.mu_prime()) * divu +
                                 p.kappa() * heat) +
                          delta * p.R() * ncross;
    DissipationPair d;
    d.raw = vol * (common + 0.5 * flux);
    d.qsub = vol * (common + 2.0 * flux_lin);
    return d;
}

double weighted_lyapunov(const SpectralField& state, const SolverContext& ctx, double delta) {
    const ValidatedParams& p = ctx.params();
    double sum = 0.0;
    for (int j = 0; j <= 2; ++j) {
        sum += p.R() * grad_norm_sq(state.comp[0], ctx, j);
        for (int a = 0; a < 3; ++a) sum += grad_norm_sq(state.comp[1 + a], ctx, j);
        sum += p.Cv() * grad_norm_sq(state.comp[4], ctx, j);
    }
    sum += delta * (cross_term(state, ctx, 0) + cross_term(state, ctx, 1));
    return sum;
}

} // namespace

bool EnergyReport::margins_pass(double slack) const {
    for (std::size_t i = 0; i < margins.size(); ++i) {
        const double d = diss_raw[i + 1];
        if (!(margins[i] <= slack * d)) return false;
    }
    return true;
}

EnergyReport audit_apriori(const Trajectory& traj, const SolverContext& ctx, double delta) {
    if (traj.snaps.size() < 3)
        throw DomainError("audit_apriori: need at least three snapshots");

    EnergyReport rep;
    rep.delta = delta;
    rep.times = traj.times;

    for (const SpectralField& s : traj.snaps) {
        std::array<double, 3> hk{}, cr{};
        for (int k = 0; k <= 2; ++k) {
            hk[k] = hk_norm(s, ctx, k);
            cr[k] = cross_term(s, ctx, k);
        }
        rep.hk.push_back(hk);
        rep.cross.push_back(cr);
        rep.lyapunov.push_back(weighted_lyapunov(s, ctx, delta));
        const DissipationPair d = dissipation(s, ctx, delta);
        rep.diss_raw.push_back(d.raw);
        rep.diss_qsub.push_back(d.qsub);
    }

    rep.worst_margin_ratio = -1e300;
    for (std::size_t i = 1; i + 1 < traj.snaps.size(); ++i) {
        const double dt = rep.times[i + 1] - rep.times[i - 1];
        const double dF = (rep.lyapunov[i + 1] - rep.lyapunov[i - 1]) / dt;
        const double margin = dF + rep.diss_raw[i];
        rep.margins.push_back(margin);
        if (rep.diss_raw[i] > 0.0) {
            rep.worst_margin_ratio = std::max(rep.worst_margin_ratio, margin / rep.diss_raw[i]);
        }
    }

    rep.lyapunov_decreasing = true;
    for (std::size_t i = 0; i + 1 < rep.lyapunov.size(); ++i) {
        if (!(rep.lyapunov[i + 1] < rep.lyapunov[i])) {
            rep.lyapunov_decreasing = false;
            break;
        }
    }
    return rep;
}

FunctionalSeries bootstrap_G(const std::vector<double>& times,
                             const std::vector<std::vector<double>>& F_series, int k) {
    if (F_series.size() < static_cast<std::size_t>(k + 1))
        throw DomainError("bootstrap_G: need F_i series for i = 0..k");
    FunctionalSeries out;
    out.k = k;
    out.times = times;
    out.G.resize(times.size());
    double running = 0.0;
    for (std::size_t t = 0; t < times.size(); ++t) {
        double sum = 0.0;
        for (int i = 0; i <= k; ++i) {
            sum += std::pow(1.0 + times[t], 1.5 + i) * F_series[i][t];
        }
        running = std::max(running, sum);
        out.G[t] = running;
    }

    const double T = times.back();
    double g_half = out.G.front();
    for (std::size_t t = 0; t < times.size(); ++t) {
        if (times[t] <= 0.5 * T) g_half = out.G[t];
    }
    out.growth_ratio = g_half > 0.0 ? out.G.back() / g_half : 0.0;
    out.bounded = g_half > 0.0 && out.growth_ratio <= 2.0;
    return out;
}

std::vector<std::vector<double>> radial_lyapunov_series(const RadialProfile& prof0,
                                                        const std::vector<double>& times,
                                                        const ValidatedParams& p, int kmax,
                                                        double delta) {
    const RadialPropagator prop(prof0.r, p);
    std::vector<std::vector<double>> F(kmax + 1, std::vector<double>(times.size()));

    // Simpson in log r, as in the profile norms
    const auto integrate = [](const std::vector<double>& r, const std::vector<double>& f) {
        const double ds = std::log(r[1] / r[0]);
        std::vector<double> g(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) g[i] = f[i] * r[i];
        double total = 0.0;
        std::size_t i = 0;
        for (; i + 2 < r.size(); i += 2)
            total += ds / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
        if (i + 1 < r.size()) total += 0.5 * ds * (g[i] + g[i + 1]);
        return total;
    };

    for (std::size_t t = 0; t < times.size(); ++t) {
        const RadialProfile pr = prop.apply(prof0, times[t]);
        std::vector<double> cross(kmax + 3, 0.0);
        std::vector<double> norms(kmax + 3, 0.0);
        std::vector<double> f(pr.size());
        for (int j = 0; j <= kmax + 2; ++j) {
            norms[j] = weighted_l2(pr, 2.0 * j);
            // cross_j = 4 pi int r^{2j} r Im(u_par conj(n)) r^2 dr
            for (std::size_t i = 0; i < pr.size(); ++i) {
                const double r = pr.r[i];
                f[i] = std::pow(r, 2 * j) * r *
                       std::imag(pr.u_long[i] * std::conj(pr.n[i])) * r * r;
            }
            cross[j] = 4.0 * M_PI * integrate(pr.r, f);
        }
        for (int k = 0; k <= kmax; ++k) {
            double norm_sq = 0.0;
            for (int j = k; j <= k + 2; ++j) norm_sq += norms[j] * norms[j];
            F[k][t] = norm_sq + delta * (cross[k] + cross[k + 1]);
        }
    }
    return F;
}

} // namespace rhd
