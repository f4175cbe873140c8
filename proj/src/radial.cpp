#include "rhd/radial.hpp"

#include <algorithm>
#include <cmath>

#include "rhd/errors.hpp"
#include "rhd/expm.hpp"
#include "rhd/parallel.hpp"

namespace rhd {

RadialGrid RadialGrid::log_spaced(double lo, double hi, int n) {
    RadialGrid g;
    g.r = log_grid(lo, hi, n);
    return g;
}

RadialProfile gaussian_profile(const std::array<double, 4>& amps, double width,
                               const RadialGrid& grid, double power) {
    if (!(width > 0.0)) throw DomainError("gaussian_profile: width must be positive");
    RadialProfile prof;
    prof.r = grid.r;
    const std::size_t n = prof.r.size();
    prof.n.resize(n);
    prof.u_long.resize(n);
    prof.u_perp.resize(n);
    prof.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = prof.r[i];
        const double shape = std::pow(r, power) * std::exp(-width * r * r);
        prof.n[i] = amps[0] * shape;
        prof.u_long[i] = amps[1] * shape;
        prof.u_perp[i] = amps[2] * shape;
        prof.m[i] = amps[3] * shape;
    }
    const double at_zero = (power == 0.0) ? 1.0 : 0.0;
    for (int c = 0; c < 4; ++c) prof.amp_at_zero[c] = std::abs(amps[c]) * at_zero;
    return prof;
}

RadialPropagator::RadialPropagator(const std::vector<double>& r, const ValidatedParams& p)
    : params_(p) {
    nodes_.resize(r.size());
    parallel_for(r.size(), [&](std::size_t i) {
        Node& nd = nodes_[i];
        nd.visc_rate = -p.mu() * r[i] * r[i];
        nd.eig = longitudinal_eig(r[i], p);
        nd.fallback = nd.eig.degenerate;
        if (nd.fallback) nd.block = longitudinal_block(r[i], p);
    });
}

RadialProfile RadialPropagator::apply(const RadialProfile& prof, double t) const {
    if (t < 0.0) throw DomainError("RadialPropagator: t must be >= 0");
    if (prof.size() != nodes_.size())
        throw DomainError("RadialPropagator: profile grid mismatch");
    RadialProfile out = prof;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& nd = nodes_[i];
        Mat3c G;
        if (nd.fallback) {
            G = expm(Mat3c(nd.block * cxd(t, 0.0)));
        } else {
            G.setZero();
            for (int b = 0; b < 3; ++b) G += std::exp(nd.eig.lambda[b] * t) * nd.eig.proj[b];
        }
        const Vec3c v(prof.n[i], prof.u_long[i], prof.m[i]);
        const Vec3c w = G * v;
        out.n[i] = w(0);
        out.u_long[i] = w(1);
        out.m[i] = w(2);
        out.u_perp[i] = prof.u_perp[i] * std::exp(nd.visc_rate * t);
    }
    return out;
}

RadialProfile propagate_hat(const RadialProfile& prof, double t, const ValidatedParams& p) {
    return RadialPropagator(prof.r, p).apply(prof, t);
}

namespace {

// integral of f(r) dr over the log-spaced grid: substitution r = e^s,
// composite Simpson in s (trapezoid for a leftover interval).
double integrate_log_grid(const std::vector<double>& r, const std::vector<double>& f) {
    const std::size_t n = r.size();
    if (n < 3) throw QuadratureError("integrate_log_grid: too few nodes");
    const double ds = std::log(r[1] / r[0]);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * r[i];
    double total = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) total += ds / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
    if (i + 1 < n) total += 0.5 * ds * (g[i] + g[i + 1]);
    return total;
}

double density_sum(const RadialProfile& prof, std::size_t i) {
    return std::norm(prof.n[i]) + std::norm(prof.u_long[i]) + std::norm(prof.u_perp[i]) +
           std::norm(prof.m[i]);
}

} // namespace

double weighted_l2(const RadialProfile& prof, double two_k_power) {
    const std::size_t n = prof.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = std::pow(prof.r[i], two_k_power) * density_sum(prof, i) * prof.r[i] * prof.r[i];
    }
    const double total = 4.0 * M_PI * integrate_log_grid(prof.r, f);
    const double tail = 4.0 * M_PI * f.back() * prof.r.back();
    if (total > 0.0 && tail > 1e-6 * total) {
        throw QuadratureError("weighted_l2: tail contribution above 1e-6 of total");
    }
    return std::sqrt(std::max(0.0, total));
}

double sobolev_norm(const RadialProfile& prof, int k) {
    if (k < 0) throw DomainError("sobolev_norm: order must be >= 0");
    return weighted_l2(prof, 2.0 * k);
}

DecayCurve decay_curve(const RadialProfile& prof0, int k, const std::vector<double>& times,
                       const ValidatedParams& p) {
    DecayCurve c;
    c.k = k;
    c.times = times;
    c.norms.reserve(times.size());
    const RadialPropagator prop(prof0.r, p);
    for (double t : times) c.norms.push_back(sobolev_norm(prop.apply(prof0, t), k));
    return c;
}

DecayFit fit_decay_exponent(const DecayCurve& curve, double t1, double t2, double target) {
    std::vector<double> x, y;
    double prev = -1.0;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const double t = curve.times[i];
        if (t < t1 || t > t2) continue;
        const double nrm = curve.norms[i];
        if (!(nrm > 0.0)) throw FitError("fit_decay_exponent: non-positive norm in window");
        if (prev > 0.0 && nrm > prev * (1.0 + 1e-3)) {
            throw FitError("fit_decay_exponent: curve not monotone in fit window");
        }
        prev = nrm;
        x.push_back(std::log1p(t));
        y.push_back(std::log(nrm));
    }
    if (x.size() < 3) throw FitError("fit_decay_exponent: too few samples in window");

    const double nn = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    DecayFit fit;
    fit.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    fit.target = target;
    fit.rel_err = std::abs(fit.slope - target) / std::abs(target);
    fit.t1 = t1;
    fit.t2 = t2;
    return fit;
}

namespace {

// 4 pi int_0^R |f|^2 rho^2 drho on a uniform grid, Simpson.
double kernel_functional(double t, double eps, const DecayKernelConstants& s) {
    const double R = eps * std::sqrt(t);
    const int n = 2048; // resolves the few oscillations of the cosine factor
    const double dr = R / n;
    auto f2 = [&](double rho) {
        const double v = std::exp(-s.sigma1 * rho * rho) +
                         std::exp(-s.sigma2 * rho * rho) * std::cos(s.sigma3 * rho * std::sqrt(t));
        return v * v * rho * rho;
    };
    double total = 0.0;
    for (int i = 0; i + 2 <= n; i += 2) {
        total += dr / 3.0 * (f2(i * dr) + 4.0 * f2((i + 1) * dr) + f2((i + 2) * dr));
    }
    return 4.0 * M_PI * total;
}

// 4 pi int over nodes <= eps of w(i) r^2 dr
double low_freq_mass(const std::vector<double>& r, double eps,
                     const std::vector<double>& w) {
    std::vector<double> rr, f;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] > eps) break;
        rr.push_back(r[i]);
        f.push_back(w[i] * r[i] * r[i]);
    }
    if (rr.size() < 3) return 0.0;
    return 4.0 * M_PI * integrate_log_grid(rr, f);
}

} // namespace

LowerBoundReport lower_bound_scan(const RadialProfile& prof0, const std::vector<double>& times,
                                  const ValidatedParams& p, double eps, double K) {
    const DecayKernelConstants sig = decay_kernel_constants(p);
    LowerBoundReport rep;
    rep.sigma1 = sig.sigma1;
    rep.sigma2 = sig.sigma2;
    rep.sigma3 = sig.sigma3;
    rep.eps = eps;
    rep.K = K;
    rep.times = times;

    const RadialPropagator prop(prof0.r, p);
    const std::size_t nn = prof0.size();
    rep.ratio_floor = 1e300;
    rep.F_floor = 1e300;

    // leading weights of the thermal and acoustic branches in the
    // density-density Green entry as |xi| -> 0 (they sum to G(0) = 1)
    const double w_thermal = p.R() / (p.R() + p.Cv());
    const double w_acoustic = p.Cv() / (p.R() + p.Cv());

    for (double t : times) {
        const RadialProfile pr = prop.apply(prof0, t);

        std::vector<double> n_mass(nn), rem_mass(nn), model_mass(nn), damped_mass(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double r = prof0.r[i];
            const double f_model =
                w_thermal * std::exp(-sig.sigma1 * r * r * t) +
                w_acoustic * std::exp(-sig.sigma2 * r * r * t) * std::cos(sig.sigma3 * r * t);
            n_mass[i] = std::norm(pr.n[i]);
            rem_mass[i] = std::norm(pr.n[i] - f_model * prof0.n[i]);
            model_mass[i] = f_model * f_model * std::norm(prof0.n[i]);
            damped_mass[i] = std::exp(-2.0 * sig.sigma2 * r * r * t) *
                             (std::norm(prof0.u_long[i]) + std::norm(prof0.u_perp[i]) +
                              std::norm(prof0.m[i]));
        }
        std::array<double, 4> T;
        T[0] = low_freq_mass(prof0.r, eps, n_mass);
        T[1] = low_freq_mass(prof0.r, eps, rem_mass);
        T[2] = 0.5 * low_freq_mass(prof0.r, eps, model_mass);
        T[3] = 2.0 * low_freq_mass(prof0.r, eps, damped_mass);
        rep.T_terms.push_back(T);

        std::vector<double> nsq(nn);
        for (std::size_t i = 0; i < nn; ++i) nsq[i] = std::norm(pr.n[i]) * prof0.r[i] * prof0.r[i];
        const double n_norm = std::sqrt(4.0 * M_PI * integrate_log_grid(prof0.r, nsq));
        const double ratio = n_norm * std::pow(1.0 + t, 0.75);
        rep.ratio_series.push_back(ratio);
        rep.ratio_floor = std::min(rep.ratio_floor, ratio);

        const double F = kernel_functional(t, eps, sig);
        rep.F_values.push_back(F);
        rep.F_floor = std::min(rep.F_floor, F);
    }
    rep.pass = rep.ratio_floor > 0.0 && rep.F_floor > 0.0;
    return rep;
}

MixThreshold lower_bound_mix_threshold(double width, const std::vector<double>& times,
                                       const ValidatedParams& p, const RadialGrid& grid) {
    auto floor_of = [&](double s) {
        const RadialProfile prof = gaussian_profile({1.0, s, s, s}, width, grid);
        const RadialPropagator prop(grid.r, p);
        double fl = 1e300;
        for (double t : times) {
            const RadialProfile pr = prop.apply(prof, t);
            std::vector<double> nsq(pr.size());
            for (std::size_t i = 0; i < pr.size(); ++i)
                nsq[i] = std::norm(pr.n[i]) * pr.r[i] * pr.r[i];
            const double n_norm = std::sqrt(4.0 * M_PI * integrate_log_grid(pr.r, nsq));
            fl = std::min(fl, n_norm * std::pow(1.0 + t, 0.75));
        }
        return fl;
    };

    const double threshold = 0.1 * floor_of(0.0);
    MixThreshold out;
    double lo = 0.0, hi = 1.0;
    while (hi <= 64.0 && floor_of(hi) >= threshold) {
        lo = hi;
        hi *= 2.0;
    }
    if (hi > 64.0) {
        out.unbounded = true;
        out.s_star = 64.0;
        out.ratio_surrogate = 1.0 / (64.0 * 64.0);
        return out;
    }
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (floor_of(mid) >= threshold ? lo : hi) = mid;
    }
    out.s_star = 0.5 * (lo + hi);
    out.ratio_surrogate = 1.0 / (out.s_star * out.s_star);
    return out;
}

} // namespace rhd
