#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhd/errors.hpp"
#include "rhd/radial.hpp"
#include "rhd/report.hpp"

using namespace rhd;

namespace {

const ValidatedParams kRef = validate_params(reference_params(1.0));
const RadialGrid kGrid = RadialGrid::log_spaced();

// closed form for 4 pi int r^{2m} e^{-2 w r^2} r^2 dr
double gaussian_moment(int m, double w) {
    return 4.0 * M_PI * 0.5 * std::tgamma(m + 1.5) / std::pow(2.0 * w, m + 1.5);
}

RadialProfile generic_profile() {
    return gaussian_profile({1.0, 0.5, 0.5, 0.5}, 1.0, kGrid);
}

} // namespace

TEST_CASE("gaussian profile amplitudes and zero-frequency surrogate") {
    const RadialProfile p = gaussian_profile({1.0, 0.0, 0.0, 0.0}, 1.0, kGrid);
    CHECK(std::abs(p.n.front()) == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.u_long[i] == cxd(0.0, 0.0));
        CHECK(p.u_perp[i] == cxd(0.0, 0.0));
        CHECK(p.m[i] == cxd(0.0, 0.0));
    }
    CHECK(p.amp_at_zero[0] == 1.0);
    CHECK(p.amp_at_zero[3] == 0.0);

    const RadialProfile m = gaussian_profile({0.0, 0.0, 0.0, 1.0}, 0.5, kGrid);
    for (std::size_t i = 0; i < m.size(); i += 200) {
        CHECK(m.m[i].real() == doctest::Approx(std::exp(-0.5 * m.r[i] * m.r[i])));
    }

    CHECK_THROWS_AS(gaussian_profile({1, 0, 0, 0}, 0.0, kGrid), DomainError);
}

TEST_CASE("vanishing-power profiles have zero surrogate at the origin") {
    const RadialProfile v = gaussian_profile({1.0, 0.0, 0.0, 0.0}, 1.0, kGrid, 1.5);
    CHECK(v.amp_at_zero[0] == 0.0);
    CHECK(std::abs(v.n.front()) < 1e-5); // r^{3/2} at r = 1e-4
}

TEST_CASE("quadrature reproduces closed-form gaussian norms") {
    // ||m||: w = 1/2, k = 0 -> pi^{3/4}; k = 1 -> sqrt(3/2) pi^{3/4}
    const RadialProfile m = gaussian_profile({0.0, 0.0, 0.0, 1.0}, 0.5, kGrid);
    CHECK(sobolev_norm(m, 0) == doctest::Approx(std::pow(M_PI, 0.75)).epsilon(1e-10));
    CHECK(sobolev_norm(m, 1) ==
          doctest::Approx(std::sqrt(1.5) * std::pow(M_PI, 0.75)).epsilon(1e-10));

    // gamma-function oracle at several widths and orders
    for (double w : {0.25, 1.0, 4.0}) {
        const RadialProfile p = gaussian_profile({1.0, 0.0, 0.0, 0.0}, w, kGrid);
        for (int k = 0; k <= 3; ++k) {
            CHECK(sobolev_norm(p, k) ==
                  doctest::Approx(std::sqrt(gaussian_moment(k, w))).epsilon(1e-10));
        }
    }

    RadialProfile zero = gaussian_profile({0, 0, 0, 0}, 1.0, kGrid);
    CHECK(sobolev_norm(zero, 0) == 0.0);
    CHECK_THROWS_AS(sobolev_norm(zero, -1), DomainError);
}

TEST_CASE("quadrature flags profiles that do not decay") {
    RadialProfile flat;
    flat.r = kGrid.r;
    flat.n.assign(flat.r.size(), cxd(1.0, 0.0));
    flat.u_long.assign(flat.r.size(), cxd(0.0, 0.0));
    flat.u_perp.assign(flat.r.size(), cxd(0.0, 0.0));
    flat.m.assign(flat.r.size(), cxd(0.0, 0.0));
    CHECK_THROWS_AS(sobolev_norm(flat, 0), QuadratureError);
}

TEST_CASE("propagation at t = 0 is the identity") {
    const RadialProfile p = generic_profile();
    const RadialProfile q = propagate_hat(p, 0.0, kRef);
    for (std::size_t i = 0; i < p.size(); i += 100) {
        CHECK(std::abs(q.n[i] - p.n[i]) < 1e-14);
        CHECK(std::abs(q.u_long[i] - p.u_long[i]) < 1e-14);
        CHECK(std::abs(q.u_perp[i] - p.u_perp[i]) < 1e-14);
        CHECK(std::abs(q.m[i] - p.m[i]) < 1e-14);
    }
    CHECK_THROWS_AS(propagate_hat(p, -0.1, kRef), DomainError);
}

TEST_CASE("transverse data evolves by the exact shear factor and stays decoupled") {
    const RadialProfile p = gaussian_profile({0.0, 0.0, 1.0, 0.0}, 1.0, kGrid);
    for (double t : {0.5, 2.0, 10.0}) {
        const RadialProfile q = propagate_hat(p, t, kRef);
        for (std::size_t i = 0; i < p.size(); i += 150) {
            const double expected = std::exp(-kRef.mu() * p.r[i] * p.r[i] * t);
            CHECK(std::abs(q.u_perp[i] - p.u_perp[i] * expected) < 1e-14);
            CHECK(q.n[i] == cxd(0.0, 0.0));
            CHECK(q.m[i] == cxd(0.0, 0.0));
            CHECK(q.u_long[i] == cxd(0.0, 0.0));
        }
    }
}

TEST_CASE("node-wise propagation matches the 5x5 semigroup") {
    const RadialProfile p = generic_profile();
    const double t = 1.0;
    const RadialProfile q = propagate_hat(p, t, kRef);
    std::mt19937_64 eng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t i =
            static_cast<std::size_t>(rng_uniform(eng) * static_cast<double>(p.size()));
        const Eigen::Vector3d xi(p.r[i], 0.0, 0.0);
        const Mat5c G = semigroup_matrix(xi, t, kRef);
        Eigen::Matrix<cxd, 5, 1> v;
        v << p.n[i], p.u_long[i], p.u_perp[i], cxd(0, 0), p.m[i];
        const auto w = G * v;
        CHECK(std::abs(w(0) - q.n[i]) < 1e-12);
        CHECK(std::abs(w(1) - q.u_long[i]) < 1e-12);
        CHECK(std::abs(w(2) - q.u_perp[i]) < 1e-12);
        CHECK(std::abs(w(4) - q.m[i]) < 1e-12);
    }
}

TEST_CASE("propagation preserves the norm at t = 0 and contracts later") {
    const RadialProfile p = generic_profile();
    const double n0 = sobolev_norm(p, 0);
    CHECK(sobolev_norm(propagate_hat(p, 0.0, kRef), 0) == doctest::Approx(n0).epsilon(1e-13));
    double prev = n0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double cur = sobolev_norm(propagate_hat(p, t, kRef), 0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("heat-kernel control curve fits the closed-form exponent") {
    // scalar multiplier e^{-r^2 t} on the w = 1/2 gaussian:
    // norm is proportional to (1 + 2t)^{-3/4}
    const RadialProfile p = gaussian_profile({0.0, 0.0, 0.0, 1.0}, 0.5, kGrid);
    DecayCurve curve;
    curve.k = 0;
    curve.times = log_grid(1.0, 4000.0, 48);
    for (double t : curve.times) {
        RadialProfile q = p;
        for (std::size_t i = 0; i < q.size(); ++i) {
            q.m[i] *= std::exp(-q.r[i] * q.r[i] * t);
        }
        curve.norms.push_back(sobolev_norm(q, 0));
        const double exact = std::pow(M_PI, 0.75) * std::pow(1.0 + 2.0 * t, -0.75);
        CHECK(curve.norms.back() == doctest::Approx(exact).epsilon(1e-9));
    }
    const DecayFit fit = fit_decay_exponent(curve, 10.0, 2000.0, -0.75);
    CHECK(fit.pass(0.05));
}

TEST_CASE("decay exponents match the optimal rates over the fit window") {
    const RadialProfile prof = generic_profile();
    const auto times = log_grid(0.1, 2000.0, 64);
    double slope0 = 0.0;
    for (int k = 0; k <= 2; ++k) {
        const DecayCurve curve = decay_curve(prof, k, times, kRef);
        const DecayFit fit = fit_decay_exponent(curve, 10.0, 1000.0, -0.75 - 0.5 * k);
        CHECK(fit.pass(0.05));
        if (k == 0) slope0 = fit.slope;
        // exponent additivity: each order adds -1/2
        CHECK(fit.slope - slope0 == doctest::Approx(-0.5 * k).epsilon(0.1));
    }
}

TEST_CASE("order-vanishing data saturates the derivative-data decay rate") {
    const RadialProfile prof = gaussian_profile({1.0, 0.5, 0.5, 0.5}, 1.0, kGrid, 1.5);
    const auto times = log_grid(0.1, 2000.0, 64);
    const DecayCurve curve = decay_curve(prof, 0, times, kRef);
    const DecayFit fit = fit_decay_exponent(curve, 10.0, 1000.0, -1.5);
    CHECK(fit.pass(0.05));
}

TEST_CASE("fit rejects non-monotone curves in the window") {
    DecayCurve bumpy;
    bumpy.k = 0;
    bumpy.times = {10.0, 20.0, 40.0, 80.0};
    bumpy.norms = {1.0, 0.5, 0.7, 0.2};
    CHECK_THROWS_AS(fit_decay_exponent(bumpy, 10.0, 80.0, -0.75), FitError);

    DecayCurve sparse;
    sparse.k = 0;
    sparse.times = {1.0, 2.0};
    sparse.norms = {1.0, 0.5};
    CHECK_THROWS_AS(fit_decay_exponent(sparse, 1.0, 2.0, -0.75), FitError);
}

TEST_CASE("upper-bound envelope admits a single constant along the curve") {
    const RadialProfile prof = generic_profile();
    const auto times = log_grid(1.0, 1000.0, 32);
    const DecayCurve curve = decay_curve(prof, 0, times, kRef);
    double env = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        env = std::max(env, curve.norms[i] * std::pow(1.0 + times[i], 0.75));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(curve.norms[i] <= env * std::pow(1.0 + times[i], -0.75) * (1.0 + 1e-12));
    }
}

TEST_CASE("lower-bound scan on density-dominant data") {
    const RadialProfile prof = gaussian_profile({1.0, 0.05, 0.05, 0.05}, 1.0, kGrid);
    const auto times = log_grid(1.0, 1000.0, 32);
    const LowerBoundReport rep = lower_bound_scan(prof, times, kRef, 1e-2, 1e2);

    CHECK(rep.sigma1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rep.sigma2 == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(rep.sigma3 == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));

    CHECK(rep.pass);
    CHECK(rep.ratio_floor > 0.0);
    CHECK(rep.F_floor > 0.0);
    for (double F : rep.F_values) CHECK(F > 0.0);
    for (const auto& T : rep.T_terms) {
        CHECK(T[0] >= 0.0);
        CHECK(T[2] >= 0.0);
        CHECK(T[3] >= 0.0);
    }
    // on density-dominant data the remainder mass stays under the direct one
    CHECK(rep.T_terms.back()[1] < rep.T_terms.back()[0]);
}

TEST_CASE("ratio floor is stable under doubled quadrature resolution") {
    const auto times = log_grid(1.0, 1000.0, 16);
    const RadialProfile p1 = gaussian_profile({1.0, 0.05, 0.05, 0.05}, 1.0, kGrid);
    const RadialGrid fine = RadialGrid::log_spaced(1e-4, 1e3, 2 * 2049 - 1);
    const RadialProfile p2 = gaussian_profile({1.0, 0.05, 0.05, 0.05}, 1.0, fine);
    const LowerBoundReport r1 = lower_bound_scan(p1, times, kRef, 1e-2, 1e2);
    const LowerBoundReport r2 = lower_bound_scan(p2, times, kRef, 1e-2, 1e2);
    CHECK(std::abs(r1.ratio_floor - r2.ratio_floor) <= 0.10 * r1.ratio_floor);
}

TEST_CASE("amplitude-mix threshold reports a positive degeneration point") {
    const auto times = log_grid(1.0, 300.0, 10);
    const RadialGrid grid = RadialGrid::log_spaced(1e-4, 1e3, 513);
    const MixThreshold mix = lower_bound_mix_threshold(1.0, times, kRef, grid);
    CHECK(mix.s_star > 0.0);
    if (!mix.unbounded) {
        CHECK(mix.ratio_surrogate == doctest::Approx(1.0 / (mix.s_star * mix.s_star)));
    }
}
