#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rhd/errors.hpp"
#include "rhd/expm.hpp"
#include "rhd/report.hpp"
#include "rhd/symbol.hpp"

using namespace rhd;

namespace {

const ValidatedParams kRef = validate_params(reference_params(1.0));
const ValidatedParams kRef0 = validate_params(reference_params(0.0));

Eigen::Vector3d random_direction(std::mt19937_64& eng) {
    const double z = 2.0 * rng_uniform(eng) - 1.0;
    const double phi = 2.0 * M_PI * rng_uniform(eng);
    const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {rxy * std::cos(phi), rxy * std::sin(phi), z};
}

double log_uniform(std::mt19937_64& eng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng_uniform(eng));
}

} // namespace

TEST_CASE("symbol vanishes at zero frequency") {
    const SymbolMatrix s = assemble_symbol(Eigen::Vector3d::Zero(), kRef);
    CHECK(s.entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symbol entries at the reference point") {
    const SymbolMatrix s = assemble_symbol(Eigen::Vector3d(1, 0, 0), kRef);
    // temperature damping: conduction + radiation at |xi| = 1
    CHECK(s.entries(4, 4).real() == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(s.entries(4, 4).imag() == 0.0);
    // compressional velocity damping
    CHECK(s.entries(1, 1).real() == doctest::Approx(-7.0 / 3.0).epsilon(1e-14));
    // shear-only entries
    CHECK(s.entries(2, 2).real() == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("velocity block is symmetric negative semidefinite") {
    std::mt19937_64 eng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Vector3d xi = log_uniform(eng, 1e-2, 1e2) * random_direction(eng);
        const SymbolMatrix s = assemble_symbol(xi, kRef);
        Eigen::Matrix3d block;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(s.entries(1 + i, 1 + j).imag() == 0.0);
                block(i, j) = s.entries(1 + i, 1 + j).real();
            }
        CHECK((block - block.transpose()).norm() == doctest::Approx(0.0));
        const Eigen::Vector3d evs =
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(block).eigenvalues();
        CHECK(evs.maxCoeff() <= 1e-12);
    }
}

TEST_CASE("density row scales with xi, not with the gas constant") {
    FluidParams fp = reference_params(1.0);
    fp.R = 2.0;
    const ValidatedParams p2 = validate_params(fp);
    const Eigen::Vector3d xi(0.3, -0.7, 1.1);
    const SymbolMatrix s = assemble_symbol(xi, p2);
    for (int j = 0; j < 3; ++j) {
        CHECK(s.entries(0, 1 + j) == cxd(0.0, -xi[j]));
        // while the pressure-gradient column does carry R
        CHECK(s.entries(1 + j, 0) == cxd(0.0, -2.0 * xi[j]));
    }
}

TEST_CASE("at unit gas constant the symbol matches the R-scaled density-row variant") {
    // regression for the display that writes the density row as -i R xi^T:
    // the two forms coincide exactly when R = 1
    std::mt19937_64 eng(4);
    const Eigen::Vector3d xi = 2.5 * random_direction(eng);
    const double a2 = xi.squaredNorm();
    const ValidatedParams& p = kRef;

    Mat5c variant = Mat5c::Zero();
    for (int j = 0; j < 3; ++j) {
        variant(0, 1 + j) = cxd(0.0, -p.R() * xi[j]);
        variant(1 + j, 0) = cxd(0.0, -p.R() * xi[j]);
        variant(1 + j, 4) = cxd(0.0, -p.R() * xi[j]);
        variant(4, 1 + j) = cxd(0.0, -(p.R() / p.Cv()) * xi[j]);
        for (int k = 0; k < 3; ++k)
            variant(1 + j, 1 + k) -= (p.mu() + p.mu_prime()) * xi[j] * xi[k];
        variant(1 + j, 1 + j) -= p.mu() * a2;
    }
    variant(4, 4) = -radiative_damping(a2, p);

    const SymbolMatrix s = assemble_symbol(xi, p);
    CHECK((s.entries - variant).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("characteristic cubic at the reference point") {
    const CubicCoeffs c = characteristic_cubic(1.0, kRef);
    CHECK(c.h == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.c2 == doctest::Approx(13.0 / 3.0).epsilon(1e-15));
    CHECK(c.c1 == doctest::Approx(19.0 / 3.0).epsilon(1e-15));
    CHECK(c.c0 == doctest::Approx(2.0).epsilon(1e-15));

    const CubicCoeffs z = characteristic_cubic(0.0, kRef);
    CHECK(z.c2 == 0.0);
    CHECK(z.c1 == 0.0);
    CHECK(z.c0 == 0.0);

    const CubicCoeffs c0 = characteristic_cubic(1.0, kRef0);
    CHECK(c0.h == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(c0.c0 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("cubic coefficients agree with the determinant of the symbol") {
    // independent oracle: interpolate det(A - lambda I)/(-(lambda + mu a^2)^2)
    // at four sample points and recover the cubic's coefficients
    std::mt19937_64 eng(17);
    for (int trial = 0; trial < 12; ++trial) {
        FluidParams fp;
        fp.R = 0.5 + 2.0 * rng_uniform(eng);
        fp.Cv = 0.5 + 2.0 * rng_uniform(eng);
        fp.mu = 0.2 + rng_uniform(eng);
        fp.mu_prime = 0.1 + rng_uniform(eng);
        fp.kappa = (trial % 3 == 0) ? 0.0 : rng_uniform(eng);
        const ValidatedParams p = validate_params(fp);
        const Eigen::Vector3d xi = log_uniform(eng, 0.3, 3.0) * random_direction(eng);
        const double a2 = xi.squaredNorm();

        const Mat5c A = assemble_symbol(xi, p).entries;
        const CubicCoeffs c = characteristic_cubic(a2, p);

        Eigen::Matrix4cd vander;
        Eigen::Vector4cd rhs;
        for (int s = 0; s < 4; ++s) {
            const cxd lam(0.37 + 0.81 * s, 0.29 - 0.53 * s); // fixed generic samples
            Mat5c shifted = A;
            for (int d = 0; d < 5; ++d) shifted(d, d) -= lam;
            const cxd det = Eigen::FullPivLU<Mat5c>(shifted).determinant();
            const cxd transverse = lam + p.mu() * a2;
            rhs(s) = det / (-transverse * transverse);
            vander(s, 0) = lam * lam * lam;
            vander(s, 1) = lam * lam;
            vander(s, 2) = lam;
            vander(s, 3) = 1.0;
        }
        const Eigen::Vector4cd coef = vander.fullPivLu().solve(rhs);
        CHECK(std::abs(coef(0) - 1.0) < 1e-9);
        const double scale = std::max(1.0, std::abs(c.c1));
        CHECK(std::abs(coef(1) - c.c2) < 1e-9 * scale);
        CHECK(std::abs(coef(2) - c.c1) < 1e-9 * scale);
        CHECK(std::abs(coef(3) - c.c0) < 1e-9 * scale);
    }
}

TEST_CASE("cubic matches the classical display in the damping and restoring terms at R=1") {
    // the lambda^2 and lambda coefficients of the commonly printed cubic
    // coincide with the derived ones exactly at R = 1 ...
    const double a2 = 1.7;
    const CubicCoeffs c = characteristic_cubic(a2, kRef);
    const double h = radiative_damping(a2, kRef);
    const double printed_c2 = kRef.kappa() / kRef.Cv() * a2 + kRef.nu() * a2 +
                              4.0 * a2 / (kRef.Cv() * (a2 + 1.0));
    const double printed_c1 = kRef.nu() * (kRef.kappa() / kRef.Cv()) * a2 * a2 +
                              kRef.nu() * 4.0 * a2 * a2 / (kRef.Cv() * (a2 + 1.0)) +
                              (1.0 + kRef.R() * kRef.R() / kRef.Cv()) * a2;
    CHECK(c.c2 == doctest::Approx(printed_c2).epsilon(1e-14));
    CHECK(c.c1 == doctest::Approx(printed_c1).epsilon(1e-14));

    // ... while the constant term of that display lacks a factor a^2 on the
    // radiative part; the derived value R a^2 h is the determinant's one
    const double printed_c0 =
        kRef.kappa() / kRef.Cv() * a2 * a2 + 4.0 * a2 / (kRef.Cv() * (a2 + 1.0));
    CHECK(c.c0 == doctest::Approx(kRef.R() * a2 * h).epsilon(1e-14));
    CHECK(c.c0 != doctest::Approx(printed_c0).epsilon(1e-6));
}

TEST_CASE("transverse branch and low-frequency lead of the thermal branch") {
    const DispersionPoint d2 = dispersion_roots(2.0, kRef);
    CHECK(d2.lambda4 == doctest::Approx(-4.0).epsilon(1e-15));

    const DispersionPoint dl = dispersion_roots(1e-3, kRef);
    CHECK(dl.lambda1.real() / 1e-6 == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(dl.lambda1.imag() == 0.0);

    CHECK_THROWS_AS(dispersion_roots(0.0, kRef), DomainError);
}

TEST_CASE("golden roots at |xi| = 1") {
    // frozen from the companion-matrix oracle with Newton polish
    const DispersionPoint d = dispersion_roots(1.0, kRef);
    CHECK(d.lambda1.real() == doctest::Approx(-0.42949192408578823).epsilon(1e-13));
    CHECK(d.lambda2.real() == doctest::Approx(-1.951920704623773).epsilon(1e-13));
    CHECK(d.lambda2.imag() == doctest::Approx(0.92014701978046198).epsilon(1e-13));
    CHECK(d.lambda3 == std::conj(d.lambda2));
    CHECK(d.lambda4 == -1.0);
    CHECK_FALSE(d.degenerate);
}

TEST_CASE("root residuals stay under tolerance across the spectrum") {
    std::mt19937_64 eng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = log_uniform(eng, 1e-3, 1e3);
        const ValidatedParams& p = (trial % 2 == 0) ? kRef : kRef0;
        const DispersionPoint d = dispersion_roots(a, p); // throws RootFailure on violation
        const CubicCoeffs g = characteristic_cubic(a * a, p);

        // dissipativity and conjugacy
        for (const cxd& lam : d.all()) CHECK(lam.real() < 0.0);
        if (d.lambda2.imag() != 0.0) {
            CHECK(d.lambda3 == std::conj(d.lambda2));
            CHECK(d.lambda2.imag() > 0.0);
        }

        // the three compressional roots satisfy the cubic up to the
        // representability floor of the evaluation
        for (const cxd& lam : {d.lambda1, d.lambda2, d.lambda3}) {
            const double scale = std::max(1.0, std::abs(lam));
            const double floor_term = 8.0 * std::abs(g.deriv(lam)) * std::abs(lam) * 1e-16;
            CHECK(std::abs(g.eval(lam)) <= 1e-9 * scale * scale * scale + floor_term);
        }
    }
}

TEST_CASE("spectrum depends on |xi| only") {
    std::mt19937_64 eng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = log_uniform(eng, 1e-2, 1e2);
        const DispersionPoint radial = dispersion_roots(a, kRef);
        const DispersionPoint vec = dispersion_roots(a * random_direction(eng), kRef);
        CHECK(std::abs(radial.lambda1 - vec.lambda1) <=
              1e-12 * std::max(1.0, std::abs(radial.lambda1)));
        CHECK(std::abs(radial.lambda2 - vec.lambda2) <=
              1e-12 * std::max(1.0, std::abs(radial.lambda2)));
    }
}

TEST_CASE("branch labels stay continuous across the acoustic real-split") {
    const auto grid = log_grid(0.5, 10.0, 400);
    const auto pts = dispersion_scan(grid, kRef);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double step = grid[i] - grid[i - 1];
        // each labeled branch moves O(step * d lambda/d xi), never swaps
        CHECK(std::abs(pts[i].lambda1 - pts[i - 1].lambda1) < 50.0 * step);
        CHECK(std::abs(pts[i].lambda2 - pts[i - 1].lambda2) <
              50.0 * step * std::max(1.0, std::abs(pts[i].lambda2)));
    }
}

TEST_CASE("projector completeness, idempotency, and eigen-relation") {
    std::mt19937_64 eng(13);
    int used = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Vector3d xi = log_uniform(eng, 1e-3, 1e3) * random_direction(eng);
        const DispersionPoint roots = dispersion_roots(xi, kRef);
        if (roots.degenerate) continue;
        ++used;
        const ProjectorSet ps = projector_set(xi, kRef, roots);
        CHECK(ps.source == ProjectorSet::Source::explicit_formula);

        const Mat5c sum = ps.P1 + ps.P2 + ps.P3 + ps.P4;
        CHECK((sum - Mat5c::Identity()).cwiseAbs().maxCoeff() < 1e-8);

        const std::array<const Mat5c*, 4> P{&ps.P1, &ps.P2, &ps.P3, &ps.P4};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Mat5c prod = (*P[i]) * (*P[j]);
                if (i == j) prod -= *P[i];
                CHECK(prod.cwiseAbs().maxCoeff() < 1e-7);
            }
        }

        // A P_i = lambda_i P_i against the assembled symbol
        const Mat5c A = assemble_symbol(xi, kRef).entries;
        const std::array<cxd, 4> lam = roots.all();
        for (int i = 0; i < 4; ++i) {
            const Mat5c resid = A * (*P[i]) - lam[i] * (*P[i]);
            CHECK(resid.cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, std::abs(lam[i])));
        }
    }
    CHECK(used >= 55); // coalescence flags are rare on random samples
}

TEST_CASE("transverse projector acts as I - xi xi^T/|xi|^2 on velocity") {
    const Eigen::Vector3d xi(1, 0, 0);
    const ProjectorSet ps = projector_set(xi, kRef, dispersion_roots(xi, kRef));
    Eigen::Matrix<cxd, 5, 1> v = Eigen::Matrix<cxd, 5, 1>::Zero();
    v(2) = 1.0; // u2: perpendicular to xi
    CHECK(((ps.P4 * v) - v).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 eng(3);
    const Eigen::Vector3d xi2 = 2.0 * random_direction(eng);
    const Eigen::Vector3d e = xi2.normalized();
    const ProjectorSet ps2 = projector_set(xi2, kRef, dispersion_roots(xi2, kRef));
    Eigen::Matrix<cxd, 5, 1> w = Eigen::Matrix<cxd, 5, 1>::Zero();
    const Eigen::Vector3d vel(0.3, -1.1, 0.7);
    for (int i = 0; i < 3; ++i) w(1 + i) = vel[i];
    const Eigen::Vector3d expect = vel - e * e.dot(vel);
    const auto got = ps2.P4 * w;
    CHECK(std::abs(got(0)) < 1e-14);
    CHECK(std::abs(got(4)) < 1e-14);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(got(1 + i) - expect[i]) < 1e-13);
}

TEST_CASE("projector construction refuses coalescent spectra") {
    DispersionPoint fake = dispersion_roots(1.0, kRef);
    fake.degenerate = true;
    CHECK_THROWS_AS(projector_set(Eigen::Vector3d(1, 0, 0), kRef, fake), DegenerateSpectrum);
}

TEST_CASE("semigroup fallback engages at a genuine coalescence point") {
    // bisect the radius where the acoustic pair turns real
    double lo = 1.7, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dispersion_roots(mid, kRef).lambda2.imag() > 0.0 ? lo : hi) = mid;
    }
    const DispersionPoint d = dispersion_roots(lo, kRef);
    CHECK(d.degenerate);

    bool used_fallback = false;
    const Eigen::Vector3d xi(lo, 0, 0);
    const Mat5c G = semigroup_matrix(xi, 0.7, kRef, &used_fallback);
    CHECK(used_fallback);
    const Mat5c M = assemble_symbol(xi, kRef).entries * cxd(0.7, 0.0);
    CHECK((G - matrix_exponential_oracle(M)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("semigroup at t = 0 and at xi = 0 is the identity") {
    CHECK((semigroup_matrix(Eigen::Vector3d(0.4, -0.2, 1.0), 0.0, kRef) - Mat5c::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((semigroup_matrix(Eigen::Vector3d::Zero(), 3.7, kRef) - Mat5c::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK_THROWS_AS(semigroup_matrix(Eigen::Vector3d(1, 0, 0), -1.0, kRef), DomainError);
}

TEST_CASE("spectral sum matches the scaling-and-squaring oracle") {
    std::mt19937_64 eng(7);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const double a = log_uniform(eng, 1e-3, 1e3);
        const Eigen::Vector3d xi = a * random_direction(eng);
        const double t = 10.0 * rng_uniform(eng);
        if (dispersion_roots(xi, kRef).degenerate) continue;
        const Mat5c G = semigroup_matrix(xi, t, kRef);
        const Mat5c M = assemble_symbol(xi, kRef).entries * cxd(t, 0.0);
        worst = std::max(worst, (G - matrix_exponential_oracle(M)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("semigroup property over random time splits") {
    std::mt19937_64 eng(19);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Vector3d xi = log_uniform(eng, 1e-2, 1e1) * random_direction(eng);
        const double s = 5.0 * rng_uniform(eng);
        const double t = 5.0 * rng_uniform(eng);
        const Mat5c lhs = semigroup_matrix(xi, s + t, kRef);
        const Mat5c rhs = semigroup_matrix(xi, s, kRef) * semigroup_matrix(xi, t, kRef);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("transverse action is the shear rate, not the compressional one") {
    // the transverse factor of the semigroup is e^{-mu |xi|^2 t}; the variant
    // with e^{-(2 mu + mu') |xi|^2 t} disagrees with the exponential oracle
    std::mt19937_64 eng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = log_uniform(eng, 1e-1, 1e1);
        const Eigen::Vector3d xi = a * random_direction(eng);
        const double t = 0.2 + 2.0 * rng_uniform(eng);
        const Eigen::Vector3d e = xi.normalized();

        Eigen::Vector3d v = random_direction(eng);
        v -= e * e.dot(v); // transverse direction
        REQUIRE(v.norm() > 1e-3);

        Eigen::Matrix<cxd, 5, 1> w = Eigen::Matrix<cxd, 5, 1>::Zero();
        for (int i = 0; i < 3; ++i) w(1 + i) = v[i];

        const Mat5c M = assemble_symbol(xi, kRef).entries * cxd(t, 0.0);
        const auto got = matrix_exponential_oracle(M) * w;

        const double shear = std::exp(-kRef.mu() * a * a * t);
        const double compressional = std::exp(-kRef.nu() * a * a * t);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(got(1 + i) - shear * v[i]) <= 1e-10 * std::max(1.0, shear));
        }
        CHECK(std::abs(shear - compressional) > 1e-6 * shear);
        CHECK(std::abs(got(0)) < 1e-12);
        CHECK(std::abs(got(4)) < 1e-12);
    }
}

TEST_CASE("matrix exponential oracle on closed-form cases") {
    CHECK((matrix_exponential_oracle(Mat5c::Zero()) - Mat5c::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);

    const Mat5c D = -Mat5c::Identity();
    const Mat5c E = matrix_exponential_oracle(D);
    CHECK((E - std::exp(-1.0) * Mat5c::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    Mat5c nil = Mat5c::Zero();
    nil(0, 3) = cxd(2.0, 1.0);
    nil(1, 4) = cxd(-0.5, 0.25);
    REQUIRE((nil * nil).cwiseAbs().maxCoeff() == 0.0);
    CHECK((matrix_exponential_oracle(nil) - (Mat5c::Identity() + nil)).cwiseAbs().maxCoeff() <
          1e-15);
}

TEST_CASE("integrator weights are consistent with the exponential") {
    std::mt19937_64 eng(29);
    Mat3c A;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            A(i, j) = cxd(2.0 * rng_uniform(eng) - 1.0, 2.0 * rng_uniform(eng) - 1.0);
    Mat3c E, F1, F2;
    expm_phi12(A, E, F1, F2);
    CHECK((E - expm(A)).cwiseAbs().maxCoeff() < 1e-13);
    // A phi1(A) = e^A - I and A^2 phi2(A) = e^A - I - A
    CHECK((A * F1 - (E - Mat3c::Identity())).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((A * A * F2 - (E - Mat3c::Identity() - A)).cwiseAbs().maxCoeff() < 1e-13);

    expm_phi12(Mat3c(Mat3c::Zero()), E, F1, F2);
    CHECK((F1 - Mat3c::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((F2 - 0.5 * Mat3c::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("low-frequency expansion fits") {
    const auto rep = asymptotic_fit(kRef, Regime::low, log_grid(1e-3, 1e-2, 32));
    REQUIRE(rep.items.size() == 3);
    CHECK(rep.items[0].fitted == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(rep.items[1].fitted == doctest::Approx(11.0 / 6.0).epsilon(1e-6));
    CHECK(rep.items[2].fitted == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-6));
    CHECK(rep.pass(0.01));

    // conduction-free case: the thermal lead is (0+4)/(R+Cv)
    const auto rep0 = asymptotic_fit(kRef0, Regime::low, log_grid(1e-3, 1e-2, 32));
    CHECK(rep0.items[0].fitted == doctest::Approx(-1.6).epsilon(1e-6));
    CHECK(rep0.pass(0.01));
}

TEST_CASE("high-frequency expansion fits") {
    const auto rep = asymptotic_fit(kRef, Regime::high, log_grid(1e2, 1e3, 32));
    CHECK(rep.items[0].fitted == doctest::Approx(-3.0 / 7.0).epsilon(1e-6));
    CHECK(rep.items[1].fitted == doctest::Approx(-7.0 / 3.0).epsilon(1e-6));
    CHECK(rep.items[2].fitted == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
    CHECK(rep.pass(0.01));
}

TEST_CASE("conduction-free high-frequency limits solve the reduced quadratic") {
    // with kappa = 0 the two O(1) branches satisfy
    // nu x^2 + (4 nu/Cv + R + R^2/Cv) x + 4 R/Cv = 0
    const auto rep = asymptotic_fit(kRef0, Regime::high, log_grid(1e2, 1e3, 32));
    REQUIRE(rep.items.size() == 3);
    CHECK(rep.items[1].has_target);
    CHECK(rep.items[1].fitted == doctest::Approx(-7.0 / 3.0).epsilon(1e-6));
    CHECK_FALSE(rep.items[0].has_target);
    CHECK_FALSE(rep.items[2].has_target);

    const double nu = kRef0.nu(), R = kRef0.R(), Cv = kRef0.Cv();
    const double b = 4.0 * nu / Cv + R + R * R / Cv;
    const double disc = std::sqrt(b * b - 16.0 * nu * R / Cv);
    const double root_hi = (-b + disc) / (2.0 * nu); // closer to zero: -8/21 here
    const double root_lo = (-b - disc) / (2.0 * nu); // -3 here
    CHECK(rep.items[0].fitted == doctest::Approx(root_hi).epsilon(1e-6));
    CHECK(rep.items[2].fitted == doctest::Approx(root_lo).epsilon(1e-6));
    CHECK(root_hi == doctest::Approx(-8.0 / 21.0).epsilon(1e-14));
    CHECK(root_lo == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("fit grids with the wrong power are rejected") {
    // feeding the high-frequency window to the low-frequency model trips the
    // power check rather than returning nonsense
    CHECK_THROWS_AS(asymptotic_fit(kRef, Regime::low, log_grid(1e2, 1e3, 16)), FitError);
}

TEST_CASE("spectral gap scan stays strictly negative and matches golden data") {
    const GapScan g1 = spectral_gap_scan(kRef, 1e-2, 1e2, 10000);
    CHECK(g1.max_re < 0.0);
    // golden: the least-damped branch at the annulus edge is the shear one
    CHECK(g1.max_re == doctest::Approx(-1e-4).epsilon(1e-9));
    CHECK(g1.argmax_xi == doctest::Approx(1e-2).epsilon(1e-9));
    REQUIRE(g1.flagged.size() == 2);
    CHECK(g1.flagged[0] == doctest::Approx(0.651900656114011).epsilon(1e-9));

    const GapScan g0 = spectral_gap_scan(kRef0, 1e-2, 1e2, 10000);
    CHECK(g0.max_re < 0.0);
    CHECK(g0.min_branch_gap == doctest::Approx(2.7257414239367783e-05).epsilon(1e-6));

    CHECK_THROWS_AS(spectral_gap_scan(kRef, 1.0, 0.5, 100), DomainError);
}

TEST_CASE("pointwise bound constants exist on both annuli") {
    std::vector<double> xi_all = log_grid(1e-3, 0.1, 12);
    for (double a : log_grid(10.0, 1e3, 10)) xi_all.push_back(a);
    std::vector<double> ts = {0.0};
    for (double t : log_grid(0.01, 50.0, 16)) ts.push_back(t);

    for (const ValidatedParams* p : {&kRef, &kRef0}) {
        const PointwiseBounds b = pointwise_bound_fit(*p, xi_all, ts, 0.1);
        CHECK(b.c_low > 0.0);
        CHECK(b.c_high > 0.0);
        CHECK(b.amp_low >= 1.0); // G(0) = I pins the amplitude at least to 1
        CHECK(b.amp_low <= b.amp_cap);
        CHECK(b.amp_high <= b.amp_cap);
    }
    CHECK_THROWS_AS(pointwise_bound_fit(kRef, {}, {1.0}, 0.1), DomainError);
}

TEST_CASE("radiative damping replaces conduction at high frequency") {
    // kappa = 0: the damping multiplier tends to the finite radiation limit
    CHECK(radiative_damping(1e8, kRef0) == doctest::Approx(4.0 / kRef0.Cv()).epsilon(1e-6));
    // kappa > 0: conduction dominates, growing like |xi|^2
    CHECK(radiative_damping(1e8, kRef) > 1e7);
    CHECK(radiative_damping(1.0, kRef) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("decay kernel constants at the reference parameters") {
    const DecayKernelConstants s = decay_kernel_constants(kRef);
    CHECK(s.sigma1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.sigma2 == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(s.sigma3 == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
}
