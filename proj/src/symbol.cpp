#include "rhd/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rhd/errors.hpp"
#include "rhd/expm.hpp"
#include "rhd/parallel.hpp"

namespace rhd {

namespace {
constexpr cxd kI{0.0, 1.0};

// Coalescence is judged by the relative gap: near xi = 0 all branches are
// O(|xi|^2)-close to zero in absolute terms yet cleanly separated, and the
// projector conditioning tracks |li - lj| / |li|, not |li - lj| itself.
double pair_scale(cxd a, cxd b) {
    return std::max(std::abs(a), std::abs(b));
}

// ---- compensated cubic evaluation -----------------------------------------
// The cubic's coefficients grow like |xi|^4 while one root stays O(1), so a
// plain Horner residual drowns in cancellation noise at high frequency.
// Double-double Horner keeps the residual meaningful at the 1e-10 scale.
struct dd {
    double hi = 0.0, lo = 0.0;
};

dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

dd dd_add(dd a, double b) {
    dd s = two_sum(a.hi, b);
    s.lo += a.lo;
    const dd t = two_sum(s.hi, s.lo);
    return {t.hi, t.lo};
}

dd dd_mul(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    const dd t = two_sum(p.hi, p.lo);
    return {t.hi, t.lo};
}

// g(x) for real x, compensated Horner
double eval_cubic_dd(const CubicCoeffs& g, double x) {
    dd acc{1.0, 0.0};
    acc = dd_add(dd_mul(acc, x), g.c2);
    acc = dd_add(dd_mul(acc, x), g.c1);
    acc = dd_add(dd_mul(acc, x), g.c0);
    return acc.hi + acc.lo;
}

// least squares y ~ p0 + p1 x
std::pair<double, double> lsq_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double p1 = (n * sxy - sx * sy) / det;
    const double p0 = (sy - p1 * sx) / n;
    return {p0, p1};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0.0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2) return 0.0;
    return lsq_line(lx, ly).second;
}
} // namespace

double radiative_damping(double a2, const ValidatedParams& p) {
    return (p.kappa() / p.Cv()) * a2 + 4.0 * a2 / (p.Cv() * (a2 + 1.0));
}

SymbolMatrix assemble_symbol(const Eigen::Vector3d& xi, const ValidatedParams& p) {
    SymbolMatrix s;
    s.xi = xi;
    s.entries.setZero();
    const double a2 = xi.squaredNorm();
    const double R = p.R();

    for (int j = 0; j < 3; ++j) {
        s.entries(0, 1 + j) = -kI * xi[j];                 // density row
        s.entries(1 + j, 0) = -kI * R * xi[j];             // pressure gradient
        s.entries(1 + j, 4) = -kI * R * xi[j];
        s.entries(4, 1 + j) = -kI * (R / p.Cv()) * xi[j];  // compression heating
        for (int k = 0; k < 3; ++k) {
            s.entries(1 + j, 1 + k) = -(p.mu() + p.mu_prime()) * xi[j] * xi[k];
        }
        s.entries(1 + j, 1 + j) -= p.mu() * a2;
    }
    s.entries(4, 4) = -radiative_damping(a2, p);
    return s;
}

Mat3c longitudinal_block(double xi_norm, const ValidatedParams& p) {
    const double a = xi_norm;
    const double h = radiative_damping(a * a, p);
    Mat3c M;
    M << 0.0, -kI * a, 0.0,
        -kI * p.R() * a, cxd(-p.nu() * a * a, 0.0), -kI * p.R() * a,
        0.0, -kI * (p.R() / p.Cv()) * a, cxd(-h, 0.0);
    return M;
}

CubicCoeffs characteristic_cubic(double a2, const ValidatedParams& p) {
    if (a2 < 0.0) throw DomainError("characteristic_cubic: negative |xi|^2");
    CubicCoeffs c;
    c.a2 = a2;
    c.h = radiative_damping(a2, p);
    const double R = p.R();
    c.c2 = c.h + p.nu() * a2;
    c.c1 = p.nu() * a2 * c.h + (R + R * R / p.Cv()) * a2;
    c.c0 = R * a2 * c.h;
    return c;
}

DispersionPoint dispersion_roots(double xi_norm, const ValidatedParams& p) {
    if (!(xi_norm > 0.0)) throw DomainError("dispersion_roots: |xi| must be positive");
    const CubicCoeffs g = characteristic_cubic(xi_norm * xi_norm, p);

    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 2) = -g.c0;
    companion(1, 2) = -g.c1;
    companion(2, 2) = -g.c2;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion, /*computeEigenvectors=*/false);
    std::array<cxd, 3> roots{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};

    // one Newton step on the cubic polishes the QR output; real roots use the
    // compensated evaluation so the residual check stays meaningful when the
    // coefficients dwarf the root
    for (cxd& lam : roots) {
        const bool treat_real = std::abs(lam.imag()) <=
                                1e-9 * std::max(1.0, std::abs(lam.real()));
        double residual;
        if (treat_real) {
            double x = lam.real();
            for (int it = 0; it < 2; ++it) {
                const double dg = g.deriv(cxd(x, 0.0)).real();
                if (std::abs(dg) < 1e-300) break;
                x -= eval_cubic_dd(g, x) / dg;
            }
            lam = cxd(x, 0.0);
            residual = std::abs(eval_cubic_dd(g, x));
        } else {
            const cxd dg = g.deriv(lam);
            if (std::abs(dg) > 1e-300) lam -= g.eval(lam) / dg;
            residual = std::abs(g.eval(lam));
        }
        // representability floor: even the correctly rounded root carries a
        // residual of about |g'| ulp(lambda)/2, which dominates the nominal
        // tolerance once the coefficients dwarf the root
        const double scale = std::max(1.0, std::abs(lam));
        const double floor_term =
            4.0 * std::abs(g.deriv(lam)) * std::abs(lam) * std::numeric_limits<double>::epsilon();
        if (residual > 1e-10 * scale * scale * scale + floor_term) {
            throw RootFailure("dispersion_roots: polished residual above tolerance");
        }
    }

    DispersionPoint d;
    d.xi_norm = xi_norm;
    d.lambda4 = -p.mu() * xi_norm * xi_norm;

    double max_im = 0.0;
    for (const cxd& lam : roots) max_im = std::max(max_im, std::abs(lam.imag()));
    const double im_tol = 1e-9 * std::max(1.0, std::abs(roots[0]) + std::abs(roots[1]) + std::abs(roots[2]));

    if (max_im > im_tol) {
        // one real root plus a conjugate pair
        int real_idx = 0;
        double best = std::abs(roots[0].imag());
        for (int i = 1; i < 3; ++i) {
            if (std::abs(roots[i].imag()) < best) {
                best = std::abs(roots[i].imag());
                real_idx = i;
            }
        }
        std::array<cxd, 2> pair;
        int k = 0;
        for (int i = 0; i < 3; ++i)
            if (i != real_idx) pair[k++] = roots[i];
        d.lambda1 = cxd(roots[real_idx].real(), 0.0);
        cxd lam2 = 0.5 * (pair[0] + std::conj(pair[1])); // symmetrize the pair
        if (lam2.imag() < 0.0) lam2 = std::conj(lam2);
        d.lambda2 = lam2;
        d.lambda3 = std::conj(lam2);
    } else {
        std::array<double, 3> re{roots[0].real(), roots[1].real(), roots[2].real()};
        std::sort(re.begin(), re.end()); // re[0] <= re[1] <= re[2]
        d.lambda1 = cxd(re[2], 0.0);
        d.lambda2 = cxd(re[0], 0.0);
        d.lambda3 = cxd(re[1], 0.0);
    }

    const auto lam = d.all();
    for (int i = 0; i < 4 && !d.degenerate; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(lam[i] - lam[j]) < kCoalescenceTol * pair_scale(lam[i], lam[j])) {
                d.degenerate = true;
                break;
            }
        }
    }
    return d;
}

DispersionPoint dispersion_roots(const Eigen::Vector3d& xi, const ValidatedParams& p) {
    return dispersion_roots(xi.norm(), p);
}

std::vector<DispersionPoint> dispersion_scan(const std::vector<double>& xi_norms,
                                             const ValidatedParams& p) {
    std::vector<DispersionPoint> out;
    out.reserve(xi_norms.size());
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (std::size_t i = 0; i < xi_norms.size(); ++i) {
        DispersionPoint d = dispersion_roots(xi_norms[i], p);
        if (i > 0) {
            const std::array<cxd, 3> cur{d.lambda1, d.lambda2, d.lambda3};
            const std::array<cxd, 3> prev{out.back().lambda1, out.back().lambda2,
                                          out.back().lambda3};
            int best_perm = 0;
            double best_cost = 1e300;
            for (int q = 0; q < 6; ++q) {
                double cost = 0.0;
                for (int j = 0; j < 3; ++j) cost += std::abs(cur[perms[q][j]] - prev[j]);
                // prefer keeping Im(lambda2) >= 0 on exact ties
                cost += (cur[perms[q][1]].imag() < -1e-300) ? 1e-12 : 0.0;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_perm = q;
                }
            }
            d.lambda1 = cur[perms[best_perm][0]];
            d.lambda2 = cur[perms[best_perm][1]];
            d.lambda3 = cur[perms[best_perm][2]];
        }
        out.push_back(d);
    }
    return out;
}

namespace {

// Right/left eigenvectors of the longitudinal block for eigenvalue lam,
// bilinearly normalized rank-one projector r l^T / (l . r).
Mat3c longitudinal_projector(double a, double h, const ValidatedParams& p, cxd lam) {
    const cxd hl = h + lam;
    Vec3c r, l;
    r << -kI * a / lam, cxd(1.0, 0.0), -kI * (p.R() / p.Cv()) * a / hl;
    l << -kI * p.R() * a / lam, cxd(1.0, 0.0), -kI * p.R() * a / hl;
    const cxd denom = l(0) * r(0) + l(1) * r(1) + l(2) * r(2);
    if (std::abs(denom) < 1e-14) {
        throw DegenerateSpectrum("longitudinal projector: defective eigenvalue");
    }
    Mat3c q;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q(i, j) = r(i) * l(j) / denom;
    return q;
}

Mat5c embed_longitudinal(const Mat3c& q, const Eigen::Vector3d& e) {
    Mat5c P = Mat5c::Zero();
    P(0, 0) = q(0, 0);
    P(0, 4) = q(0, 2);
    P(4, 0) = q(2, 0);
    P(4, 4) = q(2, 2);
    for (int j = 0; j < 3; ++j) {
        P(0, 1 + j) = q(0, 1) * e[j];
        P(4, 1 + j) = q(2, 1) * e[j];
        P(1 + j, 0) = q(1, 0) * e[j];
        P(1 + j, 4) = q(1, 2) * e[j];
        for (int k = 0; k < 3; ++k) P(1 + j, 1 + k) = q(1, 1) * e[j] * e[k];
    }
    return P;
}

} // namespace

LongitudinalEig longitudinal_eig(double xi_norm, const ValidatedParams& p) {
    const DispersionPoint d = dispersion_roots(xi_norm, p);
    LongitudinalEig e;
    e.lambda = {d.lambda1, d.lambda2, d.lambda3};
    e.degenerate = d.degenerate;
    if (e.degenerate) return e;
    const double h = radiative_damping(xi_norm * xi_norm, p);
    for (int i = 0; i < 3; ++i) {
        e.proj[i] = longitudinal_projector(xi_norm, h, p, e.lambda[i]);
    }
    return e;
}

ProjectorSet projector_set(const Eigen::Vector3d& xi, const ValidatedParams& p,
                           const DispersionPoint& roots) {
    if (roots.degenerate) {
        throw DegenerateSpectrum("projector_set: coalescent branches at |xi|=" +
                                 std::to_string(roots.xi_norm));
    }
    const double a = xi.norm();
    if (!(a > 0.0)) throw DomainError("projector_set: |xi| must be positive");
    const Eigen::Vector3d e = xi / a;
    const double h = radiative_damping(a * a, p);

    ProjectorSet ps;
    ps.P1 = embed_longitudinal(longitudinal_projector(a, h, p, roots.lambda1), e);
    ps.P2 = embed_longitudinal(longitudinal_projector(a, h, p, roots.lambda2), e);
    ps.P3 = embed_longitudinal(longitudinal_projector(a, h, p, roots.lambda3), e);
    ps.P4 = Mat5c::Zero();
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) ps.P4(1 + j, 1 + k) = -e[j] * e[k];
        ps.P4(1 + j, 1 + j) += 1.0;
    }
    ps.source = ProjectorSet::Source::explicit_formula;
    return ps;
}

Mat3c longitudinal_semigroup(double xi_norm, double t, const ValidatedParams& p) {
    if (t < 0.0) throw DomainError("longitudinal_semigroup: t must be >= 0");
    if (xi_norm == 0.0 || t == 0.0) return Mat3c::Identity();
    const LongitudinalEig e = longitudinal_eig(xi_norm, p);
    if (e.degenerate) {
        Mat3c M = longitudinal_block(xi_norm, p) * cxd(t, 0.0);
        return expm(M);
    }
    Mat3c G = Mat3c::Zero();
    for (int i = 0; i < 3; ++i) G += std::exp(e.lambda[i] * t) * e.proj[i];
    return G;
}

Mat5c semigroup_matrix(const Eigen::Vector3d& xi, double t, const ValidatedParams& p,
                       bool* used_fallback) {
    if (t < 0.0) throw DomainError("semigroup_matrix: t must be >= 0");
    if (used_fallback) *used_fallback = false;
    const double a = xi.norm();
    if (a == 0.0 || t == 0.0) return Mat5c::Identity();

    const DispersionPoint roots = dispersion_roots(a, p);
    if (roots.degenerate) {
        if (used_fallback) *used_fallback = true;
        Mat5c M = assemble_symbol(xi, p).entries * cxd(t, 0.0);
        return matrix_exponential_oracle(M);
    }
    const ProjectorSet ps = projector_set(xi, p, roots);
    Mat5c G = std::exp(roots.lambda1 * t) * ps.P1 + std::exp(roots.lambda2 * t) * ps.P2 +
              std::exp(roots.lambda3 * t) * ps.P3;
    G += cxd(std::exp(roots.lambda4 * t), 0.0) * ps.P4;
    return G;
}

Mat5c matrix_exponential_oracle(const Mat5c& M) {
    return expm(M);
}

// ---- asymptotic expansion fits ------------------------------------------

double ExpansionReport::max_rel_err() const {
    double m = 0.0;
    for (const auto& it : items)
        if (it.has_target) m = std::max(m, it.rel_err);
    return m;
}

bool ExpansionReport::pass(double tol) const {
    for (const auto& it : items)
        if (it.has_target && !(it.rel_err <= tol)) return false;
    return true;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    return g;
}

namespace {

// fit y ~ alpha + beta * reg and return alpha
double fit_limit(const std::vector<double>& reg, const std::vector<double>& y) {
    return lsq_line(reg, y).first;
}

FitItem make_item(std::string name, double fitted, double target, bool has_target,
                  double power, double expected_power) {
    FitItem it;
    it.name = std::move(name);
    it.fitted = fitted;
    it.target = target;
    it.has_target = has_target;
    it.rel_err = has_target ? std::abs(fitted - target) / std::abs(target) : 0.0;
    it.power = power;
    it.expected_power = expected_power;
    return it;
}

void check_power(const FitItem& it) {
    if (std::abs(it.power - it.expected_power) > 0.1) {
        throw FitError("asymptotic_fit: branch " + it.name + " has log-log slope " +
                       std::to_string(it.power) + ", expected " +
                       std::to_string(it.expected_power));
    }
}

} // namespace

ExpansionReport asymptotic_fit(const ValidatedParams& p, Regime regime,
                               const std::vector<double>& grid) {
    if (grid.size() < 4) throw FitError("asymptotic_fit: grid too small");
    const auto pts = dispersion_scan(grid, p);

    const std::size_t n = grid.size();
    std::vector<double> a(n), a2(n), inv_a2(n);
    std::vector<double> l1_re(n), l2_re(n), l2_im(n), l3_re(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = grid[i];
        a2[i] = grid[i] * grid[i];
        inv_a2[i] = 1.0 / a2[i];
        l1_re[i] = pts[i].lambda1.real();
        l2_re[i] = pts[i].lambda2.real();
        l2_im[i] = pts[i].lambda2.imag();
        l3_re[i] = pts[i].lambda3.real();
    }

    ExpansionReport rep;
    rep.regime = regime;
    rep.kappa_positive = !p.heat_conduction_free();

    if (regime == Regime::low) {
        const DecayKernelConstants sig = decay_kernel_constants(p);
        std::vector<double> y1(n), y2(n), y3(n), abs1(n), abs2(n), abs3(n);
        for (std::size_t i = 0; i < n; ++i) {
            y1[i] = l1_re[i] / a2[i];
            y2[i] = -l2_re[i] / a2[i];
            y3[i] = l2_im[i] / a[i];
            abs1[i] = std::abs(l1_re[i]);
            abs2[i] = std::abs(l2_re[i]);
            abs3[i] = std::abs(l2_im[i]);
        }
        auto it1 = make_item("lambda1_over_xi2", fit_limit(a2, y1), -sig.sigma1, true,
                             loglog_slope(a, abs1), 2.0);
        auto it2 = make_item("neg_re_lambda2_over_xi2", fit_limit(a2, y2), sig.sigma2, true,
                             loglog_slope(a, abs2), 2.0);
        auto it3 = make_item("im_lambda2_over_xi", fit_limit(a2, y3), sig.sigma3, true,
                             loglog_slope(a, abs3), 1.0);
        for (const auto& it : {it1, it2, it3}) check_power(it);
        rep.items = {it1, it2, it3};
        return rep;
    }

    // high-frequency regime
    std::vector<double> y2(n), abs1(n), abs2(n), abs3(n);
    for (std::size_t i = 0; i < n; ++i) {
        y2[i] = l2_re[i] / a2[i];
        abs1[i] = std::abs(l1_re[i]);
        abs2[i] = std::abs(l2_re[i]);
        abs3[i] = std::abs(l3_re[i]);
    }
    auto it1 = make_item("lambda1_limit", fit_limit(inv_a2, l1_re),
                         -p.R() / p.nu(), rep.kappa_positive, loglog_slope(a, abs1), 0.0);
    auto it2 = make_item("lambda2_over_xi2", fit_limit(inv_a2, y2), -p.nu(), true,
                         loglog_slope(a, abs2), 2.0);
    FitItem it3;
    if (rep.kappa_positive) {
        std::vector<double> y3(n);
        for (std::size_t i = 0; i < n; ++i) y3[i] = l3_re[i] / a2[i];
        it3 = make_item("lambda3_over_xi2", fit_limit(inv_a2, y3), -p.kappa() / p.Cv(), true,
                        loglog_slope(a, abs3), 2.0);
    } else {
        it3 = make_item("lambda3_limit", fit_limit(inv_a2, l3_re), 0.0, false,
                        loglog_slope(a, abs3), 0.0);
    }
    for (const auto& it : {it1, it2, it3}) check_power(it);
    rep.items = {it1, it2, it3};
    return rep;
}

GapScan spectral_gap_scan(const ValidatedParams& p, double eps, double K, int n_samples) {
    if (!(0.0 < eps && eps < K)) throw DomainError("spectral_gap_scan: need 0 < eps < K");
    const auto grid = log_grid(eps, K, n_samples);

    // sample in parallel, reduce serially in grid order
    std::vector<double> gaps(grid.size()), res(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const DispersionPoint d = dispersion_roots(grid[i], p);
        const auto lam = d.all();
        double re_max = -1e300, gap = 1e300;
        for (int a = 0; a < 4; ++a) {
            re_max = std::max(re_max, lam[a].real());
            for (int b = a + 1; b < 4; ++b) gap = std::min(gap, std::abs(lam[a] - lam[b]));
        }
        gaps[i] = gap;
        res[i] = re_max;
    });

    GapScan out;
    out.max_re = -1e300;
    out.min_branch_gap = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (res[i] > out.max_re) {
            out.max_re = res[i];
            out.argmax_xi = grid[i];
        }
        if (gaps[i] < out.min_branch_gap) {
            out.min_branch_gap = gaps[i];
            out.argmin_gap_xi = grid[i];
        }
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (gaps[i] < gaps[i - 1] && gaps[i] < gaps[i + 1] && gaps[i] < 0.1) {
            out.flagged.push_back(grid[i]);
        }
    }
    return out;
}

PointwiseBounds pointwise_bound_fit(const ValidatedParams& p,
                                    const std::vector<double>& xi_grid,
                                    const std::vector<double>& t_grid,
                                    double eps, double amp_cap) {
    if (xi_grid.empty() || t_grid.empty())
        throw DomainError("pointwise_bound_fit: empty grid");

    // max |G_ij| over entries at each (xi, t), split by annulus
    struct Sample {
        double s;   // |xi|^2 t (low) or t (high)
        double gmax;
    };
    std::vector<Sample> low, high;
    for (double a : xi_grid) {
        const Eigen::Vector3d xi(a, 0.0, 0.0);
        for (double t : t_grid) {
            const Mat5c G = semigroup_matrix(xi, t, p);
            const double gmax = G.cwiseAbs().maxCoeff();
            if (a <= eps) low.push_back({a * a * t, gmax});
            if (a >= eps) high.push_back({t, gmax});
        }
    }

    const auto best_rate = [amp_cap](const std::vector<Sample>& set, double& amp_out) {
        if (set.empty()) {
            amp_out = 0.0;
            return 0.0;
        }
        const auto cand = log_grid(1e-3, 10.0, 260);
        double best_c = 0.0, best_amp = 0.0;
        for (double c : cand) {
            double amp = 0.0;
            for (const auto& s : set) amp = std::max(amp, s.gmax * std::exp(c * s.s));
            if (amp <= amp_cap) {
                best_c = c;
                best_amp = amp;
            }
        }
        amp_out = best_amp;
        return best_c;
    };

    PointwiseBounds out;
    out.amp_cap = amp_cap;
    out.c_low = best_rate(low, out.amp_low);
    out.c_high = best_rate(high, out.amp_high);
    return out;
}

DecayKernelConstants decay_kernel_constants(const ValidatedParams& p) {
    DecayKernelConstants d;
    const double k4 = p.kappa() + 4.0;
    d.sigma1 = k4 / (p.R() + p.Cv());
    d.sigma2 = 0.5 * p.nu() + k4 * p.R() / (2.0 * p.Cv() * (p.Cv() + p.R()));
    d.sigma3 = std::sqrt(p.R() + p.R() * p.R() / p.Cv());
    return d;
}

} // namespace rhd
