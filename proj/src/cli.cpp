#include "rhd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "rhd/energy.hpp"
#include "rhd/errors.hpp"
#include "rhd/radial.hpp"
#include "rhd/report.hpp"
#include "rhd/solver.hpp"
#include "rhd/symbol.hpp"

namespace rhd {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands = {
    "dispersion", "semigroup-check", "linear-decay", "lower-bound",
    "nonlinear-run", "energy-audit", "all"};

json config_json(const ExperimentConfig& c) {
    json j;
    j["version"] = kVersion;
    j["command"] = c.command;
    j["out"] = c.out_dir;
    j["R"] = c.params.R;
    j["Cv"] = c.params.Cv;
    j["mu"] = c.params.mu;
    j["mu_prime"] = c.params.mu_prime;
    j["kappa"] = c.params.kappa;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["k"] = c.k_order;
    j["tol"] = c.tol;
    j["nodes"] = c.nodes;
    j["r_lo"] = c.r_lo;
    j["r_hi"] = c.r_hi;
    j["N"] = c.N;
    j["L"] = c.L;
    j["dt"] = c.dt;
    j["t_final"] = c.t_final;
    j["snap_interval"] = c.snap_interval;
    j["amplitude"] = c.amplitude;
    j["eps"] = c.eps_cut;
    j["K"] = c.K_cut;
    j["gap_samples"] = c.gap_samples;
    j["fit_t1"] = c.fit_t1;
    j["fit_t2"] = c.fit_t2;
    return j;
}

void save_json(const json& j, const std::string& path) {
    write_text_file(path, j.dump(2) + "\n");
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

json fit_items_json(const ExpansionReport& rep) {
    json out = json::array();
    for (const auto& it : rep.items) {
        json j;
        j["name"] = it.name;
        j["fitted"] = it.fitted;
        if (it.has_target) {
            j["target"] = it.target;
            j["rel_err"] = it.rel_err;
        }
        j["power"] = it.power;
        j["expected_power"] = it.expected_power;
        out.push_back(j);
    }
    return out;
}

// default "generic" radial data: three Gaussian widths, fixed amplitude mix
RadialProfile default_profile(const RadialGrid& grid) {
    const std::array<double, 4> mix{1.0, 0.5, 0.5, 0.5};
    RadialProfile prof = gaussian_profile(mix, 0.25, grid);
    for (double w : {1.0, 4.0}) {
        const RadialProfile extra = gaussian_profile(mix, w, grid);
        for (std::size_t i = 0; i < prof.size(); ++i) {
            prof.n[i] += extra.n[i];
            prof.u_long[i] += extra.u_long[i];
            prof.u_perp[i] += extra.u_perp[i];
            prof.m[i] += extra.m[i];
        }
        for (int c = 0; c < 4; ++c) prof.amp_at_zero[c] += extra.amp_at_zero[c];
    }
    return prof;
}

// ---- experiment: dispersion ------------------------------------------------

int run_dispersion(const ExperimentConfig& cfg) {
    const ValidatedParams p = validate_params(cfg.params);

    const auto low = asymptotic_fit(p, Regime::low, log_grid(1e-3, 1e-2, 32));
    const auto high = asymptotic_fit(p, Regime::high, log_grid(1e2, 1e3, 32));
    const auto gap = spectral_gap_scan(p, cfg.eps_cut, cfg.K_cut, cfg.gap_samples);

    std::vector<double> xi_grid = log_grid(1e-3, 1e3, 28);
    std::vector<double> t_grid = {0.0};
    for (double t : log_grid(0.01, 50.0, 20)) t_grid.push_back(t);
    const auto bounds = pointwise_bound_fit(p, xi_grid, t_grid, 0.1);

    const bool pass = low.pass(cfg.tol) && high.pass(cfg.tol) && gap.max_re < 0.0 &&
                      bounds.c_low > 0.0 && bounds.c_high > 0.0;

    json j;
    j["config"] = config_json(cfg);
    j["low_frequency"] = fit_items_json(low);
    j["high_frequency"] = fit_items_json(high);
    j["gap"] = {{"max_re", gap.max_re},
                {"argmax_xi", gap.argmax_xi},
                {"min_branch_gap", gap.min_branch_gap},
                {"argmin_gap_xi", gap.argmin_gap_xi},
                {"coalescence_candidates", gap.flagged}};
    j["pointwise_bounds"] = {{"c_low", bounds.c_low},
                             {"amp_low", bounds.amp_low},
                             {"c_high", bounds.c_high},
                             {"amp_high", bounds.amp_high},
                             {"amp_cap", bounds.amp_cap}};
    j["pass"] = pass;
    save_json(j, out_path(cfg, "dispersion.json"));
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " dispersion (max rel err "
              << format_double(std::max(low.max_rel_err(), high.max_rel_err()))
              << ", gap max Re " << format_double(gap.max_re) << ")\n";
    return pass ? exit_pass : exit_criterion_failure;
}

// ---- experiment: semigroup-check --------------------------------------------

int run_semigroup_check(const ExperimentConfig& cfg) {
    const ValidatedParams p = validate_params(cfg.params);
    std::mt19937_64 eng(cfg.seed);

    double max_orc_err = 0, max_complete = 0, max_idem = 0;
    int skipped = 0;
    CsvTable csv;
    csv.header = {"xi_norm", "t", "oracle_err", "completeness_err", "idempotency_err"};

    for (int s = 0; s < cfg.samples; ++s) {
        const double a = std::exp(std::log(1e-3) +
                                  (std::log(1e3) - std::log(1e-3)) * rng_uniform(eng));
        const double z = 2.0 * rng_uniform(eng) - 1.0;
        const double phi = 2.0 * M_PI * rng_uniform(eng);
        const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Eigen::Vector3d xi = a * Eigen::Vector3d(rxy * std::cos(phi),
                                                       rxy * std::sin(phi), z);
        const double t = 10.0 * rng_uniform(eng);

        const DispersionPoint roots = dispersion_roots(xi, p);
        if (roots.degenerate) {
            ++skipped;
            continue;
        }
        const ProjectorSet ps = projector_set(xi, p, roots);
        const Mat5c sum = ps.P1 + ps.P2 + ps.P3 + ps.P4;
        const double complete = (sum - Mat5c::Identity()).cwiseAbs().maxCoeff();

        double idem = 0.0;
        const std::array<const Mat5c*, 4> P{&ps.P1, &ps.P2, &ps.P3, &ps.P4};
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < 4; ++k) {
                Mat5c prod = (*P[i]) * (*P[k]);
                if (i == k) prod -= *P[i];
                idem = std::max(idem, prod.cwiseAbs().maxCoeff());
            }
        }

        const Mat5c G = semigroup_matrix(xi, t, p);
        const Mat5c M = assemble_symbol(xi, p).entries * cxd(t, 0.0);
        const double orc = (G - matrix_exponential_oracle(M)).cwiseAbs().maxCoeff();

        csv.rows.push_back({a, t, orc, complete, idem});
        max_orc_err = std::max(max_orc_err, orc);
        max_complete = std::max(max_complete, complete);
        max_idem = std::max(max_idem, idem);
    }

    const bool pass = max_orc_err < 1e-8 && max_complete < 1e-8 && max_idem < 1e-7;
    csv.save(out_path(cfg, "semigroup_samples.csv"));
    json j;
    j["config"] = config_json(cfg);
    j["max_oracle_err"] = max_orc_err;
    j["max_completeness_err"] = max_complete;
    j["max_idempotency_err"] = max_idem;
    j["skipped_degenerate"] = skipped;
    j["pass"] = pass;
    save_json(j, out_path(cfg, "semigroup_check.json"));
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " semigroup-check (max oracle err "
              << format_double(max_orc_err) << ")\n";
    return pass ? exit_pass : exit_criterion_failure;
}

// ---- experiment: linear-decay -----------------------------------------------

int run_linear_decay(const ExperimentConfig& cfg) {
    const ValidatedParams p = validate_params(cfg.params);
    const RadialGrid grid = RadialGrid::log_spaced(cfg.r_lo, cfg.r_hi, cfg.nodes);
    // single width: wide enough that the fit window is past the
    // mid-frequency transient for every order up to 2
    const RadialProfile prof = gaussian_profile({1.0, 0.5, 0.5, 0.5}, 1.0, grid);
    const auto times = log_grid(0.1, 2.0 * cfg.fit_t2, 64);

    std::vector<int> orders;
    if (cfg.k_order >= 0) {
        orders.push_back(cfg.k_order);
    } else {
        orders = {0, 1, 2};
    }

    bool pass = true;
    json curves = json::array();
    std::vector<PlotSeries> plot;
    for (int k : orders) {
        const DecayCurve curve = decay_curve(prof, k, times, p);
        const double target = -0.75 - 0.5 * k;
        const DecayFit fit = fit_decay_exponent(curve, cfg.fit_t1, cfg.fit_t2, target);
        const DecayFit early = fit_decay_exponent(curve, 1.0, 10.0, target);
        const bool ok = fit.pass(0.05);
        pass = pass && ok;

        CsvTable csv;
        csv.header = {"t", "norm"};
        for (std::size_t i = 0; i < curve.times.size(); ++i)
            csv.rows.push_back({curve.times[i], curve.norms[i]});
        csv.save(out_path(cfg, "decay_k" + std::to_string(k) + ".csv"));

        json jc;
        jc["k"] = k;
        jc["slope"] = fit.slope;
        jc["slope_early"] = early.slope;
        jc["target"] = fit.target;
        jc["rel_err"] = fit.rel_err;
        jc["pass"] = ok;
        curves.push_back(jc);

        PlotSeries s;
        s.label = "k=" + std::to_string(k);
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            s.x.push_back(1.0 + curve.times[i]);
            s.y.push_back(curve.norms[i]);
        }
        plot.push_back(std::move(s));
    }

    // vanishing-data variant: spectral energy density ~ r^3 at the origin,
    // the saturating class for the (1+t)^{-3/2} estimate
    {
        const RadialProfile vprof =
            gaussian_profile({1.0, 0.5, 0.5, 0.5}, 1.0, grid, /*power=*/1.5);
        const DecayCurve curve = decay_curve(vprof, 0, times, p);
        const DecayFit fit = fit_decay_exponent(curve, cfg.fit_t1, cfg.fit_t2, -1.5);
        const bool ok = fit.pass(0.05);
        pass = pass && ok;

        CsvTable csv;
        csv.header = {"t", "norm"};
        for (std::size_t i = 0; i < curve.times.size(); ++i)
            csv.rows.push_back({curve.times[i], curve.norms[i]});
        csv.save(out_path(cfg, "decay_variant.csv"));

        json jc;
        jc["k"] = 0;
        jc["variant"] = "vanishing-data";
        jc["slope"] = fit.slope;
        jc["target"] = fit.target;
        jc["rel_err"] = fit.rel_err;
        jc["pass"] = ok;
        curves.push_back(jc);

        PlotSeries s;
        s.label = "variant";
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            s.x.push_back(1.0 + curve.times[i]);
            s.y.push_back(curve.norms[i]);
        }
        plot.push_back(std::move(s));
    }

    write_text_file(out_path(cfg, "decay.svg"),
                    svg_loglog_plot("norm decay vs 1+t", plot));
    json j;
    j["config"] = config_json(cfg);
    j["curves"] = curves;
    j["pass"] = pass;
    save_json(j, out_path(cfg, "linear_decay.json"));
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " linear-decay\n";
    return pass ? exit_pass : exit_criterion_failure;
}

// ---- experiment: lower-bound ------------------------------------------------

int run_lower_bound(const ExperimentConfig& cfg) {
    const ValidatedParams p = validate_params(cfg.params);
    const RadialGrid grid = RadialGrid::log_spaced(cfg.r_lo, cfg.r_hi, cfg.nodes);
    // density-dominant data per the lower-bound hypothesis
    const RadialProfile prof = gaussian_profile({1.0, 0.05, 0.05, 0.05}, 1.0, grid);
    const auto times = log_grid(1.0, cfg.fit_t2, 48);

    const LowerBoundReport rep = lower_bound_scan(prof, times, p, cfg.eps_cut, cfg.K_cut);

    // stability of the floor under doubled quadrature resolution
    const RadialGrid grid2 = RadialGrid::log_spaced(cfg.r_lo, cfg.r_hi, 2 * cfg.nodes - 1);
    const RadialProfile prof2 = gaussian_profile({1.0, 0.05, 0.05, 0.05}, 1.0, grid2);
    const LowerBoundReport rep2 = lower_bound_scan(prof2, times, p, cfg.eps_cut, cfg.K_cut);
    const double floor_shift =
        std::abs(rep2.ratio_floor - rep.ratio_floor) / std::max(1e-300, rep.ratio_floor);

    const MixThreshold mix = lower_bound_mix_threshold(1.0, times, p, grid);

    const bool pass = rep.pass && floor_shift <= 0.10;

    CsvTable csv;
    csv.header = {"t", "ratio", "F", "T1", "T2", "T3", "T4"};
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        csv.rows.push_back({rep.times[i], rep.ratio_series[i], rep.F_values[i],
                            rep.T_terms[i][0], rep.T_terms[i][1], rep.T_terms[i][2],
                            rep.T_terms[i][3]});
    }
    csv.save(out_path(cfg, "lower_bound.csv"));

    std::vector<PlotSeries> plot(2);
    plot[0].label = "ratio";
    plot[1].label = "F";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        plot[0].x.push_back(1.0 + rep.times[i]);
        plot[0].y.push_back(rep.ratio_series[i]);
        plot[1].x.push_back(1.0 + rep.times[i]);
        plot[1].y.push_back(rep.F_values[i]);
    }
    write_text_file(out_path(cfg, "lower_bound.svg"),
                    svg_loglog_plot("lower-bound scan", plot));

    json j;
    j["config"] = config_json(cfg);
    j["sigma1"] = rep.sigma1;
    j["sigma2"] = rep.sigma2;
    j["sigma3"] = rep.sigma3;
    j["ratio_floor"] = rep.ratio_floor;
    j["F_floor"] = rep.F_floor;
    j["floor_shift_on_refinement"] = floor_shift;
    j["mix_threshold"] = {{"s_star", mix.s_star},
                          {"ratio_surrogate", mix.ratio_surrogate},
                          {"unbounded", mix.unbounded}};
    j["pass"] = pass;
    save_json(j, out_path(cfg, "lower_bound.json"));
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " lower-bound (ratio floor "
              << format_double(rep.ratio_floor) << ", F floor "
              << format_double(rep.F_floor) << ")\n";
    return pass ? exit_pass : exit_criterion_failure;
}

// ---- experiment: nonlinear-run ----------------------------------------------

int run_nonlinear(const ExperimentConfig& cfg) {
    SolverConfig sc;
    sc.grid.N = cfg.N;
    sc.grid.L = cfg.L;
    sc.params = cfg.params;
    sc.dt = cfg.dt;
    sc.t_final = cfg.t_final;
    sc.snap_interval = cfg.snap_interval;
    sc.amplitude = cfg.amplitude;
    sc.seed = cfg.seed;
    sc.store_snapshots = false;

    const ValidatedParams p = validate_params(cfg.params);
    const SolverContext ctx(sc.grid, p, sc.dt);

    int snap_count = 0;
    const double file_interval = sc.t_final / 2.0;
    double next_file = 0.0;
    const SnapshotCallback cb = [&](double t, const SpectralField& f) {
        if (t + 1e-12 < next_file) return;
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%04d.bin", snap_count++);
        write_snapshot(out_path(cfg, name), f, ctx, /*include_q=*/true);
        next_file += file_interval;
    };

    const Trajectory traj = run(sc, cb);

    CsvTable csv;
    csv.header = {"t", "max_abs_n", "max_abs_m", "min_one_plus_n", "max_abs_u",
                  "advective_cfl", "aliasing_fraction"};
    double worst_n = 0, worst_m = 0, worst_alias = 0;
    for (const StepDiag& d : traj.diags) {
        csv.rows.push_back({d.t, d.max_abs_n, d.max_abs_m, d.min_one_plus_n, d.max_abs_u,
                            d.advective_cfl, d.aliasing_fraction});
        worst_n = std::max(worst_n, d.max_abs_n);
        worst_m = std::max(worst_m, d.max_abs_m);
        worst_alias = std::max(worst_alias, d.aliasing_fraction);
    }
    csv.save(out_path(cfg, "nonlinear_diag.csv"));

    json j;
    j["config"] = config_json(cfg);
    j["completed"] = true;
    j["dt_used"] = traj.dt_used;
    j["dt_halvings"] = traj.dt_halvings;
    j["max_abs_n"] = worst_n;
    j["max_abs_m"] = worst_m;
    j["max_aliasing_fraction"] = worst_alias;
    j["snapshots_written"] = snap_count;
    j["pass"] = true;
    save_json(j, out_path(cfg, "nonlinear_run.json"));
    std::cout << "[PASS] nonlinear-run (max |n| " << format_double(worst_n)
              << ", max |m| " << format_double(worst_m) << ")\n";
    return exit_pass;
}

// ---- experiment: energy-audit -----------------------------------------------

int run_energy_audit(const ExperimentConfig& cfg) {
    const ValidatedParams p = validate_params(cfg.params);

    SolverConfig sc;
    sc.grid.N = 16;
    sc.grid.L = cfg.L;
    sc.params = cfg.params;
    sc.dt = cfg.dt;
    sc.t_final = std::min(cfg.t_final, 10.0);
    sc.snap_interval = 0.05;
    sc.amplitude = cfg.amplitude;
    sc.seed = cfg.seed;

    const SolverContext ctx(sc.grid, p, sc.dt);

    SolverConfig lin = sc;
    lin.linear_only = true;
    const EnergyReport lin_rep = audit_apriori(run(lin), ctx);
    const EnergyReport nl_rep = audit_apriori(run(sc), ctx);

    // bootstrap on linear decay curves
    const RadialGrid grid = RadialGrid::log_spaced(cfg.r_lo, cfg.r_hi, 1025);
    const RadialProfile prof = default_profile(grid);
    const auto times = log_grid(0.1, cfg.fit_t2, 48);
    const auto F = radial_lyapunov_series(prof, times, p, 2, 0.05);
    const FunctionalSeries G = bootstrap_G(times, F, 2);

    // artificially slowed curves diverge
    std::vector<std::vector<double>> slow(3, std::vector<double>(times.size()));
    for (std::size_t t = 0; t < times.size(); ++t) {
        for (int i = 0; i <= 2; ++i) slow[i][t] = 1.0 / (1.0 + times[t]);
    }
    const FunctionalSeries G_slow = bootstrap_G(times, slow, 2);

    const bool pass = lin_rep.lyapunov_decreasing && nl_rep.margins_pass(0.1) &&
                      G.bounded && !G_slow.bounded;

    CsvTable fk;
    fk.header = {"t", "F0", "F1", "F2"};
    for (std::size_t t = 0; t < times.size(); ++t)
        fk.rows.push_back({times[t], F[0][t], F[1][t], F[2][t]});
    fk.save(out_path(cfg, "fk_series.csv"));

    CsvTable gk;
    gk.header = {"t", "G2", "G2_slow"};
    for (std::size_t t = 0; t < times.size(); ++t)
        gk.rows.push_back({times[t], G.G[t], G_slow.G[t]});
    gk.save(out_path(cfg, "gk_series.csv"));

    CsvTable margins;
    margins.header = {"t", "lyapunov", "diss_raw", "diss_qsub", "margin_linear",
                      "margin_nonlinear"};
    for (std::size_t i = 1; i + 1 < nl_rep.times.size(); ++i) {
        margins.rows.push_back({nl_rep.times[i], nl_rep.lyapunov[i], nl_rep.diss_raw[i],
                                nl_rep.diss_qsub[i], lin_rep.margins[i - 1],
                                nl_rep.margins[i - 1]});
    }
    margins.save(out_path(cfg, "energy_margins.csv"));

    json j;
    j["config"] = config_json(cfg);
    j["linear_lyapunov_decreasing"] = lin_rep.lyapunov_decreasing;
    j["linear_worst_margin_ratio"] = lin_rep.worst_margin_ratio;
    j["nonlinear_worst_margin_ratio"] = nl_rep.worst_margin_ratio;
    j["nonlinear_margins_pass"] = nl_rep.margins_pass(0.1);
    j["snapshot_times"] = nl_rep.times;
    j["linear_margins"] = lin_rep.margins;
    j["nonlinear_margins"] = nl_rep.margins;
    j["nonlinear_dissipation"] = nl_rep.diss_raw;
    j["nonlinear_dissipation_flux_substituted"] = nl_rep.diss_qsub;
    j["bootstrap_bounded"] = G.bounded;
    j["bootstrap_growth_ratio"] = G.growth_ratio;
    j["slowed_bootstrap_bounded"] = G_slow.bounded;
    j["pass"] = pass;
    save_json(j, out_path(cfg, "energy_audit.json"));
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " energy-audit (worst nonlinear margin ratio "
              << format_double(nl_rep.worst_margin_ratio) << ")\n";
    return pass ? exit_pass : exit_criterion_failure;
}

} // namespace

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file not found: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        const auto bad_value = [&]() {
            return ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
        };
        const auto as_double = [&]() {
            try {
                std::size_t used = 0;
                const double v = std::stod(val, &used);
                if (used != val.size()) throw bad_value();
                return v;
            } catch (const ConfigError&) {
                throw;
            } catch (...) {
                throw bad_value();
            }
        };
        const auto as_int = [&]() {
            const double v = as_double();
            if (v != std::floor(v)) throw bad_value();
            return static_cast<long long>(v);
        };

        if (key == "command") cfg.command = val;
        else if (key == "out") cfg.out_dir = val;
        else if (key == "R") cfg.params.R = as_double();
        else if (key == "Cv") cfg.params.Cv = as_double();
        else if (key == "mu") cfg.params.mu = as_double();
        else if (key == "mu_prime") cfg.params.mu_prime = as_double();
        else if (key == "kappa") cfg.params.kappa = as_double();
        else if (key == "seed") cfg.seed = static_cast<unsigned long long>(as_int());
        else if (key == "samples") cfg.samples = static_cast<int>(as_int());
        else if (key == "k") cfg.k_order = static_cast<int>(as_int());
        else if (key == "tol") cfg.tol = as_double();
        else if (key == "nodes") cfg.nodes = static_cast<int>(as_int());
        else if (key == "r_lo") cfg.r_lo = as_double();
        else if (key == "r_hi") cfg.r_hi = as_double();
        else if (key == "N") cfg.N = static_cast<int>(as_int());
        else if (key == "L") cfg.L = as_double();
        else if (key == "dt") cfg.dt = as_double();
        else if (key == "t_final") cfg.t_final = as_double();
        else if (key == "snap_interval") cfg.snap_interval = as_double();
        else if (key == "amplitude") cfg.amplitude = as_double();
        else if (key == "eps") cfg.eps_cut = as_double();
        else if (key == "K") cfg.K_cut = as_double();
        else if (key == "gap_samples") cfg.gap_samples = static_cast<int>(as_int());
        else if (key == "fit_t1") cfg.fit_t1 = as_double();
        else if (key == "fit_t2") cfg.fit_t2 = as_double();
        else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"radiative hydrodynamics numerical laboratory"};
    app.allow_extras(false);

    std::string command, config_path, out_dir;
    double kappa = 0, tol = 0;
    unsigned long long seed = 0;
    int samples = 0, k_order = 0;

    app.add_option("command", command, "experiment suite")->required();
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--kappa", kappa, "heat conductivity");
    app.add_option("--seed", seed, "seed for randomized sweeps");
    app.add_option("--samples", samples, "sample count");
    app.add_option("--k", k_order, "derivative order");
    app.add_option("--tol", tol, "fit tolerance");

    std::vector<const char*> argv;
    static const std::string prog = "rhd";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    ExperimentConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    cfg.command = command;
    if (app.count("--out")) cfg.out_dir = out_dir;
    if (app.count("--kappa")) cfg.params.kappa = kappa;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--samples")) cfg.samples = samples;
    if (app.count("--k")) cfg.k_order = k_order;
    if (app.count("--tol")) cfg.tol = tol;

    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
        throw ConfigError("unknown command: " + cfg.command);
    }
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    try {
        validate_params(cfg.params); // surface bad physics at parse time
    } catch (const ParamError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

int dispatch(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    int rc = exit_pass;
    const auto merge = [&rc](int r) { rc = std::max(rc, r); };

    if (cfg.command == "dispersion") merge(run_dispersion(cfg));
    else if (cfg.command == "semigroup-check") merge(run_semigroup_check(cfg));
    else if (cfg.command == "linear-decay") merge(run_linear_decay(cfg));
    else if (cfg.command == "lower-bound") merge(run_lower_bound(cfg));
    else if (cfg.command == "nonlinear-run") merge(run_nonlinear(cfg));
    else if (cfg.command == "energy-audit") merge(run_energy_audit(cfg));
    else if (cfg.command == "all") {
        merge(run_dispersion(cfg));
        merge(run_semigroup_check(cfg));
        merge(run_linear_decay(cfg));
        merge(run_lower_bound(cfg));
        merge(run_nonlinear(cfg));
        merge(run_energy_audit(cfg));
    } else {
        throw ConfigError("unknown command: " + cfg.command);
    }

    // wall-clock info lives outside the deterministic reports
    const auto t1 = std::chrono::steady_clock::now();
    const auto now = std::chrono::system_clock::now();
    const std::time_t stamp = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&stamp));
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    write_text_file(out_path(cfg, "run_meta.txt"),
                    std::string("timestamp: ") + buf + "\nelapsed_seconds: " +
                        format_double(secs) + "\n");
    return rc;
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const ExperimentConfig cfg = parse_config(args);
        return dispatch(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ParamError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_failure;
    }
}

} // namespace rhd
