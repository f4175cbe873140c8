#pragma once

#include <string>
#include <vector>

#include "rhd/params.hpp"

namespace rhd {

// Exit codes of the command-line driver.
enum ExitCode : int {
    exit_pass = 0,
    exit_criterion_failure = 1,
    exit_config_error = 2,
    exit_numerical_failure = 3,
};

struct ExperimentConfig {
    std::string command;
    std::string out_dir = "out";
    FluidParams params;

    unsigned long long seed = 7;
    int samples = 100;
    int k_order = -1;       // < 0: run the default order set
    double tol = 0.01;

    // radial frequency grid
    int nodes = 2049;
    double r_lo = 1e-4;
    double r_hi = 1e3;

    // periodic box
    int N = 32;
    double L = 16.0 * 3.14159265358979323846;
    double dt = 1e-2;
    double t_final = 50.0;
    double snap_interval = 0.1;
    double amplitude = 1e-2;

    // frequency annulus cuts
    double eps_cut = 1e-2;
    double K_cut = 1e2;
    int gap_samples = 10000;

    // decay fit window
    double fit_t1 = 10.0;
    double fit_t2 = 1000.0;
};

// Flat key=value file; '#' starts a comment. Unknown keys are rejected with
// the key name and line number.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// Full command line: subcommand as first positional, flags override file
// values. Throws ConfigError on malformed input.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// Runs the configured experiment suite and writes its artifacts under
// cfg.out_dir. Returns exit_pass when every configured criterion holds.
int dispatch(const ExperimentConfig& cfg);

// parse + dispatch with the documented exit codes.
int cli_main(int argc, const char* const* argv);

} // namespace rhd
