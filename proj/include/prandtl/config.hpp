#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prandtl/errors.hpp"

namespace prandtl {

/// Flat configuration shared by every subcommand. Line-oriented
/// `key = value` files; '#' starts a comment; flags override file values;
/// unknown keys are hard errors.
struct RunConfig {
    std::string command;

    // grid
    int nx = 64;
    int ny = 257;
    double y_max = 40.0;
    double grading_c = 4.0;
    double x_period = 2.0 * M_PI;

    // initial data
    double a0_mean = 1.5;
    double a0_amp = 0.5;
    int a0_mode = 1;
    double sigma = 2.0;
    double delta = 0.05;
    double gamma = 1.0;
    int s = 8;
    bool monotone = false;
    double amplitude = 0.25;

    // solver
    double epsilon = 1e-3;
    int n_galerkin = 0;
    double dt = 5e-4;
    double t_end = 0.05;
    int sample_every = 5;
    bool dealias = true;

    // gevrey
    double tau0 = 1.0;
    double gevrey_m = 1.75;
    double p_corr = 10.0;
    int j_max = 32;

    // functionals
    double alpha = 0.1;
    double chi_r1 = 0.25;
    double chi_r2 = 0.5;
    double psi_edge = 3.5;
    double y_split = 3.0;
    double exclusion_band = 0.125;

    // linstab
    std::string profile = "nonmonotone";
    std::vector<double> kx_list = {8, 12, 16, 24, 32, 48, 64};
    double horizon = 6.0;
    int n_seeds = 2;
    double fit_window = 0.5;
    double lin_dt = 0.0; ///< 0 = per-kx CFL choice

    // monitor
    double tau_min = 0.0; ///< 0 = tau0 / 2
    double eta = 1e-10;

    // io
    std::string output_dir = "out";
    std::uint64_t seed = 12345;
    std::string format = "csv";
    std::string snapshot; ///< input snapshot for `diagnose`
    std::string config_path;

    double tau_floor() const { return tau_min > 0.0 ? tau_min : 0.5 * tau0; }

    void validate() const; ///< throws ConfigError naming the violated constraint
    std::string dump() const;
};

/// Parse a config file (every line `key = value`, blank lines and '#'
/// comments allowed). Errors carry the line number.
RunConfig parse_config_file(const std::string& path);

/// Apply `--key value` pairs on top of a config; `--config FILE` loads the
/// file first (flags still win).
RunConfig parse_cli(const std::vector<std::string>& args);

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,       // uncategorized error
    kExitConfig = 2,        // bad config / flags
    kExitStepRejected = 3,  // CFL refusal
    kExitBlowUp = 4,
    kExitInsufficient = 5,  // not enough data for a fit/verdict
    kExitHypothesis = 6,    // critical-curve structure violated
    kExitVerifyFailed = 7,  // a committed bound was exceeded
};

} // namespace prandtl
