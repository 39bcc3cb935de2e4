#include "prandtl/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <map>
#include <thread>

#include <json.hpp>

#include "prandtl/io.hpp"
#include "prandtl/linstab.hpp"
#include "prandtl/monitor.hpp"
#include "prandtl/verification.hpp"

namespace prandtl {

namespace {

using nlohmann::json;

int worker_count(size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("PRANDTL_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<size_t>(n, jobs));
}

std::shared_ptr<const SpectralGrid> make_grid(const RunConfig& cfg) {
    return std::make_shared<const SpectralGrid>(cfg.nx, cfg.ny, cfg.y_max, cfg.grading_c,
                                                cfg.x_period);
}

InitialDataSpec data_spec(const RunConfig& cfg) {
    InitialDataSpec sp;
    sp.a0_mean = cfg.a0_mean;
    sp.a0_amp = cfg.a0_amp;
    sp.a0_mode = cfg.a0_mode;
    sp.sigma = cfg.sigma;
    sp.delta = cfg.delta;
    sp.gamma = cfg.gamma;
    sp.s = cfg.s;
    sp.monotone = cfg.monotone;
    sp.amplitude = cfg.amplitude;
    sp.y_split = cfg.y_split;
    return sp;
}

SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.n_galerkin = cfg.n_galerkin;
    sc.dt = cfg.dt;
    sc.t_end = cfg.t_end;
    sc.sample_every = cfg.sample_every;
    sc.dealias = cfg.dealias;
    return sc;
}

Cutoffs cutoffs(const RunConfig& cfg) {
    Cutoffs c;
    c.chi_r1 = cfg.chi_r1;
    c.chi_r2 = cfg.chi_r2;
    c.psi_on = cfg.psi_edge;
    c.psi_off = 2.0 * cfg.psi_edge - cfg.y_split;
    return c;
}

void write_summary(const RunConfig& cfg, const json& j) {
    atomic_write_text(cfg.output_dir + "/summary.json", j.dump(2) + "\n");
}

int cmd_simulate(const RunConfig& cfg) {
    auto grid = make_grid(cfg);
    const GeneratedData data = make_initial_data(grid, data_spec(cfg));

    TauSchedule sched{cfg.tau0, 0.0, cfg.tau_floor()};
    GevreyWeight w{cfg.tau0, cfg.gevrey_m, cfg.p_corr};
    EnergyOptions opt{cfg.alpha, cfg.gamma, cfg.s, cfg.j_max};
    HypothesisParams hypo{cfg.delta, cfg.sigma, cfg.y_split};

    EnergyObserver observer(cutoffs(cfg), w, opt, hypo, sched);
    SolverConfig sc = solver_config(cfg);
    ImexSolver solver(grid, sc);

    save_snapshot(cfg.output_dir + "/snapshots/initial.snap", data.state);
    const RunSummary run = solver.run(data.state, {std::ref(observer)});
    save_snapshot(cfg.output_dir + "/snapshots/final.snap", run.final_state);

    const std::vector<std::string> header = {
        "t",    "tau",  "E_omega", "E_dot_omega", "E_h",          "E_g1",
        "E_g2", "calE", "dtau_calE", "D_dot_omega", "D_h",        "D_g1",
        "D_g2", "lower_margin", "upper_margin_max"};
    std::vector<std::vector<double>> rows;
    bool margins_ok = true;
    for (const auto& s : observer.samples()) {
        const EnergyReport& r = s.report;
        rows.push_back({r.t, r.tau, r.E_omega, r.E_dot_omega, r.E_h, r.E_g1, r.E_g2,
                        r.calE_alpha, r.dtau_calE, r.D_dot_omega, r.D_h, r.D_g1, r.D_g2,
                        r.lower_margin, r.upper_margin_min});
        if (r.lower_margin <= 0.0 || r.upper_margin_min <= 0.0) margins_ok = false;
    }
    write_csv(cfg.output_dir + "/run.csv", header, rows);

    const DecayVerdict verdict = decay_trace(observer.samples(), sched, cfg.alpha, w);
    json j;
    j["minimal_C"] = verdict.minimal_C;
    j["decay_ok"] = verdict.decay_ok;
    j["margins_ok"] = margins_ok;
    j["steps"] = run.steps;
    j["samples"] = run.samples;
    write_summary(cfg, j);

    std::cout << "simulate: " << run.steps << " steps, minimal C = " << verdict.minimal_C
              << ", decay " << (verdict.decay_ok ? "ok" : "FAILED") << ", margins "
              << (margins_ok ? "ok" : "FAILED") << "\n";
    return verdict.decay_ok && margins_ok ? kExitOk : kExitVerifyFailed;
}

int cmd_linstab(const RunConfig& cfg) {
    auto grid = make_grid(cfg);
    const ShearProfile profile =
        cfg.profile == "monotone" ? make_monotone_profile(*grid) : make_nonmonotone_profile(*grid);

    const double u_max = profile.Us.abs().maxCoeff();
    std::vector<double> rates(cfg.kx_list.size());
    std::vector<double> r2s(cfg.kx_list.size());

    const int workers = worker_count(cfg.kx_list.size());
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    auto body = [&]() {
        for (size_t i = next.fetch_add(1); i < cfg.kx_list.size(); i = next.fetch_add(1)) {
            const double kx = cfg.kx_list[i];
            const double dt =
                cfg.lin_dt > 0.0 ? cfg.lin_dt : std::min(2e-3, 0.3 / (u_max * kx));
            const GrowthResult res = growth_rate(grid, profile, kx, cfg.horizon, dt,
                                                 cfg.n_seeds, cfg.seed, cfg.fit_window);
            rates[i] = res.conclusive ? res.rate : std::numeric_limits<double>::quiet_NaN();
            r2s[i] = res.r2;
        }
    };
    if (workers <= 1) {
        body();
    } else {
        for (int t = 0; t < workers; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }

    std::vector<std::vector<double>> rows;
    std::map<double, double> usable;
    for (size_t i = 0; i < cfg.kx_list.size(); ++i) {
        rows.push_back({cfg.kx_list[i], rates[i], r2s[i]});
        if (std::isfinite(rates[i])) usable[cfg.kx_list[i]] = rates[i];
        std::cout << "kx = " << cfg.kx_list[i] << ": rate = " << rates[i]
                  << " (r2 = " << r2s[i] << ")\n";
    }
    write_csv(cfg.output_dir + "/rates.csv", {"kx", "rate", "r2"}, rows);

    const ExponentFit fit = fit_growth_exponent(usable); // throws InsufficientData
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["used"] = fit.used;
    j["profile"] = cfg.profile;
    write_summary(cfg, j);
    std::cout << "exponent fit: slope = " << fit.slope << ", r2 = " << fit.r2 << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    auto grid = make_grid(cfg);
    const VerifySummary summary = run_verify_suite(grid, cfg.seed);
    json items = json::array();
    for (const auto& item : summary.items) {
        std::cout << (item.pass ? "[PASS] " : "[FAIL] ") << item.name
                  << ": measured = " << item.measured << ", committed = " << item.committed
                  << "\n";
        items.push_back({{"name", item.name},
                         {"measured", item.measured},
                         {"committed", item.committed},
                         {"pass", item.pass}});
    }
    json j;
    j["items"] = items;
    j["all_pass"] = summary.all_pass();
    write_summary(cfg, j);
    return summary.all_pass() ? kExitOk : kExitVerifyFailed;
}

int cmd_diagnose(const RunConfig& cfg) {
    if (cfg.snapshot.empty())
        throw ConfigError("diagnose requires --snapshot FILE");
    const SnapshotHeader head = peek_snapshot(cfg.snapshot);
    auto grid = std::make_shared<const SpectralGrid>(head.nx, head.ny, head.y_max,
                                                     cfg.grading_c, cfg.x_period);
    const State s = load_snapshot(cfg.snapshot, grid);

    GevreyWeight w{cfg.tau0, cfg.gevrey_m, cfg.p_corr};
    EnergyOptions opt{cfg.alpha, cfg.gamma, cfg.s, cfg.j_max};
    HypothesisParams hypo{cfg.delta, cfg.sigma, cfg.y_split};
    const CriticalCurve curve = find_critical_curve(*grid, s.omega);
    EnergyEvaluation ev = energies(s, curve, cutoffs(cfg), w, opt, hypo);
    const BoundMargins m = bound_margins(s, cfg.delta, cfg.sigma, cfg.y_split);
    ev.report.lower_margin = m.lower;
    ev.report.upper_margin_min = m.upper_min;

    const EnergyReport& r = ev.report;
    json j;
    j["t"] = r.t;
    j["tau"] = r.tau;
    j["E_omega"] = r.E_omega;
    j["E_dot_omega"] = r.E_dot_omega;
    j["E_h"] = r.E_h;
    j["E_g1"] = r.E_g1;
    j["E_g2"] = r.E_g2;
    j["calE"] = r.calE_alpha;
    j["dtau_calE"] = r.dtau_calE;
    j["D_dot_omega"] = r.D_dot_omega;
    j["D_h"] = r.D_h;
    j["D_g1"] = r.D_g1;
    j["D_g2"] = r.D_g2;
    j["lower_margin"] = r.lower_margin;
    j["upper_margin_min"] = r.upper_margin_min;
    j["curve_valid"] = curve.valid;
    write_summary(cfg, j);
    std::cout << "diagnose: t = " << r.t << ", E_omega = " << r.E_omega
              << ", calE = " << r.calE_alpha << "\n";
    return kExitOk;
}

int cmd_divergence(const RunConfig& cfg) {
    auto grid = make_grid(cfg);
    const DivergenceResult res =
        two_run_divergence(grid, data_spec(cfg), cfg.eta, solver_config(cfg));

    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < res.times.size(); ++k)
        rows.push_back({res.times[k], res.gaps[k]});
    write_csv(cfg.output_dir + "/divergence.csv", {"t", "gap"}, rows);

    json j;
    j["divergence_slope"] = res.slope;
    j["bound_ok"] = res.bound_ok;
    j["eta"] = cfg.eta;
    write_summary(cfg, j);
    std::cout << "divergence: slope = " << res.slope << ", bound "
              << (res.bound_ok ? "ok" : "FAILED") << "\n";
    return res.bound_ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "linstab") return cmd_linstab(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "diagnose") return cmd_diagnose(cfg);
    if (cfg.command == "divergence") return cmd_divergence(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const RunConfig cfg = parse_cli(args);
        return dispatch(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const StepRejected& e) {
        std::cerr << "step rejected: " << e.what() << "\n";
        return kExitStepRejected;
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowUp;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const HypothesisViolation& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace prandtl
