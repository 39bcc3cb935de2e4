#include "prandtl/monitor.hpp"

#include <cmath>

#include "prandtl/calibration.hpp"

namespace prandtl {

void TauSchedule::validate() const {
    if (tau0 <= 0.0) throw ContractViolation("TauSchedule: tau0 must be > 0");
    if (shrink_rate < 0.0) throw ContractViolation("TauSchedule: C must be >= 0");
    if (tau_min <= 0.0 || tau_min > tau0)
        throw ContractViolation("TauSchedule: need 0 < tau_min <= tau0");
}

BoundMargins bound_margins(const State& s, double delta, double sigma, double y_split) {
    const SpectralGrid& g = *s.grid;
    if (!s.omega.isFinite().all())
        throw ContractViolation("bound_margins: state not finite");

    BoundMargins m;
    const Profile& y = g.y_nodes();

    double lower = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny(); ++j) {
        if (y[j] <= y_split) continue;
        const double w = std::pow(1.0 + y[j], sigma);
        for (int i = 0; i < g.nx(); ++i)
            lower = std::min(lower, w * std::abs(s.omega(i, j)) - delta);
    }
    m.lower = lower;

    struct Entry { int ax, ay; };
    const Entry derivs[6] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    m.upper_min = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 6; ++d) {
        Field f = s.omega;
        if (derivs[d].ax > 0) f = dx(g, f, derivs[d].ax);
        for (int r = 0; r < derivs[d].ay; ++r) f = dy(g, f, 1);
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < g.ny(); ++j) {
            if (y[j] <= y_split) continue;
            const double cap = 1.0 / (delta * std::pow(1.0 + y[j], sigma + derivs[d].ay));
            for (int i = 0; i < g.nx(); ++i)
                worst = std::min(worst, cap - std::abs(f(i, j)));
        }
        m.upper[d] = worst;
        m.upper_min = std::min(m.upper_min, worst);
    }
    return m;
}

// ---------------------------------------------------------------------------

EnergyObserver::EnergyObserver(Cutoffs cut, GevreyWeight w, EnergyOptions opt,
                               HypothesisParams hypo, TauSchedule schedule)
    : cut_(cut), w_(w), opt_(opt), hypo_(hypo), schedule_(schedule) {
    schedule_.validate();
}

void EnergyObserver::operator()(const State& s) {
    if (schedule_.tau(s.t) < schedule_.tau_min - 1e-12) return; // past the floor
    GevreyWeight w = w_;
    w.tau = schedule_.tau(s.t);
    const CriticalCurve curve = find_critical_curve(*s.grid, s.omega);
    EnergyEvaluation ev = energies(s, curve, cut_, w, opt_, hypo_);
    const BoundMargins m = bound_margins(s, hypo_.delta, hypo_.sigma, hypo_.y_split);
    ev.report.lower_margin = m.lower;
    ev.report.upper_margin_min = m.upper_min;
    samples_.push_back(TrajectorySample{s.t, std::move(ev.families), ev.report});
}

// ---------------------------------------------------------------------------

namespace {

// calE(alpha, t_i, tau0 - C t_i) over the floor-limited prefix
std::vector<double> series_at(const std::vector<TrajectorySample>& samples,
                              const TauSchedule& sched, double C, double alpha,
                              const GevreyWeight& base) {
    std::vector<double> out;
    for (const auto& s : samples) {
        const double tau = sched.tau0 - C * s.t;
        if (tau < sched.tau_min - 1e-12) break;
        GevreyWeight w = base;
        w.tau = tau;
        out.push_back(assemble_report(s.families, w, alpha, s.t).calE_alpha);
    }
    return out;
}

bool non_increasing(const std::vector<double>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i] + 1e-6 * v[i]) return false;
    return true;
}

} // namespace

DecayVerdict decay_trace(const std::vector<TrajectorySample>& samples,
                         const TauSchedule& schedule, double alpha,
                         const GevreyWeight& base_weight) {
    schedule.validate();
    if (samples.size() < 3)
        throw InsufficientData("decay_trace: need at least 3 samples");

    DecayVerdict verdict;
    const auto ok = [&](double C) {
        const auto v = series_at(samples, schedule, C, alpha, base_weight);
        return v.size() >= 2 && non_increasing(v);
    };

    if (ok(0.0)) {
        verdict.minimal_C = 0.0;
        verdict.decay_ok = true;
    } else {
        double lo = 0.0, hi = 64.0;
        if (!ok(hi)) {
            verdict.decay_ok = false;
            verdict.minimal_C = hi;
            verdict.series = series_at(samples, schedule, hi, alpha, base_weight);
            verdict.samples_used = static_cast<int>(verdict.series.size());
            return verdict;
        }
        for (int it = 0; it < 20; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (ok(mid)) hi = mid;
            else lo = mid;
        }
        verdict.minimal_C = hi;
        verdict.decay_ok = true;
    }
    verdict.series = series_at(samples, schedule, verdict.minimal_C, alpha, base_weight);
    verdict.samples_used = static_cast<int>(verdict.series.size());
    return verdict;
}

// ---------------------------------------------------------------------------

namespace {

Field perturbation_bump(const SpectralGrid& g) {
    // single smooth bump centered away from the critical band
    Field b(g.nx(), g.ny());
    for (int i = 0; i < g.nx(); ++i) {
        const double px = std::exp(2.0 * (std::cos(g.x_nodes()[i] - M_PI) - 1.0));
        for (int j = 0; j < g.ny(); ++j) {
            const double dy5 = (g.y_nodes()[j] - 5.0) / 1.5;
            b(i, j) = px * std::exp(-dy5 * dy5);
        }
    }
    return b;
}

State perturbed_state(const SpectralGrid& g, const State& base, double eta) {
    const Field bump = perturbation_bump(g);
    Field omega = base.omega * (1.0 + eta * bump);

    // re-zero each column through a far channel so u(y_max) stays homogeneous
    Profile rho(g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        const double q = (g.y_nodes()[j] - 6.0) / 1.5;
        rho[j] = std::exp(-q * q);
    }
    const double rho_mass = total_y4(g, rho);
    for (int i = 0; i < g.nx(); ++i) {
        const double resid = total_y4(g, Profile(omega.row(i).transpose()));
        omega.row(i) -= (resid / rho_mass) * rho.transpose();
    }

    State s;
    s.t = 0.0;
    s.omega = omega;
    s.u = cumulative_y4(g, omega);
    s.u.col(g.ny() - 1).setZero();
    s.v = recover_v(g, s.u);
    s.grid = base.grid;
    return s;
}

} // namespace

DivergenceResult two_run_divergence(std::shared_ptr<const SpectralGrid> grid,
                                    const InitialDataSpec& spec, double eta,
                                    const SolverConfig& cfg) {
    if (eta != 0.0 && (eta < 1e-12 || eta > 1e-6))
        throw ContractViolation("two_run_divergence: eta must be 0 or in [1e-12, 1e-6]");
    const SpectralGrid& g = *grid;

    const State base = make_initial_data(grid, spec).state;
    const State pert = perturbed_state(g, base, eta);

    std::vector<State> snaps1, snaps2;
    ImexSolver s1(grid, cfg), s2(grid, cfg);
    s1.run(base, {[&](const State& s) { snaps1.push_back(s); }});
    s2.run(pert, {[&](const State& s) { snaps2.push_back(s); }});

    DivergenceResult res;
    const size_t n = std::min(snaps1.size(), snaps2.size());
    for (size_t k = 0; k < n; ++k) {
        res.times.push_back(snaps1[k].t);
        res.gaps.push_back(l2_norm(g, Field(snaps1[k].u - snaps2[k].u)));
    }

    // log-slope fit over samples with a positive gap
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t k = 0; k < n; ++k) {
        if (res.gaps[k] <= 0.0) continue;
        const double lx = res.times[k], ly = std::log(res.gaps[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m >= 2 && m * sxx - sx * sx > 0.0)
        res.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    res.bound_ok = true;
    if (eta == 0.0) {
        for (double gap : res.gaps)
            if (gap != 0.0) res.bound_ok = false;
    } else {
        for (size_t k = 0; k < n; ++k)
            if (res.gaps[k] > eta * std::exp(calib::kDivergenceLambda * res.times[k]))
                res.bound_ok = false;
    }
    return res;
}

} // namespace prandtl
