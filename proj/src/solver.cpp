#include "prandtl/solver.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace prandtl {

void SolverConfig::validate(const SpectralGrid& g) const {
    if (epsilon < 0.0) throw ContractViolation("SolverConfig: epsilon must be >= 0");
    if (dt <= 0.0) throw ContractViolation("SolverConfig: dt must be > 0");
    if (t_end < 0.0) throw ContractViolation("SolverConfig: t_end must be >= 0");
    if (sample_every < 1) throw ContractViolation("SolverConfig: sample_every must be >= 1");
    const int n = effective_cutoff(g);
    if (n < 1 || n > g.nx() / 2)
        throw ContractViolation("SolverConfig: need 1 <= n_galerkin <= nx/2");
}

int SolverConfig::effective_cutoff(const SpectralGrid& g) const {
    int n = n_galerkin > 0 ? n_galerkin : (dealias ? g.nx() / 3 : g.nx() / 2);
    if (dealias) n = std::min(n, g.nx() / 3);
    return n;
}

ImexSolver::ImexSolver(std::shared_ptr<const SpectralGrid> grid, const SolverConfig& cfg)
    : grid_(std::move(grid)), cfg_(cfg) {
    const SpectralGrid& g = *grid_;
    cfg_.validate(g);
    n_eff_ = cfg_.effective_cutoff(g);

    // One Crank-Nicolson matrix per |k| (the diffusion multiplier depends on
    // k^2 only); boundary rows are identity. Factored once for dt and dt/2.
    const int ny = g.ny();
    auto build = [&](double dt) {
        std::vector<BandedLU> lus(g.nx() / 2 + 1);
        for (int ka = 0; ka <= g.nx() / 2; ++ka) {
            const double ksc = 2.0 * M_PI * ka / g.x_period();
            const double k2 = ksc * ksc;
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ny, ny);
            a(0, 0) = 1.0;
            a(ny - 1, ny - 1) = 1.0;
            for (int j = 1; j < ny - 1; ++j) {
                const int s = g.stencil_start(2, j);
                a(j, j) += 1.0 + 0.5 * dt * cfg_.epsilon * k2;
                for (int m = 0; m < SpectralGrid::kStencil2; ++m)
                    a(j, s + m) -= 0.5 * dt * g.stencil_weights(2)(j, m);
            }
            lus[ka].factor_dense(a, 4, 4);
        }
        return lus;
    };
    lu_full_ = build(cfg_.dt);
    lu_half_ = build(0.5 * cfg_.dt);
}

Field ImexSolver::project(const Field& f) const {
    const SpectralGrid& g = *grid_;
    Eigen::ArrayXXcd spec = x_spectrum(g, f);
    for (int i = 0; i < g.nx(); ++i)
        if (std::abs(g.wavenumber_index(i)) > n_eff_) spec.row(i).setZero();
    return x_field(g, spec);
}

Field ImexSolver::nonlinear_term(const State& s) const {
    const SpectralGrid& g = *grid_;
    Field n = s.u * dx(g, s.u, 1) + s.v * dy(g, s.u, 1);
    return project(n);
}

void ImexSolver::check_cfl(const State& s) const {
    const double umax = s.u.abs().maxCoeff();
    const double kmax = 2.0 * M_PI * n_eff_ / grid_->x_period();
    const double cfl = cfg_.dt * umax * kmax;
    if (cfl >= cfg_.cfl_limit) {
        std::ostringstream os;
        os << "step rejected: advective CFL " << cfl << " >= " << cfg_.cfl_limit
           << " (dt = " << cfg_.dt << ", max|u| = " << umax << ")";
        throw StepRejected(os.str());
    }
}

void ImexSolver::check_finite(const State& s) const {
    if (!s.omega.isFinite().all())
        throw BlowUpError("solution lost finiteness at t = " + std::to_string(s.t), s.t);
    const double m = s.omega.abs().maxCoeff();
    if (m > cfg_.blowup_threshold)
        throw BlowUpError("max |omega| = " + std::to_string(m) + " exceeded threshold at t = " +
                              std::to_string(s.t),
                          s.t);
}

State ImexSolver::advance(const State& s, const Field& n_explicit, double dt,
                          const std::vector<BandedLU>& lus) const {
    const SpectralGrid& g = *grid_;
    const int ny = g.ny();

    Eigen::ArrayXXcd u_spec = x_spectrum(g, s.u);
    Eigen::ArrayXXcd n_spec = x_spectrum(g, n_explicit);

    Eigen::VectorXcd rhs(ny), u_hat(ny);
    Eigen::ArrayXXcd out_spec(g.nx(), ny);
    for (int i = 0; i < g.nx(); ++i) {
        const int ka = std::abs(g.wavenumber_index(i));
        if (ka > n_eff_) {
            out_spec.row(i).setZero();
            continue;
        }
        const double ksc = g.wavenumber(i);
        const double k2 = ksc * ksc;
        for (int j = 0; j < ny; ++j) u_hat[j] = u_spec(i, j);

        rhs[0] = 0.0;
        rhs[ny - 1] = 0.0;
        for (int j = 1; j < ny - 1; ++j) {
            std::complex<double> diff = -cfg_.epsilon * k2 * u_hat[j];
            const int st = g.stencil_start(2, j);
            for (int m = 0; m < SpectralGrid::kStencil2; ++m)
                diff += g.stencil_weights(2)(j, m) * u_hat[st + m];
            rhs[j] = u_hat[j] + 0.5 * dt * diff - dt * n_spec(i, j);
        }
        lus[ka].solve_in_place(rhs);
        for (int j = 0; j < ny; ++j) out_spec(i, j) = rhs[j];
    }

    State next;
    next.t = s.t + dt;
    next.u = x_field(g, out_spec);
    next.u.col(0).setZero();
    next.u.col(ny - 1).setZero();
    next.omega = dy(g, next.u, 1);
    next.v = recover_v(g, next.u);
    next.grid = s.grid;
    return next;
}

State ImexSolver::step(const State& s) {
    const SpectralGrid& g = *grid_;
    g.require_shape(s.u, "ImexSolver::step");
    check_cfl(s);

    State next;
    if (!has_history_) {
        // Bootstrap: half-step Euler predictor, then a midpoint evaluation of
        // the advection term carries the full step at 2nd order.
        const Field n0 = nonlinear_term(s);
        const State half = advance(s, n0, 0.5 * cfg_.dt, lu_half_);
        const Field n_mid = nonlinear_term(half);
        next = advance(s, n_mid, cfg_.dt, lu_full_);
        prev_n_ = n0;
        has_history_ = true;
    } else {
        const Field n1 = nonlinear_term(s);
        const Field n_ab2 = 1.5 * n1 - 0.5 * prev_n_;
        next = advance(s, n_ab2, cfg_.dt, lu_full_);
        prev_n_ = n1;
    }
    check_finite(next);
    return next;
}

RunSummary ImexSolver::run(const State& initial, const std::vector<Observer>& observers) {
    const SpectralGrid& g = *grid_;
    g.require_shape(initial.u, "ImexSolver::run");

    // Galerkin initial projection keeps the evolution inside the retained modes.
    State s = initial;
    s.u = project(initial.u);
    s.u.col(0).setZero();
    s.u.col(g.ny() - 1).setZero();
    s.omega = dy(g, s.u, 1);
    s.v = recover_v(g, s.u);

    reset_history();

    RunSummary summary;
    auto sample = [&](const State& st) {
        for (const auto& ob : observers) ob(st);
        ++summary.samples;
    };
    sample(s);

    const int n_steps = static_cast<int>(std::llround(cfg_.t_end / cfg_.dt));
    try {
        for (int k = 0; k < n_steps; ++k) {
            s = step(s);
            ++summary.steps;
            if ((k + 1) % cfg_.sample_every == 0 || k + 1 == n_steps) sample(s);
        }
    } catch (const BlowUpError&) {
        throw; // carry the blow-up time upward with trajectory context intact
    }
    summary.final_state = std::move(s);
    return summary;
}

} // namespace prandtl
