#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "prandtl/fields.hpp"
#include "prandtl/numerics.hpp"

namespace prandtl {

struct SolverConfig {
    double epsilon = 1e-3; ///< tangential diffusion strength
    int n_galerkin = 0;    ///< Fourier cutoff; 0 = auto (nx/3 dealiased, else nx/2)
    double dt = 5e-4;
    double t_end = 0.05;
    int sample_every = 5;
    bool dealias = true;
    double cfl_limit = 0.5;
    double blowup_threshold = 1e8;

    void validate(const SpectralGrid& g) const;
    int effective_cutoff(const SpectralGrid& g) const;
};

struct RunSummary {
    State final_state;
    int steps = 0;
    int samples = 0;
};

using Observer = std::function<void(const State&)>;

/// Semi-implicit integrator of the regularized, Fourier-truncated system
///   du/dt + P_n(u du/dx + v du/dy) = dyy u + eps dxx u,  u = 0 at both walls.
///
/// Time stepping: Crank-Nicolson on the diffusion (one banded solve per
/// Fourier mode), explicit 2nd-order Adams-Bashforth on the projected
/// nonlinear term, bootstrapped by a half-step Euler predictor. Within a step
/// the order is fixed: nonlinear term, projection, implicit solve, boundary
/// re-imposition.
class ImexSolver {
  public:
    ImexSolver(std::shared_ptr<const SpectralGrid> grid, const SolverConfig& cfg);

    /// One step. Keeps multistep history; call reset_history() when starting
    /// from a fresh state.
    State step(const State& s);

    void reset_history() { has_history_ = false; }

    /// Advance to t_end (or blow up), invoking observers at t = 0, every
    /// sample_every steps, and on the final state.
    RunSummary run(const State& initial, const std::vector<Observer>& observers);

    const SolverConfig& config() const { return cfg_; }
    int cutoff() const { return n_eff_; }

  private:
    Field nonlinear_term(const State& s) const;
    Field project(const Field& f) const;
    Eigen::VectorXcd apply_rhs(const Eigen::VectorXcd& u_hat, double k2,
                               const Eigen::VectorXcd& n_hat, double dt) const;
    State advance(const State& s, const Field& n_explicit, double dt,
                  const std::vector<BandedLU>& lus) const;
    void check_cfl(const State& s) const;
    void check_finite(const State& s) const;

    std::shared_ptr<const SpectralGrid> grid_;
    SolverConfig cfg_;
    int n_eff_;
    std::vector<BandedLU> lu_full_, lu_half_; // per |k| bin, dt and dt/2
    Field prev_n_;
    bool has_history_ = false;
};

} // namespace prandtl
