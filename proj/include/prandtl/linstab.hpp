#pragma once

#include <map>
#include <memory>
#include <vector>

#include "prandtl/fields.hpp"
#include "prandtl/numerics.hpp"

namespace prandtl {

/// Base shear flow U_s(y) with tabulated derivatives.
struct ShearProfile {
    Profile Us, dUs, d2Us;
    bool monotone = false;
    double critical_y = 0.0; ///< interior zero of dUs when non-monotone
};

/// U_s(y) = y exp(-y^2/2): dUs(0) = 1, interior critical point at y = 1 with
/// d2Us(1) != 0.
ShearProfile make_nonmonotone_profile(const SpectralGrid& g);

/// U_s(y) = (1 - exp(-2y)) exp(-(y/15)^4): increasing across the layer, far
/// decay so slow and flat that no instability fits below the diffusive floor.
ShearProfile make_monotone_profile(const SpectralGrid& g);

/// Frozen-coefficient growth heuristic sigma = dUs(y0) kx / ky - ky^2.
double frozen_dispersion(double dUs_at_y0, double kx, double ky);

/// One IMEX step of the shear-linearized dynamics
///   dt u + U_s dx u + dUs v = dyy u,   v = -int_0^y dx u,
/// on a full 2-D perturbation field. Fourier modes evolve independently.
Field linearized_step(const SpectralGrid& g, const Field& pert_u,
                      const ShearProfile& profile, double dt);

/// Per-mode marcher used by the growth-rate sweep (Crank-Nicolson diffusion,
/// Adams-Bashforth advection, complex amplitudes).
class LinearModeSolver {
  public:
    LinearModeSolver(std::shared_ptr<const SpectralGrid> grid, const ShearProfile& profile,
                     double kx, double dt);

    Eigen::VectorXcd step(const Eigen::VectorXcd& u_hat);
    void reset_history() { has_history_ = false; }
    double norm(const Eigen::VectorXcd& u_hat) const;

  private:
    Eigen::VectorXcd explicit_term(const Eigen::VectorXcd& u_hat) const;

    std::shared_ptr<const SpectralGrid> grid_;
    ShearProfile profile_;
    double kx_, dt_;
    BandedLU lu_full_, lu_half_;
    Eigen::VectorXcd prev_;
    bool has_history_ = false;
};

struct GrowthResult {
    double rate = 0.0; ///< best-fit log-slope over the fit window
    double r2 = 0.0;
    bool conclusive = false; ///< R^2 >= 0.99 for the best seed
};

/// Dominant growth rate of mode kx by time marching: evolve n_seeds random
/// seeds over the horizon, fit ln ||u|| on the trailing window, take the
/// steepest well-converged fit (power-iteration surrogate).
GrowthResult growth_rate(std::shared_ptr<const SpectralGrid> grid,
                         const ShearProfile& profile, double kx, double horizon,
                         double dt, int n_seeds, std::uint64_t seed = 1,
                         double fit_window = 0.5);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0; ///< ln of the rate amplitude
    double r2 = 0.0;
    int used = 0; ///< wavenumbers with positive rates that entered the fit
};

/// Least squares of ln(rate) against ln(kx) over positive rates; fewer than
/// four usable points is an error.
ExponentFit fit_growth_exponent(const std::map<double, double>& rates);

} // namespace prandtl
