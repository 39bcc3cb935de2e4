#pragma once

#include <Eigen/Dense>
#include <memory>

#include "prandtl/grid.hpp"

namespace prandtl {

/// One time-snapshot of the discrete fields. Immutable value: operations
/// produce fresh States.
struct State {
    double t = 0.0;
    Field u;      ///< tangential velocity
    Field v;      ///< normal velocity, slaved to u by incompressibility
    Field omega;  ///< shear d u / d y
    std::shared_ptr<const SpectralGrid> grid;
};

struct StateCheckOptions {
    double pair_tol = 5e-4;      ///< || dy u - omega ||_L2 tolerance
    double div_tol = 5e-4;       ///< || dx u + dy v ||_L2 tolerance
    bool check_far_field = true; ///< require |u(y_max)| < 1e-8
};

/// Throws ContractViolation when a stored State is internally inconsistent.
void validate_state(const State& s, const StateCheckOptions& opt = {});

/// v(x,y) = - int_0^y du/dx, so that div(u,v) = 0 discretely. v(x,0) = 0 exactly.
Field recover_v(const SpectralGrid& g, const Field& u);

/// Weighted Sobolev norm: || g ||^2 = sum_{k<=s} || (1+y)^{gamma+k} g^(k) ||_L2^2.
/// Profile version supports s <= 2; the field version takes y-derivatives by
/// repeated 4th-order differencing.
double sobolev_weighted_norm(const SpectralGrid& g, const Profile& f, int s, double gamma);
double sobolev_weighted_norm(const SpectralGrid& g, const Field& f, int s, double gamma);

/// Table T(j2, j1) = || (1+y)^{gamma+j2} dx^{j1} dy^{j2} omega ||_L2^2 for
/// j2 = 0..s, j1 = 0..j1_max. x-norms are evaluated spectrally (Parseval),
/// which is what makes whole-family sums over j1 affordable.
Eigen::MatrixXd calh_term_table(const SpectralGrid& g, const Field& omega,
                                double gamma, int s, int j1_max);

/// Mixed-derivative family norm at total order j:
///   sum over j1 + j2 = j, j2 <= min(j, s) (j2 >= 1 in homogeneous mode)
/// of the table terms, square-rooted. Homogeneous mode returns 0 at j = 0.
double calH_norm(const SpectralGrid& g, const Field& omega, int j, double gamma,
                 int s, bool homogeneous = false);

struct HardyReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool trace_variant = false; ///< true when lambda < -1/2 (wall-trace term used)
};

/// Weighted Hardy inequality check on a decaying profile with the sharp
/// constant 2/(2 lambda + 1); for lambda < -1/2 the variant with the
/// sqrt(-1/(2 lambda + 1)) |f(0)| trace term. lambda = -1/2 is unsupported.
HardyReport hardy_check(const SpectralGrid& g, const Profile& f, double lambda,
                        double rel_slack = 1e-10);

struct SobolevReport {
    double linf = 0.0;
    double rhs = 0.0;   ///< ||f|| + ||dx f|| + ||dy f|| + ||dy dx f||
    double ratio = 0.0; ///< measured constant, 0 for the zero field
    bool holds = false; ///< ratio <= calib::kSobolevConstant
};

/// Grid-max Sobolev embedding check against the frozen calibrated constant.
SobolevReport sobolev_check(const SpectralGrid& g, const Field& f);

/// Pointwise vorticity-bound parameters shared by the generator, the
/// monotonicity quantities and the margin monitor.
struct HypothesisParams {
    double delta = 0.05;
    double sigma = 2.0;
    double y_split = 3.0;
};

/// Generator input. Critical curve a0(x) = a0_mean + a0_amp sin(a0_mode x).
struct InitialDataSpec {
    double a0_mean = 1.5;
    double a0_amp = 0.5;
    int a0_mode = 1;
    double sigma = 2.0;
    double delta = 0.05;
    double gamma = 1.0;
    int s = 8;
    bool monotone = false;
    double amplitude = 0.25; ///< vorticity scale of the envelope
    double y_split = 3.0;

    void validate() const;
};

struct GeneratedData {
    State state;
    bool monotone = false;
    Profile a0; ///< empty in the monotone variant
};

/// Builds t=0 data with a single non-degenerate critical curve (or the
/// monotone variant), verifies the sign/root structure and the node-wise
/// vorticity bounds with the doubled initial margin, and fails loudly naming
/// the violated bound otherwise.
GeneratedData make_initial_data(std::shared_ptr<const SpectralGrid> grid,
                                const InitialDataSpec& spec);

} // namespace prandtl
