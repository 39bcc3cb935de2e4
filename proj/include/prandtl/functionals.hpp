#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "prandtl/fields.hpp"
#include "prandtl/gevrey.hpp"

namespace prandtl {

/// The zero curve y = a(x) of the vorticity, with its slope on the curve.
struct CriticalCurve {
    Profile a;
    Profile dy_omega_on_curve;
    bool valid = false;
};

/// Smooth localizations: chi(y - a) selects the band around the critical
/// curve, psi(y) selects the near region [0, psi_on] and dies at psi_off.
/// Transition profile: exp(1 - 1/(1 - q^2)) on the normalized coordinate.
struct Cutoffs {
    double chi_r1 = 0.25;
    double chi_r2 = 0.5;
    double psi_on = 3.5;
    double psi_off = 4.0;

    double chi(double p) const;
    double psi(double y) const;
};

struct EnergyReport {
    double t = 0.0;
    double tau = 0.0;
    double E_omega = 0.0;
    double E_dot_omega = 0.0;
    double E_h = 0.0;
    double E_g1 = 0.0;
    double E_g2 = 0.0;
    double calE_alpha = 0.0;
    double D_dot_omega = 0.0;
    double D_h = 0.0;
    double D_g1 = 0.0;
    double D_g2 = 0.0;
    double dtau_calE = 0.0;
    double lower_margin = std::numeric_limits<double>::quiet_NaN();
    double upper_margin_min = std::numeric_limits<double>::quiet_NaN();
};

/// Per-index norm sequences behind the report; decay tracking re-weights
/// these at arbitrary tau without touching the fields again.
struct EnergyFamilies {
    GevreySeq omega_full;     ///< || omega ||_{H^j_gamma}
    GevreySeq omega_dot;      ///< || omega ||_{Hdot^j_gamma}
    GevreySeq omega_dot_diss; ///< || dy omega ||_{Hdot^j_gamma}
    GevreySeq h;              ///< || h_j ||_L2
    GevreySeq h_diss;         ///< || dy h_j ||_L2
    GevreySeq g1;             ///< || g_j ||_{L2((1+y)^gamma)}
    GevreySeq g1_diss;        ///< || dy g_j ||_{L2((1+y)^gamma)}
    GevreySeq g2;             ///< (j+1)^{3/4} || gtilde_j ||_L2
    GevreySeq g2_diss;        ///< j^{3/4} || dy gtilde_j ||_L2
};

// --- critical curve ----------------------------------------------------------

/// Locates the single root of omega per column in (0, 3) by bracketing plus
/// local polynomial refinement. All columns rootless => invalid curve (the
/// monotone convention); mixed presence or multiple roots => error.
CriticalCurve find_critical_curve(const SpectralGrid& g, const Field& omega);

/// One RK2 step of da/dt = - (dt omega)(x, a) / (dy omega)(x, a).
CriticalCurve evolve_critical_curve(const SpectralGrid& g, const CriticalCurve& curve,
                                    const Field& omega, const Field& dt_omega, double dt);

// --- pointwise quantities ------------------------------------------------------

/// h_j = chi(y - a) dx^j omega / sqrt(dy omega). Zero field when the curve is
/// invalid. Errors if dy omega <= 0 anywhere chi is active.
Field compute_hj(const SpectralGrid& g, const Field& omega, int j,
                 const CriticalCurve& curve, const Cutoffs& cut);

/// Singularity-free monotonicity quantity
///   g_j = psi (omega dx^j omega - dy omega dx^j u)
///       + (1 - psi) (dx^j omega - (dy omega / omega) dx^j u).
/// Errors when |omega| drops under half the hypothesis floor where psi < 1.
Field compute_gj(const SpectralGrid& g, const Field& omega, const Field& u, int j,
                 const Cutoffs& cut, const HypothesisParams& hypo);

/// gtilde_j = dx^{j-5} (omega dx^5 omega - dy omega dx^5 u); zero for j < 5.
Field compute_tilde_gj(const SpectralGrid& g, const Field& omega, const Field& u, int j);

/// bar g_k = omega dx^k omega - dy omega dx^k u,
/// hat g_k = omega dx^{k-1} dy omega - dy omega dx^{k-1} omega, 1 <= k <= 5.
std::pair<Field, Field> compute_bar_hat_g(const SpectralGrid& g, const Field& omega,
                                          const Field& u, int k);

/// C_j(x) = - dx^j u(x, y_split) / omega(x, y_split), cubic-interpolated in y.
Profile compute_Cj(const SpectralGrid& g, const Field& omega, const Field& u, int j,
                   double y_split = 3.0);

/// Inverts g_j back to dx^j u: integral representation anchored at y_split
/// above the curve (plus C_j omega) and at 0 below, with the exclusion band
/// around the curve interpolated across. `band` defaults to chi_r1 / 2.
Field reconstruct_dxju(const SpectralGrid& g, const Field& g_j, const Field& omega,
                       const CriticalCurve& curve, const Cutoffs& cut, int j,
                       const Profile& c_j, double band = -1.0,
                       double y_split = 3.0);

// --- energies ------------------------------------------------------------------

struct EnergyOptions {
    double alpha = 0.1;
    double gamma = 1.0;
    int s = 8;
    int j_max = 48;
};

struct EnergyEvaluation {
    EnergyReport report;
    EnergyFamilies families;
};

/// Evaluates every energy/dissipation of the anisotropic functional on one
/// snapshot. Non-finite components raise ContractViolation naming the family.
EnergyEvaluation energies(const State& state, const CriticalCurve& curve,
                          const Cutoffs& cut, const GevreyWeight& w,
                          const EnergyOptions& opt, const HypothesisParams& hypo);

/// Re-assemble the scalar report from stored families at a different radius.
EnergyReport assemble_report(const EnergyFamilies& fam, const GevreyWeight& w,
                             double alpha, double t);

struct RelationsReport {
    double r1 = 0.0;     ///< (E_omega - E_dot) / (E_g1 + E_h)
    double r2 = 0.0;     ///< inverse
    double r1_tau = 0.0; ///< same for the exact tau-derivatives
    double r2_tau = 0.0;
    bool indeterminate = false; ///< a denominator underflowed
};

RelationsReport relations_check(const EnergyFamilies& fam, const GevreyWeight& w);

struct LemmaReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool indeterminate = false;
};

/// Ratio harnesses for the auxiliary sequence bounds (near-field g vs gtilde,
/// the dy^l gtilde family, and the mixed dissipation bound).
std::vector<LemmaReport> appendix_lemma_suite(const State& state,
                                              const CriticalCurve& curve,
                                              const Cutoffs& cut, const GevreyWeight& w,
                                              const EnergyOptions& opt,
                                              const HypothesisParams& hypo);

} // namespace prandtl
