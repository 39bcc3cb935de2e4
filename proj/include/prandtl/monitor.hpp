#pragma once

#include <memory>
#include <vector>

#include "prandtl/functionals.hpp"
#include "prandtl/solver.hpp"

namespace prandtl {

/// Linearly shrinking Gevrey radius tau(t) = tau0 - C t, cut at the floor.
struct TauSchedule {
    double tau0 = 1.0;
    double shrink_rate = 0.0; ///< C
    double tau_min = 0.5;

    double tau(double t) const { return tau0 - shrink_rate * t; }
    /// Largest time with tau(t) >= tau_min (infinite when C = 0).
    double horizon() const {
        return shrink_rate > 0.0 ? (tau0 - tau_min) / shrink_rate
                                 : std::numeric_limits<double>::infinity();
    }

    void validate() const;
};

/// Slack in the pointwise vorticity bounds; positivity of every entry is the
/// monitored outcome, not a precondition.
struct BoundMargins {
    double lower = 0.0;                 ///< min over y > y_split of (1+y)^sigma |omega| - delta
    Eigen::Matrix<double, 6, 1> upper;  ///< per derivative (0,0),(1,0),(0,1),(2,0),(1,1),(0,2)
    double upper_min = 0.0;
};

BoundMargins bound_margins(const State& s, double delta, double sigma, double y_split);

/// One trajectory sample: the raw per-index families allow re-weighting at
/// any radius during the decay search.
struct TrajectorySample {
    double t = 0.0;
    EnergyFamilies families;
    EnergyReport report;
};

struct DecayVerdict {
    double minimal_C = 0.0;
    bool decay_ok = false;      ///< a C in the search bracket renders the series non-increasing
    int samples_used = 0;       ///< samples inside the tau floor at minimal_C
    std::vector<double> series; ///< calE(alpha, t_i, tau0 - C t_i) at minimal_C
};

/// Smallest C in [0, 64] (20 bisections) for which t -> calE(alpha, t, tau0 - C t)
/// is non-increasing within a 1e-6 relative per-sample slack. Only samples with
/// tau >= tau_min enter the verdict.
DecayVerdict decay_trace(const std::vector<TrajectorySample>& samples,
                         const TauSchedule& schedule, double alpha,
                         const GevreyWeight& base_weight);

/// Collects TrajectorySamples from solver callbacks: re-roots the critical
/// curve on every snapshot, evaluates all energies at tau(t), and attaches the
/// bound margins.
class EnergyObserver {
  public:
    EnergyObserver(Cutoffs cut, GevreyWeight w, EnergyOptions opt, HypothesisParams hypo,
                   TauSchedule schedule);

    void operator()(const State& s);

    const std::vector<TrajectorySample>& samples() const { return samples_; }

  private:
    Cutoffs cut_;
    GevreyWeight w_;
    EnergyOptions opt_;
    HypothesisParams hypo_;
    TauSchedule schedule_;
    std::vector<TrajectorySample> samples_;
};

struct DivergenceResult {
    double slope = 0.0;             ///< log-slope Lambda of the trajectory gap
    bool bound_ok = false;          ///< gap(t) <= eta exp(Lambda_cal t) at every sample
    std::vector<double> times;
    std::vector<double> gaps;       ///< || u1 - u2 ||_L2
};

/// Continuous-dependence probe: run the solver from the generated data and
/// from the same data with vorticity scaled by (1 + eta * bump), re-zeroed
/// per column so both far fields stay homogeneous. eta = 0 reproduces the
/// base trajectory bitwise.
DivergenceResult two_run_divergence(std::shared_ptr<const SpectralGrid> grid,
                                    const InitialDataSpec& spec, double eta,
                                    const SolverConfig& cfg);

} // namespace prandtl
