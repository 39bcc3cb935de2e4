#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prandtl/fields.hpp"
#include "prandtl/functionals.hpp"
#include "prandtl/gevrey.hpp"

namespace prandtl {

/// One verdict line of the verify suite.
struct VerifyItem {
    std::string name;
    double measured = 0.0; ///< worst observed value (ratio or violation count)
    double committed = 0.0;
    bool pass = false;
};

struct VerifySummary {
    std::vector<VerifyItem> items;
    bool all_pass() const {
        for (const auto& i : items)
            if (!i.pass) return false;
        return true;
    }
};

/// Hardy inequality sweep: `trials` random decaying profiles per lambda in
/// {0, 0.5, 1} (gradient form) and {-1, -2} (trace form). Measured value is
/// the worst lhs/rhs ratio; committed bound is 1 (plus the relative slack).
VerifyItem verify_hardy(const SpectralGrid& g, int trials, std::uint64_t seed);

/// Sobolev embedding ratio sweep over the trigonometric/exponential family.
VerifyItem verify_sobolev(const SpectralGrid& g, std::uint64_t seed);

/// Binomial convolution sweep: `trials` log-normal sequence pairs per
/// (shift m <= 5, tau in the committed table, side).
std::vector<VerifyItem> verify_binom(int trials, int j_max, std::uint64_t seed);

/// Three-factor multinomial sweep with shifts (2, 3).
std::vector<VerifyItem> verify_multinom(int trials, int j_max, std::uint64_t seed);

/// The frozen generated family used by relations/appendix calibration.
std::vector<InitialDataSpec> calibration_family(int members, std::uint64_t seed);

/// Relations + appendix lemma ratios across the frozen family.
std::vector<VerifyItem> verify_relations(std::shared_ptr<const SpectralGrid> grid,
                                         int members, std::uint64_t seed);

/// Runs everything at the committed sweep sizes.
VerifySummary run_verify_suite(std::shared_ptr<const SpectralGrid> grid,
                               std::uint64_t seed);

} // namespace prandtl
