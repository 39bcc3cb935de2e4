#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prandtl/errors.hpp"

namespace prandtl {

/// Finite nonnegative sequence a_j, j = 0..j_max, carrying per-index norms of
/// derivative families (the building block of every weighted series here).
struct GevreySeq {
    Eigen::ArrayXd values;

    int j_max() const { return static_cast<int>(values.size()) - 1; }
    void validate(const char* who) const;
};

/// Radius/exponent triple of the weight tau^j (j!)^(-m) (j+1)^p.
/// All weight arithmetic is done in log scale; linear-scale weights only
/// materialize inside stabilized sums.
struct GevreyWeight {
    double tau = 1.0;
    double m = 1.75;
    double p_corr = 10.0;
};

/// log of the weight at index j: j ln(tau) - m ln(j!) + p ln(j+1).
double log_weight(int j, const GevreyWeight& w);

/// Weighted sequence norm ( sum_j weight_j^2 |a_j|^p )^(1/p), p >= 1.
double lp_tau_norm(const GevreySeq& seq, const GevreyWeight& w, double p);

/// Same norm from log-magnitudes (entries may be -inf for zero terms).
double lp_tau_norm_log(const Eigen::ArrayXd& log_values, const GevreyWeight& w, double p);

/// Weighted square sum_j weight_j^2 a_j^2 (the quantity the energies use).
double weighted_square_sum(const GevreySeq& seq, const GevreyWeight& w);

struct DtauReport {
    double exact;      ///< d/dtau of sum_j weight_j(tau)^2 a_j^2  =  sum (2j/tau) w_j^2 a_j^2
    double surrogate;  ///< sum_j j w_j^2 a_j^2  =  || j^(1/2) a_j ||_{l2(tau)}^2
};

/// Exact tau-derivative of the weighted square sum, plus the j^(1/2) surrogate.
/// The two satisfy exact = (2/tau) * surrogate identically.
DtauReport dtau_lp2(const GevreySeq& seq, const GevreyWeight& w);

enum class ConvolutionSide { low, high };

struct ConvolutionReport {
    double lhs = 0.0;          ///< weighted l2 norm of the convolved sequence
    double rhs_product = 0.0;  ///< ||a|| * ||b|| (or the N-fold product)
    double ratio = 0.0;        ///< lhs / rhs_product (0 when rhs is 0)
    bool hypothesis_ok = true; ///< false when a shift exceeds 5
};

/// Binomial half-convolution bound:
///   low : c_j = sum_{k<=j/2} C(j,k) a_{k+m} b_{j-k}
///   high: c_j = sum_{k>=j/2} C(j,k) a_k     b_{j-k+m}
/// (j/2 rounds down). Reports ||c|| vs ||a|| ||b||; shifts m > 5 are outside
/// the hypothesis and flagged rather than asserted.
ConvolutionReport binom_convolution_check(const GevreySeq& a, const GevreySeq& b,
                                          int m, const GevreyWeight& w,
                                          ConvolutionSide side);

/// N-fold restricted multinomial convolution over the index set
///   {k_1+...+k_N = j, k_1 >= j/N}:
///   c_j = sum j!/(k_1!...k_N!) a^1_{k_1} prod_{l>=2} a^l_{k_l + m_l}.
/// N = 2 coincides with the low-side binomial check applied to (a^2, a^1).
ConvolutionReport multinom_convolution_check(const std::vector<GevreySeq>& seqs,
                                             const std::vector<int>& shifts,
                                             const GevreyWeight& w);

} // namespace prandtl
