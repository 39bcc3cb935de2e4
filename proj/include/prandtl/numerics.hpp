#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "prandtl/errors.hpp"

namespace prandtl {

// ---------------------------------------------------------------------------
// Deterministic reductions
// ---------------------------------------------------------------------------

/// Pairwise (cascade) summation. Fixed association order, so results are
/// bitwise identical across runs and independent of any outer parallelism.
double pairwise_sum(std::span<const double> x);

inline double pairwise_sum(const Eigen::ArrayXd& x) {
    return pairwise_sum(std::span<const double>(x.data(), static_cast<size_t>(x.size())));
}

/// log(sum_i exp(s_i)) with the usual max shift. Entries of -inf are allowed
/// (empty terms); returns -inf if all entries are -inf.
double log_sum_exp(std::span<const double> s);

// ---------------------------------------------------------------------------
// Counter-based RNG
// ---------------------------------------------------------------------------

/// SplitMix64 used as a pure counter-based generator: draw i of stream `seed`
/// is mix(seed + (i+1)*GOLDEN). No hidden state, bitwise reproducible,
/// platform independent.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t i) const {
        std::uint64_t z = seed_ + (i + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform(std::uint64_t i) const {
        return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on draws (2i, 2i+1).
    double normal(std::uint64_t i) const;

    /// Derived stream for independent substreams (e.g. one per trial).
    CounterRng stream(std::uint64_t k) const { return CounterRng(bits(~k)); }

  private:
    std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Finite-difference weights (Fornberg)
// ---------------------------------------------------------------------------

/// Weights w(:,k) such that sum_i w(i,k) f(x_i) approximates f^(k)(z),
/// for k = 0..max_order, on the arbitrary nodes x. Exact for polynomials
/// of degree < x.size().
Eigen::MatrixXd fd_weights(double z, std::span<const double> x, int max_order);

// ---------------------------------------------------------------------------
// Banded LU with partial pivoting
// ---------------------------------------------------------------------------

/// LAPACK-style band storage. Factor once, solve many right-hand sides
/// (real or complex) in place.
class BandedLU {
  public:
    BandedLU() = default;

    /// A given as dense (n x n); entries outside the band must be zero.
    void factor_dense(const Eigen::MatrixXd& a, int kl, int ku);

    void solve_in_place(Eigen::VectorXd& b) const;
    void solve_in_place(Eigen::VectorXcd& b) const;

    int size() const { return n_; }

  private:
    template <class Vec> void solve_impl(Vec& b) const;

    int n_ = 0, kl_ = 0, ku_ = 0;
    Eigen::MatrixXd ab_;          // (2*kl+ku+1) x n band storage
    std::vector<int> piv_;
};

// ---------------------------------------------------------------------------
// Local polynomial interpolation
// ---------------------------------------------------------------------------

/// Value at z of the Lagrange polynomial through (x_i, f_i), i in the stencil
/// [first, first+count) of the node array. Caller picks the stencil.
double lagrange_value(std::span<const double> x, std::span<const double> f,
                      int first, int count, double z);

/// Integral over [x_k, x_{k+1}] of the cubic through the four nodes around
/// the interval (two-point Gauss, exact for the cubic). 4th-order composite.
double cubic_interval_integral(std::span<const double> x, std::span<const double> f, int k);

/// Running 4th-order integral: out[j] = int_{x_{j0}}^{x_j} f, j0 <= j <= j1.
void cubic_running_integral(std::span<const double> x, std::span<const double> f,
                            int j0, int j1, std::vector<double>& out);

/// Stencil start index for a centered `count`-point stencil around z on the
/// sorted nodes x (clamped at the ends).
int centered_stencil_start(std::span<const double> x, double z, int count);

} // namespace prandtl
