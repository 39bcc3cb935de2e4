#include "prandtl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prandtl {

namespace {

double pairwise_sum_rec(const double* x, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_sum_rec(x, h) + pairwise_sum_rec(x + h, n - h);
}

} // namespace

double pairwise_sum(std::span<const double> x) {
    return pairwise_sum_rec(x.data(), x.size());
}

double log_sum_exp(std::span<const double> s) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : s) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double v : s) acc += std::exp(v - m);
    return m + std::log(acc);
}

double CounterRng::normal(std::uint64_t i) const {
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::MatrixXd fd_weights(double z, std::span<const double> x, int max_order) {
    // Fornberg's recursion (Math. Comp. 51, 1988).
    const int n = static_cast<int>(x.size());
    if (n < max_order + 1)
        throw ContractViolation("fd_weights: stencil too small for derivative order");
    const int m = max_order;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

void BandedLU::factor_dense(const Eigen::MatrixXd& a, int kl, int ku) {
    n_ = static_cast<int>(a.rows());
    if (a.cols() != n_) throw ContractViolation("BandedLU: matrix not square");
    kl_ = kl;
    ku_ = ku;
    const int ldab = 2 * kl + ku + 1;
    ab_ = Eigen::MatrixXd::Zero(ldab, n_);
    piv_.assign(n_, 0);
    // Store A(i,j) at ab(kl+ku+i-j, j); top kl rows are fill-in space.
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku); i <= std::min(n_ - 1, j + kl); ++i)
            ab_(kl + ku + i - j, j) = a(i, j);

    // Banded Gaussian elimination with partial pivoting (LAPACK dgbtrf layout).
    const int kv = kl + ku;
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl, n_ - 1 - j);
        // pivot search in column j among rows j..j+km
        int jp = 0;
        double amax = std::abs(ab_(kv, j));
        for (int i = 1; i <= km; ++i) {
            const double v = std::abs(ab_(kv + i, j));
            if (v > amax) { amax = v; jp = i; }
        }
        piv_[j] = j + jp;
        if (amax == 0.0) throw ContractViolation("BandedLU: singular matrix");
        const int ju = std::min(n_ - 1, j + kv); // last column touched by row swap
        if (jp != 0) {
            for (int c = j; c <= ju; ++c)
                std::swap(ab_(kv + jp + j - c, c), ab_(kv + j - c, c));
        }
        if (km > 0) {
            const double pivot = ab_(kv, j);
            for (int i = 1; i <= km; ++i) ab_(kv + i, j) /= pivot;
            for (int c = j + 1; c <= ju; ++c) {
                const double ajc = ab_(kv + j - c, c);
                if (ajc != 0.0)
                    for (int i = 1; i <= km; ++i)
                        ab_(kv + i + j - c, c) -= ab_(kv + i, j) * ajc;
            }
        }
    }
}

template <class Vec> void BandedLU::solve_impl(Vec& b) const {
    if (b.size() != n_) throw ContractViolation("BandedLU: rhs size mismatch");
    const int kv = kl_ + ku_;
    // L (unit lower, banded) with row interchanges
    for (int j = 0; j < n_ - 1; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        const int p = piv_[j];
        if (p != j) std::swap(b[j], b[p]);
        for (int i = 1; i <= km; ++i) b[j + i] -= ab_(kv + i, j) * b[j];
    }
    // U (banded upper with bandwidth kv)
    for (int j = n_ - 1; j >= 0; --j) {
        b[j] /= ab_(kv, j);
        const int top = std::max(0, j - kv);
        for (int i = top; i < j; ++i) b[i] -= ab_(kv + i - j, j) * b[j];
    }
}

void BandedLU::solve_in_place(Eigen::VectorXd& b) const { solve_impl(b); }
void BandedLU::solve_in_place(Eigen::VectorXcd& b) const { solve_impl(b); }

double lagrange_value(std::span<const double> x, std::span<const double> f,
                      int first, int count, double z) {
    double acc = 0.0;
    for (int i = first; i < first + count; ++i) {
        double li = 1.0;
        for (int j = first; j < first + count; ++j) {
            if (j == i) continue;
            li *= (z - x[j]) / (x[i] - x[j]);
        }
        acc += li * f[i];
    }
    return acc;
}

double cubic_interval_integral(std::span<const double> x, std::span<const double> f, int k) {
    const int n = static_cast<int>(x.size());
    const int first = std::clamp(k - 1, 0, n - 4);
    const double a = x[k], b = x[k + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double d = half / std::sqrt(3.0);
    return half * (lagrange_value(x, f, first, 4, mid - d) +
                   lagrange_value(x, f, first, 4, mid + d));
}

void cubic_running_integral(std::span<const double> x, std::span<const double> f,
                            int j0, int j1, std::vector<double>& out) {
    out.assign(x.size(), 0.0);
    double acc = 0.0;
    for (int k = j0; k < j1; ++k) {
        acc += cubic_interval_integral(x, f, k);
        out[k + 1] = acc;
    }
}

int centered_stencil_start(std::span<const double> x, double z, int count) {
    const int n = static_cast<int>(x.size());
    if (count > n) throw ContractViolation("stencil larger than node set");
    const auto it = std::lower_bound(x.begin(), x.end(), z);
    int right = static_cast<int>(it - x.begin()); // first node >= z
    int first = right - count / 2;
    first = std::clamp(first, 0, n - count);
    return first;
}

} // namespace prandtl
