#pragma once

// Self-contained 1-D heat integrator used as an oracle for the x-independent
// reduction of the solver. Deliberately shares no code with the library:
// nodes from the published grading map, derivative weights from local
// Vandermonde moment systems, and its own banded elimination.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace heat_oracle {

inline std::vector<double> sinh_nodes(int ny, double y_max, double c) {
    std::vector<double> y(ny);
    const double sh = std::sinh(c);
    for (int j = 0; j < ny; ++j) {
        const double s = static_cast<double>(j) / (ny - 1);
        y[j] = y_max * std::sinh(c * s) / sh;
    }
    y[0] = 0.0;
    y[ny - 1] = y_max;
    return y;
}

// weights w with sum_m w_m f(x_m) ~ f''(z): solve sum_m w_m (x_m - z)^p = 2 [p == 2]
inline Eigen::VectorXd second_derivative_weights(const std::vector<double>& x, double z) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int p = 0; p < n; ++p)
        for (int m = 0; m < n; ++m) v(p, m) = std::pow(x[m] - z, p);
    if (n > 2) rhs[2] = 2.0;
    return v.fullPivLu().solve(rhs);
}

// fixed-band matrix with in-place no-pivot LU (CN heat matrices are benign)
class Band {
  public:
    Band(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
        a_.assign(static_cast<size_t>(n) * (kl + ku + 1), 0.0);
    }
    double& at(int i, int j) { return a_[static_cast<size_t>(j) * (kl_ + ku_ + 1) + (i - j + ku_)]; }
    double get(int i, int j) const {
        if (j - i > ku_ || i - j > kl_) return 0.0;
        return a_[static_cast<size_t>(j) * (kl_ + ku_ + 1) + (i - j + ku_)];
    }

    void factor() {
        for (int k = 0; k < n_ - 1; ++k) {
            const double piv = get(k, k);
            if (piv == 0.0) throw std::runtime_error("heat oracle: zero pivot");
            for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
                const double m = get(i, k) / piv;
                at(i, k) = m;
                for (int j = k + 1; j <= std::min(n_ - 1, k + ku_); ++j)
                    at(i, j) -= m * get(k, j);
            }
        }
        factored_ = true;
    }

    void solve(Eigen::VectorXd& b) const {
        for (int k = 0; k < n_ - 1; ++k)
            for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
                b[i] -= get(i, k) * b[k];
        for (int i = n_ - 1; i >= 0; --i) {
            double acc = b[i];
            for (int j = i + 1; j <= std::min(n_ - 1, i + ku_); ++j)
                acc -= get(i, j) * b[j];
            b[i] = acc / get(i, i);
        }
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
        if (factored_) throw std::runtime_error("heat oracle: apply after factor");
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
                out[i] += get(i, j) * f[j];
        return out;
    }

  private:
    int n_, kl_, ku_;
    std::vector<double> a_;
    bool factored_ = false;
};

class CrankNicolson {
  public:
    CrankNicolson(std::vector<double> nodes, double dt)
        : y_(std::move(nodes)), n_(static_cast<int>(y_.size())), a_(n_, 4, 4), b_(n_, 4, 4) {
        a_.at(0, 0) = 1.0;
        a_.at(n_ - 1, n_ - 1) = 1.0;
        for (int j = 1; j < n_ - 1; ++j) {
            const int w = 6;
            int first = j - w / 2;
            if (first < 0) first = 0;
            if (first > n_ - w) first = n_ - w;
            std::vector<double> local(y_.begin() + first, y_.begin() + first + w);
            const Eigen::VectorXd wts = second_derivative_weights(local, y_[j]);
            a_.at(j, j) += 1.0;
            b_.at(j, j) += 1.0;
            for (int m = 0; m < w; ++m) {
                a_.at(j, first + m) -= 0.5 * dt * wts[m];
                b_.at(j, first + m) += 0.5 * dt * wts[m];
            }
        }
        a_.factor();
    }

    Eigen::VectorXd evolve(const Eigen::VectorXd& f0, int steps) const {
        Eigen::VectorXd f = f0;
        f[0] = 0.0;
        f[n_ - 1] = 0.0;
        for (int k = 0; k < steps; ++k) {
            Eigen::VectorXd rhs = b_.apply(f);
            rhs[0] = 0.0;
            rhs[n_ - 1] = 0.0;
            a_.solve(rhs);
            f = rhs;
        }
        return f;
    }

  private:
    std::vector<double> y_;
    int n_;
    Band a_, b_;
};

/// Reference at the coarse sinh nodes: analytic initial sampler evaluated on
/// an r-times refined nested node set, dt/r^2, subsampled back.
template <class Fn>
Eigen::VectorXd refined_reference(Fn&& u0, int ny, double y_max, double c, double dt,
                                  int steps, int r) {
    const int ny_f = r * (ny - 1) + 1;
    const std::vector<double> yf = sinh_nodes(ny_f, y_max, c);
    Eigen::VectorXd f0(ny_f);
    for (int j = 0; j < ny_f; ++j) f0[j] = u0(yf[j]);
    CrankNicolson cn(yf, dt / (r * r));
    const Eigen::VectorXd ff = cn.evolve(f0, steps * r * r);
    Eigen::VectorXd out(ny);
    for (int j = 0; j < ny; ++j) out[j] = ff[j * r];
    return out;
}

} // namespace heat_oracle
