#pragma once

#include <Eigen/Dense>
#include <memory>

#include "prandtl/errors.hpp"

namespace prandtl {

/// 2-D field sampled on the tensor grid: entry (i, j) = f(x_i, y_j).
/// Columns are x-slices at fixed y, so x-FFTs act on contiguous memory and
/// y-stencils are whole-column linear combinations.
using Field = Eigen::ArrayXXd;
using Profile = Eigen::ArrayXd;

/// Periodic x-discretization (Fourier collocation) and graded y-discretization
/// of the strip T x [0, y_max], with trapezoid quadrature in y.
///
/// y-nodes follow y = y_max * sinh(c s) / sinh(c), s uniform in [0,1]; the
/// grading parameter c clusters nodes in the layer near y = 0.
class SpectralGrid {
  public:
    SpectralGrid(int nx, int ny, double y_max, double grading_c = 4.0,
                 double x_period = 2.0 * M_PI);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double x_period() const { return x_period_; }
    double y_max() const { return y_max_; }
    double grading_c() const { return grading_c_; }

    const Profile& x_nodes() const { return x_; }
    const Profile& y_nodes() const { return y_; }
    const Profile& y_weights() const { return wy_; }

    /// Integer wavenumber of spectrum bin i: 0,1,...,nx/2,-nx/2+1,...,-1.
    int wavenumber_index(int i) const { return i <= nx_ / 2 ? i : i - nx_; }
    /// Scaled wavenumber 2*pi*k / x_period of bin i.
    double wavenumber(int i) const {
        return 2.0 * M_PI * wavenumber_index(i) / x_period_;
    }

    double x_weight() const { return x_period_ / nx_; }

    void require_shape(const Field& f, const char* who) const;

    /// 4th-order FD stencils: order 1 uses 5 nodes, order 2 uses 6.
    static constexpr int kStencil1 = 5;
    static constexpr int kStencil2 = 6;
    /// Stencil start index and weights for row i (precomputed at construction).
    int stencil_start(int order, int i) const;
    const Eigen::MatrixXd& stencil_weights(int order) const;

  private:
    int nx_, ny_;
    double y_max_, grading_c_, x_period_;
    Profile x_, y_, wy_;
    Eigen::MatrixXd w1_, w2_;            // (ny x 5), (ny x 6) FD weights
    Eigen::VectorXi s1_, s2_;            // stencil starts
};

// --- differential operators -------------------------------------------------

/// Exact spectral d^order/dx^order via Fourier multiplier (i k)^order.
/// The Nyquist mode is zeroed for odd orders. dx(f, 0) returns f unchanged.
Field dx(const SpectralGrid& g, const Field& f, int order);

/// 4th-order finite-difference d/dy or d^2/dy^2 on the graded nodes,
/// one-sided at both walls. order must be 1 or 2.
Field dy(const SpectralGrid& g, const Field& f, int order);
Profile dy(const SpectralGrid& g, const Profile& f, int order);

/// One-sided derivative (order 1..3) of f in y, evaluated at the wall y = 0,
/// one value per x-node. Used by the boundary-identity diagnostics.
Profile wall_dy(const SpectralGrid& g, const Field& f, int order);

// --- quadrature ---------------------------------------------------------------

/// Running trapezoid integral F(x, y_j) = int_0^{y_j} f(x, .) dy.
Field cumulative_y(const SpectralGrid& g, const Field& f);
Profile cumulative_y(const SpectralGrid& g, const Profile& f);

/// 4th-order running integral (local cubic rule); used where the integrand
/// feeds further differentiation and trapezoid accuracy would dominate.
Field cumulative_y4(const SpectralGrid& g, const Field& f);
double total_y4(const SpectralGrid& g, const Profile& f);

/// Definite integral int_{y_from}^{y_to} f dy per column; y_to may be a single
/// height or one height per x-node. Off-node limits use the trapezoid rule on
/// the partial cell (linearly interpolated integrand). Orientation is signed:
/// swapping the limits flips the sign.
Profile integrate_y(const SpectralGrid& g, const Field& f, double y_from, double y_to);
Profile integrate_y(const SpectralGrid& g, const Field& f, double y_from,
                    const Profile& y_to_per_column);
double integrate_y(const SpectralGrid& g, const Profile& f, double y_from, double y_to);

// --- norms and spectra --------------------------------------------------------

/// L2 norm over T x [0, y_max] with an optional per-node y weight profile.
double l2_norm(const SpectralGrid& g, const Field& f);
double l2_norm_weighted(const SpectralGrid& g, const Field& f, const Profile& wy_extra);
double l2_norm(const SpectralGrid& g, const Profile& f);

/// Forward x-FFT of every y-slice (column i of the result is the spectrum at
/// y_i, unnormalized DFT). Inverse applies the 1/nx normalization.
Eigen::ArrayXXcd x_spectrum(const SpectralGrid& g, const Field& f);
Field x_field(const SpectralGrid& g, const Eigen::ArrayXXcd& spec);

/// Interpolate a field in y at one height per column (cubic, 4-point stencils).
Profile interp_y(const SpectralGrid& g, const Field& f, const Profile& y_at);
Profile interp_y(const SpectralGrid& g, const Field& f, double y_at);

} // namespace prandtl
