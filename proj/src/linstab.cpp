#include "prandtl/linstab.hpp"

#include <cmath>
#include <complex>

namespace prandtl {

namespace {

BandedLU build_diffusion_lu(const SpectralGrid& g, double dt) {
    const int ny = g.ny();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ny, ny);
    a(0, 0) = 1.0;
    a(ny - 1, ny - 1) = 1.0;
    for (int j = 1; j < ny - 1; ++j) {
        a(j, j) += 1.0;
        const int s = g.stencil_start(2, j);
        for (int m = 0; m < SpectralGrid::kStencil2; ++m)
            a(j, s + m) -= 0.5 * dt * g.stencil_weights(2)(j, m);
    }
    BandedLU lu;
    lu.factor_dense(a, 4, 4);
    return lu;
}

Eigen::VectorXcd cumtrapz(const SpectralGrid& g, const Eigen::VectorXcd& f) {
    Eigen::VectorXcd out(g.ny());
    out[0] = 0.0;
    for (int j = 1; j < g.ny(); ++j)
        out[j] = out[j - 1] +
                 0.5 * (g.y_nodes()[j] - g.y_nodes()[j - 1]) * (f[j] + f[j - 1]);
    return out;
}

} // namespace

ShearProfile make_nonmonotone_profile(const SpectralGrid& g) {
    ShearProfile p;
    const Profile& y = g.y_nodes();
    p.Us = y * (-0.5 * y.square()).exp();
    p.dUs = (1.0 - y.square()) * (-0.5 * y.square()).exp();
    p.d2Us = (y.cube() - 3.0 * y) * (-0.5 * y.square()).exp();
    p.monotone = false;
    p.critical_y = 1.0;
    return p;
}

ShearProfile make_monotone_profile(const SpectralGrid& g) {
    ShearProfile p;
    const Profile& y = g.y_nodes();
    const Profile rise = 1.0 - (-2.0 * y).exp();
    const Profile drise = 2.0 * (-2.0 * y).exp();
    const Profile d2rise = -4.0 * (-2.0 * y).exp();
    const Profile q = (y / 15.0).pow(4);
    const Profile env = (-q).exp();
    const Profile denv = env * (-4.0 * (y / 15.0).pow(3) / 15.0);
    const Profile d2env = env * ((4.0 * (y / 15.0).pow(3) / 15.0).square() -
                                 12.0 * (y / 15.0).square() / 225.0);
    p.Us = rise * env;
    p.dUs = drise * env + rise * denv;
    p.d2Us = d2rise * env + 2.0 * drise * denv + rise * d2env;
    p.monotone = true;
    p.critical_y = 0.0;
    return p;
}

double frozen_dispersion(double dUs_at_y0, double kx, double ky) {
    if (ky == 0.0) throw ContractViolation("frozen_dispersion: ky must be nonzero");
    return dUs_at_y0 * kx / ky - ky * ky;
}

// ---------------------------------------------------------------------------

LinearModeSolver::LinearModeSolver(std::shared_ptr<const SpectralGrid> grid,
                                   const ShearProfile& profile, double kx, double dt)
    : grid_(std::move(grid)), profile_(profile), kx_(kx), dt_(dt) {
    if (dt <= 0.0) throw ContractViolation("LinearModeSolver: dt must be > 0");
    lu_full_ = build_diffusion_lu(*grid_, dt);
    lu_half_ = build_diffusion_lu(*grid_, 0.5 * dt);
}

Eigen::VectorXcd LinearModeSolver::explicit_term(const Eigen::VectorXcd& u_hat) const {
    const SpectralGrid& g = *grid_;
    const std::complex<double> ik(0.0, kx_);
    const Eigen::VectorXcd v_hat = -ik * cumtrapz(g, u_hat);
    Eigen::VectorXcd n(g.ny());
    for (int j = 0; j < g.ny(); ++j)
        n[j] = ik * profile_.Us[j] * u_hat[j] + profile_.dUs[j] * v_hat[j];
    return n;
}

Eigen::VectorXcd LinearModeSolver::step(const Eigen::VectorXcd& u_hat) {
    const SpectralGrid& g = *grid_;
    if (u_hat.size() != g.ny())
        throw ContractViolation("LinearModeSolver::step: size mismatch");

    auto advance = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& n, double dt,
                       const BandedLU& lu) {
        Eigen::VectorXcd rhs(g.ny());
        rhs[0] = 0.0;
        rhs[g.ny() - 1] = 0.0;
        for (int j = 1; j < g.ny() - 1; ++j) {
            std::complex<double> diff = 0.0;
            const int st = g.stencil_start(2, j);
            for (int m = 0; m < SpectralGrid::kStencil2; ++m)
                diff += g.stencil_weights(2)(j, m) * u[st + m];
            rhs[j] = u[j] + 0.5 * dt * diff - dt * n[j];
        }
        lu.solve_in_place(rhs);
        rhs[0] = 0.0;
        rhs[g.ny() - 1] = 0.0;
        return rhs;
    };

    Eigen::VectorXcd next;
    if (!has_history_) {
        const Eigen::VectorXcd n0 = explicit_term(u_hat);
        const Eigen::VectorXcd half = advance(u_hat, n0, 0.5 * dt_, lu_half_);
        next = advance(u_hat, explicit_term(half), dt_, lu_full_);
        prev_ = n0;
        has_history_ = true;
    } else {
        const Eigen::VectorXcd n1 = explicit_term(u_hat);
        next = advance(u_hat, Eigen::VectorXcd(1.5 * n1 - 0.5 * prev_), dt_, lu_full_);
        prev_ = n1;
    }
    if (!next.allFinite())
        throw BlowUpError("linearized mode lost finiteness", 0.0);
    return next;
}

double LinearModeSolver::norm(const Eigen::VectorXcd& u_hat) const {
    const SpectralGrid& g = *grid_;
    double acc = 0.0;
    for (int j = 0; j < g.ny(); ++j) acc += g.y_weights()[j] * std::norm(u_hat[j]);
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------

Field linearized_step(const SpectralGrid& g, const Field& pert_u,
                      const ShearProfile& profile, double dt) {
    g.require_shape(pert_u, "linearized_step");
    if ((pert_u.col(0) != 0.0).any())
        throw ContractViolation("linearized_step: perturbation must vanish at the wall");

    Eigen::ArrayXXcd spec = x_spectrum(g, pert_u);
    auto grid_ptr = std::make_shared<const SpectralGrid>(g);
    for (int i = 0; i < g.nx(); ++i) {
        LinearModeSolver mode(grid_ptr, profile, g.wavenumber(i), dt);
        Eigen::VectorXcd u_hat = spec.row(i).transpose().matrix();
        u_hat = mode.step(u_hat);
        spec.row(i) = u_hat.array().transpose();
    }
    return x_field(g, spec);
}

GrowthResult growth_rate(std::shared_ptr<const SpectralGrid> grid,
                         const ShearProfile& profile, double kx, double horizon,
                         double dt, int n_seeds, std::uint64_t seed, double fit_window) {
    if (n_seeds < 1) throw ContractViolation("growth_rate: n_seeds must be >= 1");
    if (horizon <= 0.0) throw ContractViolation("growth_rate: horizon must be > 0");
    const SpectralGrid& g = *grid;
    const int ny = g.ny();
    const int n_steps = std::max(8, static_cast<int>(std::llround(horizon / dt)));

    GrowthResult best;
    const CounterRng rng(seed);
    for (int sd = 0; sd < n_seeds; ++sd) {
        const CounterRng r = rng.stream(sd);
        // smooth random seed in the layer, clamped at both walls
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ny);
        for (int m = 1; m <= 16; ++m) {
            const std::complex<double> c(r.normal(2 * m), r.normal(2 * m + 1));
            for (int j = 0; j < ny; ++j) {
                const double s = static_cast<double>(j) / (ny - 1);
                u[j] += c / double(m * m) * std::sin(M_PI * m * s) *
                        std::exp(-0.25 * g.y_nodes()[j]);
            }
        }
        u[0] = 0.0;
        u[ny - 1] = 0.0;

        LinearModeSolver mode(grid, profile, kx, dt);
        std::vector<double> times, lognorms;
        double logscale = 0.0;
        double n0 = mode.norm(u);
        if (n0 == 0.0) continue;
        u /= n0;
        times.push_back(0.0);
        lognorms.push_back(0.0);
        for (int k = 1; k <= n_steps; ++k) {
            u = mode.step(u);
            const double n = mode.norm(u);
            logscale += std::log(n);
            u /= n; // renormalized power iteration
            times.push_back(k * dt);
            lognorms.push_back(logscale);
        }

        // least squares on the trailing window
        const int lo = static_cast<int>((1.0 - fit_window) * n_steps);
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        int n = 0;
        for (size_t k = lo; k < times.size(); ++k) {
            sx += times[k];
            sy += lognorms[k];
            sxx += times[k] * times[k];
            sxy += times[k] * lognorms[k];
            syy += lognorms[k] * lognorms[k];
            ++n;
        }
        const double det = n * sxx - sx * sx;
        if (det <= 0.0) continue;
        const double slope = (n * sxy - sx * sy) / det;
        const double ss_tot = syy - sy * sy / n;
        const double mean_x = sx / n;
        double ss_res = 0.0;
        const double icept = (sy - slope * sx) / n;
        for (size_t k = lo; k < times.size(); ++k) {
            const double e = lognorms[k] - (icept + slope * times[k]);
            ss_res += e * e;
        }
        (void)mean_x;
        const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
        const GrowthResult cand{slope, r2, r2 >= 0.99};
        const bool replace =
            (sd == 0) || (cand.conclusive && !best.conclusive) ||
            (cand.conclusive == best.conclusive && cand.rate > best.rate);
        if (replace) best = cand;
    }
    return best;
}

ExponentFit fit_growth_exponent(const std::map<double, double>& rates) {
    std::vector<double> lx, ly;
    for (const auto& [k, sigma] : rates) {
        if (sigma > 0.0 && k > 0.0) {
            lx.push_back(std::log(k));
            ly.push_back(std::log(sigma));
        }
    }
    if (lx.size() < 4)
        throw InsufficientData("fit_growth_exponent: fewer than 4 positive rates");

    const int n = static_cast<int>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    ExponentFit fit;
    fit.used = n;
    const double det = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += e * e;
    }
    const double ss_tot = syy - sy * sy / n;
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace prandtl
