#include "prandtl/fields.hpp"

#include <cmath>
#include <sstream>

#include "prandtl/calibration.hpp"
#include "prandtl/numerics.hpp"

namespace prandtl {

void validate_state(const State& s, const StateCheckOptions& opt) {
    if (!s.grid) throw ContractViolation("State: missing grid");
    const SpectralGrid& g = *s.grid;
    g.require_shape(s.u, "State.u");
    g.require_shape(s.v, "State.v");
    g.require_shape(s.omega, "State.omega");

    if ((s.u.col(0) != 0.0).any()) throw ContractViolation("State: u(y=0) != 0");
    if ((s.v.col(0) != 0.0).any()) throw ContractViolation("State: v(y=0) != 0");
    if (opt.check_far_field && s.u.col(g.ny() - 1).abs().maxCoeff() >= 1e-8)
        throw ContractViolation("State: |u(y_max)| >= 1e-8");

    const double pair = l2_norm(g, Field(dy(g, s.u, 1) - s.omega));
    if (pair > opt.pair_tol)
        throw ContractViolation("State: || dy u - omega || = " + std::to_string(pair));
    const double div = l2_norm(g, Field(dx(g, s.u, 1) + dy(g, s.v, 1)));
    if (div > opt.div_tol)
        throw ContractViolation("State: || dx u + dy v || = " + std::to_string(div));
}

Field recover_v(const SpectralGrid& g, const Field& u) {
    g.require_shape(u, "recover_v");
    Field v = -cumulative_y(g, dx(g, u, 1));
    v.col(0).setZero();
    return v;
}

namespace {

Profile weight_profile(const SpectralGrid& g, double expo) {
    return (1.0 + g.y_nodes()).pow(expo);
}

} // namespace

double sobolev_weighted_norm(const SpectralGrid& g, const Profile& f, int s, double gamma) {
    if (s < 0 || gamma < 0.0)
        throw ContractViolation("sobolev_weighted_norm: need s >= 0 and gamma >= 0");
    if (s > 2)
        throw ContractViolation("sobolev_weighted_norm: profile variant supports s <= 2");
    double acc = 0.0;
    Profile d = f;
    for (int k = 0; k <= s; ++k) {
        if (k > 0) d = dy(g, d, 1);
        const double nk = l2_norm(g, Profile(weight_profile(g, gamma + k) * d));
        acc += nk * nk;
    }
    return std::sqrt(acc);
}

double sobolev_weighted_norm(const SpectralGrid& g, const Field& f, int s, double gamma) {
    if (s < 0 || gamma < 0.0)
        throw ContractViolation("sobolev_weighted_norm: need s >= 0 and gamma >= 0");
    double acc = 0.0;
    Field d = f;
    for (int k = 0; k <= s; ++k) {
        if (k > 0) d = dy(g, d, 1);
        const double nk = l2_norm_weighted(g, d, Profile(weight_profile(g, 2.0 * (gamma + k))));
        acc += nk * nk;
    }
    return std::sqrt(acc);
}

Eigen::MatrixXd calh_term_table(const SpectralGrid& g, const Field& omega,
                                double gamma, int s, int j1_max) {
    g.require_shape(omega, "calh_term_table");
    if (s < 0 || j1_max < 0 || gamma < 0.0)
        throw ContractViolation("calh_term_table: bad arguments");

    const int nx = g.nx();
    Eigen::MatrixXd table(s + 1, j1_max + 1);

    Field d = omega;
    for (int j2 = 0; j2 <= s; ++j2) {
        if (j2 > 0) d = dy(g, d, 1);
        Field weighted = d;
        const Profile w = weight_profile(g, gamma + j2);
        for (int j = 0; j < g.ny(); ++j) weighted.col(j) *= w[j];

        // Per-wavenumber y-integrated power: everything after this is a sum
        // over nx spectral bins, so the whole j1 family costs one FFT pass.
        const Eigen::ArrayXXcd spec = x_spectrum(g, weighted);
        Eigen::ArrayXd mode_power(nx);
        Eigen::ArrayXd col(g.ny());
        for (int k = 0; k < nx; ++k) {
            for (int j = 0; j < g.ny(); ++j)
                col[j] = g.y_weights()[j] * std::norm(spec(k, j));
            mode_power[k] = pairwise_sum(col);
        }

        const double parseval = g.x_weight() / nx; // P/nx^2
        Eigen::ArrayXd terms(nx);
        for (int j1 = 0; j1 <= j1_max; ++j1) {
            for (int k = 0; k < nx; ++k) {
                const double ksc = g.wavenumber(k);
                double mult = j1 == 0 ? 1.0 : std::pow(ksc * ksc, j1);
                if (k == nx / 2 && j1 % 2 == 1) mult = 0.0; // Nyquist, odd order
                terms[k] = mult * mode_power[k];
            }
            table(j2, j1) = parseval * pairwise_sum(terms);
        }
    }
    return table;
}

double calH_norm(const SpectralGrid& g, const Field& omega, int j, double gamma,
                 int s, bool homogeneous) {
    if (j < 0) throw ContractViolation("calH_norm: j must be >= 0");
    if (s < 0) throw ContractViolation("calH_norm: s must be >= 0");
    const int j2_hi = std::min(j, s);
    const int j2_lo = homogeneous ? 1 : 0;
    if (homogeneous && j == 0) return 0.0;
    const Eigen::MatrixXd table = calh_term_table(g, omega, gamma, j2_hi, j);
    double acc = 0.0;
    for (int j2 = j2_lo; j2 <= j2_hi; ++j2) acc += table(j2, j - j2);
    return std::sqrt(acc);
}

HardyReport hardy_check(const SpectralGrid& g, const Profile& f, double lambda,
                        double rel_slack) {
    if (f.size() != g.ny()) throw ContractViolation("hardy_check: profile size mismatch");
    if (lambda == -0.5) throw ContractViolation("hardy_check: lambda = -1/2 unsupported");

    HardyReport rep;
    const Profile fp = dy(g, f, 1);
    const double grad_term = l2_norm(g, Profile(weight_profile(g, lambda + 1.0) * fp));
    rep.lhs = l2_norm(g, Profile(weight_profile(g, lambda) * f));
    if (lambda > -0.5) {
        if (std::abs(f[g.ny() - 1]) >= 1e-8)
            throw ContractViolation("hardy_check: profile does not vanish at y_max");
        rep.rhs = 2.0 / (2.0 * lambda + 1.0) * grad_term;
    } else {
        rep.trace_variant = true;
        rep.rhs = std::sqrt(-1.0 / (2.0 * lambda + 1.0)) * std::abs(f[0]) -
                  2.0 / (2.0 * lambda + 1.0) * grad_term;
    }
    rep.holds = rep.lhs <= rep.rhs * (1.0 + rel_slack);
    return rep;
}

SobolevReport sobolev_check(const SpectralGrid& g, const Field& f) {
    g.require_shape(f, "sobolev_check");
    SobolevReport rep;
    rep.linf = f.abs().maxCoeff();
    const Field fx = dx(g, f, 1);
    rep.rhs = l2_norm(g, f) + l2_norm(g, fx) + l2_norm(g, Field(dy(g, f, 1))) +
              l2_norm(g, Field(dy(g, fx, 1)));
    rep.ratio = rep.rhs > 0.0 ? rep.linf / rep.rhs : 0.0;
    rep.holds = rep.ratio <= calib::kSobolevConstant;
    return rep;
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

void InitialDataSpec::validate() const {
    if (s < 8 || s % 2 != 0)
        throw ContractViolation("InitialDataSpec: s must be even and >= 8");
    if (gamma < 1.0) throw ContractViolation("InitialDataSpec: gamma must be >= 1");
    if (sigma < gamma + 0.5)
        throw ContractViolation("InitialDataSpec: sigma must be >= gamma + 1/2");
    if (delta <= 0.0) throw ContractViolation("InitialDataSpec: delta must be > 0");
    if (amplitude <= 0.0) throw ContractViolation("InitialDataSpec: amplitude must be > 0");
    if (!monotone) {
        if (a0_mean - std::abs(a0_amp) <= 0.0 || a0_mean + std::abs(a0_amp) >= 3.0)
            throw ContractViolation("InitialDataSpec: a0 range must stay inside (0, 3)");
        if (a0_mode < 0) throw ContractViolation("InitialDataSpec: a0_mode must be >= 0");
    }
}

namespace {

struct BoundFailure {
    std::string name;
    double worst = 0.0;
    double at_y = 0.0;
};

// (H')-style node checks for y > y_split, with the doubled t=0 margin.
void check_vorticity_bounds(const SpectralGrid& g, const Field& omega,
                            const InitialDataSpec& sp) {
    struct Entry { int ax, ay; };
    const Entry derivs[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

    const Profile& y = g.y_nodes();
    for (const auto& d : derivs) {
        Field f = omega;
        if (d.ax > 0) f = dx(g, f, d.ax);
        for (int r = 0; r < d.ay; ++r) f = dy(g, f, 1);
        for (int j = 0; j < g.ny(); ++j) {
            if (y[j] <= sp.y_split) continue;
            const double wup = std::pow(1.0 + y[j], sp.sigma + d.ay);
            const double cap = 1.0 / (2.0 * sp.delta);
            for (int i = 0; i < g.nx(); ++i) {
                const double v = std::abs(f(i, j)) * wup;
                if (v > cap) {
                    std::ostringstream os;
                    os << "initial data violates upper vorticity bound for d^(" << d.ax
                       << "," << d.ay << "): |d omega| (1+y)^(sigma+" << d.ay << ") = " << v
                       << " > 1/(2 delta) = " << cap << " at y = " << y[j];
                    throw GenerationError(os.str());
                }
            }
        }
    }
    for (int j = 0; j < g.ny(); ++j) {
        if (y[j] <= sp.y_split) continue;
        const double wlo = std::pow(1.0 + y[j], sp.sigma);
        for (int i = 0; i < g.nx(); ++i) {
            const double v = std::abs(omega(i, j)) * wlo;
            if (v < 2.0 * sp.delta) {
                std::ostringstream os;
                os << "initial data violates lower vorticity bound: |omega| (1+y)^sigma = "
                   << v << " < 2 delta = " << 2.0 * sp.delta << " at y = " << y[j];
                throw GenerationError(os.str());
            }
        }
    }
}

void check_root_structure(const SpectralGrid& g, const Field& omega, const Profile& a0) {
    const Profile& y = g.y_nodes();
    const Field om_y = dy(g, omega, 1);
    for (int i = 0; i < g.nx(); ++i) {
        int sign_changes = 0;
        for (int j = 0; j + 1 < g.ny(); ++j) {
            if (y[j + 1] >= 3.0) break;
            if (omega(i, j) == 0.0) continue;
            if (omega(i, j) * omega(i, j + 1) < 0.0) ++sign_changes;
        }
        if (sign_changes != 1)
            throw GenerationError("initial data: expected exactly one sign change below "
                                  "y = 3, found " + std::to_string(sign_changes));
        std::vector<double> row(g.ny());
        for (int j = 0; j < g.ny(); ++j) row[j] = om_y(i, j);
        std::span<const double> ys(y.data(), static_cast<size_t>(g.ny()));
        const int first = centered_stencil_start(ys, a0[i], 4);
        const double slope = lagrange_value(ys, row, first, 4, a0[i]);
        if (slope <= 0.0)
            throw GenerationError("initial data: dy omega <= 0 on the critical curve");
    }
}

} // namespace

GeneratedData make_initial_data(std::shared_ptr<const SpectralGrid> grid,
                                const InitialDataSpec& spec) {
    spec.validate();
    const SpectralGrid& g = *grid;
    const Profile& y = g.y_nodes();

    GeneratedData out;
    out.monotone = spec.monotone;

    if (spec.monotone) {
        // Strictly positive shear, one power slower in decay so the lower
        // vorticity bound still holds without any root.
        Field omega(g.nx(), g.ny());
        for (int j = 0; j < g.ny(); ++j) {
            const double val = spec.amplitude * (1.0 + std::tanh(y[j])) *
                               std::pow(1.0 + y[j], -spec.sigma);
            omega.col(j).setConstant(val);
        }
        check_vorticity_bounds(g, omega, spec);
        State s;
        s.t = 0.0;
        s.omega = omega;
        s.u = cumulative_y4(g, omega);
        s.v = recover_v(g, s.u);
        s.grid = grid;
        validate_state(s, StateCheckOptions{.check_far_field = false});
        out.state = std::move(s);
        return out;
    }

    Profile a0(g.nx());
    for (int i = 0; i < g.nx(); ++i)
        a0[i] = spec.a0_mean + spec.a0_amp * std::sin(spec.a0_mode * g.x_nodes()[i]);

    // Envelope and the bounded correction channel used to zero each column's
    // integral (so u has a homogeneous far field on the discrete grid).
    Profile phi(g.ny()), zeta(g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        phi[j] = spec.amplitude * (1.0 + std::tanh(y[j])) *
                 std::pow(1.0 + y[j], -spec.sigma - 1.0);
        zeta[j] = std::tanh((y[j] - spec.a0_mean) / 1.5);
    }

    Field omega(g.nx(), g.ny());
    for (int i = 0; i < g.nx(); ++i) {
        Eigen::ArrayXd base = (y - a0[i]) * phi;
        const double s0 = total_y4(g, Profile(base));
        const double s1 = total_y4(g, Profile(base * zeta));
        if (std::abs(s1) < 1e-6)
            throw GenerationError("initial data: correction channel degenerate (s1 ~ 0)");
        const double beta = -s0 / s1;
        const Eigen::ArrayXd factor = 1.0 + beta * zeta;
        if (factor.minCoeff() < 0.05)
            throw GenerationError("initial data: envelope positivity margin violated "
                                  "(1 + beta zeta < 0.05); reduce a0_amp");
        omega.row(i) = (base * factor).transpose();
    }

    check_root_structure(g, omega, a0);
    check_vorticity_bounds(g, omega, spec);

    State s;
    s.t = 0.0;
    s.omega = omega;
    s.u = cumulative_y4(g, omega);
    // Rounding in the running sum can leave ~1e-17 at the far edge; the far
    // field is meant to be exactly homogeneous, so pin it.
    s.u.col(g.ny() - 1).setZero();
    s.v = recover_v(g, s.u);
    s.grid = grid;
    validate_state(s);

    out.state = std::move(s);
    out.a0 = std::move(a0);
    return out;
}

} // namespace prandtl
