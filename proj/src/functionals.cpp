#include "prandtl/functionals.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "prandtl/numerics.hpp"

namespace prandtl {

namespace {

double bump_transition(double q) {
    // 1 for q <= 0, exp(1 - 1/(1-q^2)) on (0,1), 0 for q >= 1.
    if (q <= 0.0) return 1.0;
    if (q >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - q * q));
}

std::complex<double> dx_multiplier(const SpectralGrid& g, int bin, int order) {
    if (order == 0) return 1.0;
    const std::complex<double> iu(0.0, 1.0);
    if (bin == g.nx() / 2 && order % 2 == 1) return 0.0;
    return std::pow(iu * g.wavenumber(bin), order);
}

/// dx^j f recovered from a precomputed spectrum (one inverse FFT pass).
Field dxj(const SpectralGrid& g, const Eigen::ArrayXXcd& spec, int order) {
    Eigen::ArrayXXcd s = spec;
    Eigen::VectorXcd mult(g.nx());
    for (int i = 0; i < g.nx(); ++i) mult[i] = dx_multiplier(g, i, order);
    for (int j = 0; j < g.ny(); ++j) s.col(j) *= mult.array();
    return x_field(g, s);
}

} // namespace

double Cutoffs::chi(double p) const {
    return bump_transition((std::abs(p) - chi_r1) / (chi_r2 - chi_r1));
}

double Cutoffs::psi(double y) const {
    return bump_transition((y - psi_on) / (psi_off - psi_on));
}

// ---------------------------------------------------------------------------
// Critical curve
// ---------------------------------------------------------------------------

CriticalCurve find_critical_curve(const SpectralGrid& g, const Field& omega) {
    g.require_shape(omega, "find_critical_curve");
    const Profile& y = g.y_nodes();
    std::span<const double> ys(y.data(), static_cast<size_t>(g.ny()));

    CriticalCurve curve;
    curve.a.resize(g.nx());
    curve.dy_omega_on_curve.resize(g.nx());

    const Field om_y = dy(g, omega, 1);
    int with_root = 0, without_root = 0;
    std::vector<double> row(g.ny()), row_dy(g.ny());

    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            row[j] = omega(i, j);
            row_dy[j] = om_y(i, j);
        }
        // bracket sign changes strictly below y = 3
        int bracket = -1, count = 0;
        for (int j = 0; j + 1 < g.ny() && y[j + 1] < 3.0; ++j) {
            if (row[j] == 0.0 && y[j] > 0.0) { bracket = std::max(j - 1, 0); ++count; }
            else if (row[j] * row[j + 1] < 0.0) { bracket = j; ++count; }
        }
        if (count > 1)
            throw HypothesisViolation("find_critical_curve: multiple sign changes in column " +
                                      std::to_string(i));
        if (count == 0) { ++without_root; continue; }
        ++with_root;

        // quadratic first guess from the three nodes around the bracket
        const int q0 = std::clamp(bracket - 1, 0, g.ny() - 3);
        double lo = y[bracket], hi = y[bracket + 1];
        double guess = 0.5 * (lo + hi);
        {
            // Newton on the local quadratic through (q0, q0+1, q0+2)
            for (int it = 0; it < 4; ++it) {
                const double f = lagrange_value(ys, row, q0, 3, guess);
                const double fp = (lagrange_value(ys, row, q0, 3, guess + 1e-7) - f) / 1e-7;
                if (fp == 0.0) break;
                guess = std::clamp(guess - f / fp, lo, hi);
            }
        }
        // bisection on the cubic interpolant: robust and h^4-accurate
        const int c0 = centered_stencil_start(ys, guess, 4);
        double flo = lagrange_value(ys, row, c0, 4, lo);
        double fhi = lagrange_value(ys, row, c0, 4, hi);
        if (flo * fhi > 0.0) { flo = row[bracket]; fhi = row[bracket + 1]; }
        for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = lagrange_value(ys, row, c0, 4, mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if (flo * fm < 0.0) { hi = mid; fhi = fm; }
            else { lo = mid; flo = fm; }
        }
        curve.a[i] = 0.5 * (lo + hi);
        const int d0 = centered_stencil_start(ys, curve.a[i], 4);
        curve.dy_omega_on_curve[i] = lagrange_value(ys, row_dy, d0, 4, curve.a[i]);
        if (curve.dy_omega_on_curve[i] <= 0.0)
            throw HypothesisViolation("find_critical_curve: dy omega <= 0 on the curve "
                                      "(degenerate critical point) in column " +
                                      std::to_string(i));
    }

    if (with_root == 0) {
        curve.valid = false;
        curve.a.resize(0);
        curve.dy_omega_on_curve.resize(0);
        return curve;
    }
    if (without_root > 0)
        throw HypothesisViolation("find_critical_curve: root presence differs across columns");
    curve.valid = true;
    return curve;
}

CriticalCurve evolve_critical_curve(const SpectralGrid& g, const CriticalCurve& curve,
                                    const Field& omega, const Field& dt_omega, double dt) {
    if (!curve.valid)
        throw ContractViolation("evolve_critical_curve: curve is invalid");
    g.require_shape(omega, "evolve_critical_curve");
    g.require_shape(dt_omega, "evolve_critical_curve");

    const Field om_y = dy(g, omega, 1);
    const Profile& y = g.y_nodes();
    std::span<const double> ys(y.data(), static_cast<size_t>(g.ny()));

    auto rate = [&](int i, double a, const std::vector<double>& wt,
                    const std::vector<double>& wy) {
        const int f0 = centered_stencil_start(ys, a, 4);
        const double num = lagrange_value(ys, wt, f0, 4, a);
        const double den = lagrange_value(ys, wy, f0, 4, a);
        if (std::abs(den) < 1e-6)
            throw HypothesisViolation("evolve_critical_curve: dy omega below 1e-6 at column " +
                                      std::to_string(i));
        return num / den;
    };

    CriticalCurve next = curve;
    std::vector<double> wt(g.ny()), wy(g.ny());
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            wt[j] = dt_omega(i, j);
            wy[j] = om_y(i, j);
        }
        const double a = curve.a[i];
        const double mid = a - 0.5 * dt * rate(i, a, wt, wy);
        next.a[i] = a - dt * rate(i, mid, wt, wy);
        const int d0 = centered_stencil_start(ys, next.a[i], 4);
        next.dy_omega_on_curve[i] = lagrange_value(ys, wy, d0, 4, next.a[i]);
    }
    return next;
}

// ---------------------------------------------------------------------------
// Pointwise quantities
// ---------------------------------------------------------------------------

Field compute_hj(const SpectralGrid& g, const Field& omega, int j,
                 const CriticalCurve& curve, const Cutoffs& cut) {
    g.require_shape(omega, "compute_hj");
    if (j < 0) throw ContractViolation("compute_hj: j must be >= 0");
    if (!curve.valid) return Field::Zero(g.nx(), g.ny());

    const Field om_y = dy(g, omega, 1);
    const Field om_xj = dx(g, omega, j);
    Field h = Field::Zero(g.nx(), g.ny());
    for (int i = 0; i < g.nx(); ++i) {
        for (int jj = 0; jj < g.ny(); ++jj) {
            const double c = cut.chi(g.y_nodes()[jj] - curve.a[i]);
            if (c == 0.0) continue;
            if (om_y(i, jj) <= 0.0) {
                std::ostringstream os;
                os << "compute_hj: dy omega <= 0 inside the chi support at node (" << i
                   << ", " << jj << "), y = " << g.y_nodes()[jj]
                   << "; narrow the cutoff (chi_r2)";
                throw HypothesisViolation(os.str());
            }
            h(i, jj) = c * om_xj(i, jj) / std::sqrt(om_y(i, jj));
        }
    }
    return h;
}

Field compute_gj(const SpectralGrid& g, const Field& omega, const Field& u, int j,
                 const Cutoffs& cut, const HypothesisParams& hypo) {
    g.require_shape(omega, "compute_gj");
    g.require_shape(u, "compute_gj");
    if (j < 0) throw ContractViolation("compute_gj: j must be >= 0");

    const Field om_y = dy(g, omega, 1);
    const Field om_xj = dx(g, omega, j);
    const Field u_xj = dx(g, u, j);

    Field out(g.nx(), g.ny());
    for (int jj = 0; jj < g.ny(); ++jj) {
        const double yv = g.y_nodes()[jj];
        const double p = cut.psi(yv);
        const double floor = 0.5 * hypo.delta * std::pow(1.0 + yv, -hypo.sigma);
        for (int i = 0; i < g.nx(); ++i) {
            const double near = omega(i, jj) * om_xj(i, jj) - om_y(i, jj) * u_xj(i, jj);
            double far = 0.0;
            if (p < 1.0) {
                if (std::abs(omega(i, jj)) < floor) {
                    std::ostringstream os;
                    os << "compute_gj: |omega| = " << std::abs(omega(i, jj))
                       << " under half the hypothesis floor " << 2.0 * floor
                       << " at y = " << yv << " (psi < 1 region)";
                    throw HypothesisViolation(os.str());
                }
                far = om_xj(i, jj) - om_y(i, jj) / omega(i, jj) * u_xj(i, jj);
            }
            out(i, jj) = p * near + (1.0 - p) * far;
        }
    }
    return out;
}

Field compute_tilde_gj(const SpectralGrid& g, const Field& omega, const Field& u, int j) {
    g.require_shape(omega, "compute_tilde_gj");
    g.require_shape(u, "compute_tilde_gj");
    if (j < 5) return Field::Zero(g.nx(), g.ny());
    const Field core = omega * dx(g, omega, 5) - dy(g, omega, 1) * dx(g, u, 5);
    return dx(g, core, j - 5);
}

std::pair<Field, Field> compute_bar_hat_g(const SpectralGrid& g, const Field& omega,
                                          const Field& u, int k) {
    g.require_shape(omega, "compute_bar_hat_g");
    g.require_shape(u, "compute_bar_hat_g");
    if (k < 1 || k > 5) throw ContractViolation("compute_bar_hat_g: need 1 <= k <= 5");
    const Field om_y = dy(g, omega, 1);
    Field bar = omega * dx(g, omega, k) - om_y * dx(g, u, k);
    Field hat = omega * dx(g, om_y, k - 1) - om_y * dx(g, omega, k - 1);
    return {std::move(bar), std::move(hat)};
}

Profile compute_Cj(const SpectralGrid& g, const Field& omega, const Field& u, int j,
                   double y_split) {
    g.require_shape(omega, "compute_Cj");
    g.require_shape(u, "compute_Cj");
    const Profile om_at = interp_y(g, omega, y_split);
    const Profile u_at = interp_y(g, dx(g, u, j), y_split);
    Profile out(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
        if (std::abs(om_at[i]) < 1e-10)
            throw HypothesisViolation("compute_Cj: |omega(x, y_split)| < 1e-10 at column " +
                                      std::to_string(i));
        out[i] = -u_at[i] / om_at[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------


Field reconstruct_dxju(const SpectralGrid& g, const Field& g_j, const Field& omega,
                       const CriticalCurve& curve, const Cutoffs& cut, int j,
                       const Profile& c_j, double band, double y_split) {
    g.require_shape(g_j, "reconstruct_dxju");
    g.require_shape(omega, "reconstruct_dxju");
    if (c_j.size() != g.nx())
        throw ContractViolation("reconstruct_dxju: c_j size mismatch");
    if (band < 0.0) band = 0.5 * cut.chi_r1;
    (void)j;

    const int ny = g.ny();
    const Profile& y = g.y_nodes();
    std::span<const double> ys(y.data(), static_cast<size_t>(ny));
    const Field om_y = dy(g, omega, 1);

    // psi-weighted combination: the integrand of d/dy (dx^j u / omega) is
    // g_j / (omega * (psi omega + 1 - psi)) everywhere.
    Profile psi(ny);
    for (int jj = 0; jj < ny; ++jj) psi[jj] = cut.psi(y[jj]);

    Field out(g.nx(), ny);

    std::vector<double> G(ny), F(ny), nOverOm(ny), run(ny), runInner(ny);
    for (int i = 0; i < g.nx(); ++i) {
        if (!curve.valid) {
            // no zero of omega: single global integral from 0
            for (int jj = 0; jj < ny; ++jj) {
                const double psit = psi[jj] * omega(i, jj) + 1.0 - psi[jj];
                G[jj] = g_j(i, jj) / (omega(i, jj) * psit);
            }
            cubic_running_integral(ys, G, 0, ny - 1, run);
            for (int jj = 0; jj < ny; ++jj) out(i, jj) = omega(i, jj) * run[jj];
            continue;
        }

        const double a = curve.a[i];
        const double w = 0.8 * cut.chi_r2; // inner window, inside the checked chi support

        // raw integrand, defined away from the curve
        for (int jj = 0; jj < ny; ++jj) {
            const double dist = std::abs(y[jj] - a);
            if (dist < 0.5 * band) { G[jj] = 0.0; continue; }
            const double psit = psi[jj] * omega(i, jj) + 1.0 - psi[jj];
            G[jj] = g_j(i, jj) / (omega(i, jj) * psit);
        }

        // window node bands
        int jR = ny - 1; // first node with y >= a + w
        for (int jj = 0; jj < ny; ++jj)
            if (y[jj] >= a + w) { jR = jj; break; }
        int jL = 0; // last node with y <= a - w
        for (int jj = ny - 1; jj >= 0; --jj)
            if (y[jj] <= a - w) { jL = jj; break; }
        const int inner_lo = std::max(jL - 3, 0);
        const int inner_hi = std::min(jR + 3, ny - 1);

        // Desingularized form near the curve:
        //   int G = [-F/omega] + int (dy F)/omega,  F = g_j / dy omega.
        // dy F vanishes on the curve, so the new integrand is regular there.
        std::fill(F.begin(), F.end(), 0.0);
        for (int jj = inner_lo; jj <= inner_hi; ++jj) {
            if (om_y(i, jj) <= 1e-12)
                throw HypothesisViolation(
                    "reconstruct_dxju: dy omega not positive near the curve at column " +
                    std::to_string(i));
            F[jj] = g_j(i, jj) / om_y(i, jj);
        }
        std::fill(nOverOm.begin(), nOverOm.end(), 0.0);
        for (int jj = inner_lo + 2; jj <= inner_hi - 2; ++jj) {
            const int s = g.stencil_start(1, jj);
            double n = 0.0;
            for (int m = 0; m < SpectralGrid::kStencil1; ++m)
                n += g.stencil_weights(1)(jj, m) * F[s + m];
            const double om = omega(i, jj);
            nOverOm[jj] = std::abs(om) > 1e-12 ? n / om : 0.0;
        }

        cubic_running_integral(ys, G, 0, ny - 1, run); // run[k] = int_{y_0}^{y_k} G
        cubic_running_integral(ys, nOverOm, 0, ny - 1, runInner);

        // int_{y_0}^{y_split} G: nodal part plus the partial segment
        int jS = 0; // last node with y <= y_split
        for (int jj = ny - 1; jj >= 0; --jj)
            if (y[jj] <= y_split) { jS = jj; break; }
        double run_split = run[jS];
        if (jS + 1 < ny && y_split > y[jS]) {
            const double mid = 0.5 * (y[jS] + y_split), half = 0.5 * (y_split - y[jS]);
            const double d = half / std::sqrt(3.0);
            const int first = std::clamp(jS - 1, 0, ny - 4);
            run_split += half * (lagrange_value(ys, G, first, 4, mid - d) +
                                 lagrange_value(ys, G, first, 4, mid + d));
        }

        for (int jj = 0; jj < ny; ++jj) {
            const double dist = y[jj] - a;
            if (std::abs(dist) < band) { out(i, jj) = 0.0; continue; } // filled below
            double integral;
            if (dist > 0 && jj >= jR) {
                integral = run[jj] - run_split; // int_{y_split}^{y}
            } else if (dist > 0) {
                const double bp = (-F[jj] / omega(i, jj)) - (-F[jR] / omega(i, jR));
                integral = (run[jR] - run_split) + bp + (runInner[jj] - runInner[jR]);
            } else if (jj <= jL) {
                integral = run[jj]; // int_0^{y}
            } else {
                const double bp = (-F[jj] / omega(i, jj)) - (-F[jL] / omega(i, jL));
                integral = run[jL] + bp + (runInner[jj] - runInner[jL]);
            }
            // evaluating the decomposition at y = y_split forces the anchor
            // term to carry the opposite sign of c_j = -dx^j u / omega there
            out(i, jj) = omega(i, jj) * integral - (dist > 0 ? c_j[i] * omega(i, jj) : 0.0);
        }

        // fill the excluded band by cubic interpolation across it
        int lo = -1, hi = ny;
        for (int jj = 0; jj < ny; ++jj) {
            if (y[jj] <= a - band) lo = jj;
            if (y[jj] >= a + band) { hi = jj; break; }
        }
        if (lo >= 1 && hi <= ny - 2) {
            const double xs[4] = {y[lo - 1], y[lo], y[hi], y[hi + 1]};
            const double fs[4] = {out(i, lo - 1), out(i, lo), out(i, hi), out(i, hi + 1)};
            for (int jj = lo + 1; jj < hi; ++jj)
                out(i, jj) = lagrange_value(xs, fs, 0, 4, y[jj]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

namespace {

GevreySeq seq_from_table(const Eigen::MatrixXd& table, int j_max, int s, int j2_lo) {
    GevreySeq seq;
    seq.values.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        double acc = 0.0;
        for (int j2 = j2_lo; j2 <= std::min(j, s); ++j2) acc += table(j2, j - j2);
        seq.values[j] = std::sqrt(acc);
    }
    return seq;
}

void require_finite(const GevreySeq& seq, const char* family) {
    for (int j = 0; j < seq.values.size(); ++j)
        if (!std::isfinite(seq.values[j]))
            throw ContractViolation(std::string("energies: non-finite entry in family ") +
                                    family + " at j = " + std::to_string(j));
}

} // namespace

EnergyEvaluation energies(const State& state, const CriticalCurve& curve,
                          const Cutoffs& cut, const GevreyWeight& w,
                          const EnergyOptions& opt, const HypothesisParams& hypo) {
    const SpectralGrid& g = *state.grid;
    const int jm = opt.j_max;
    if (jm < 5) throw ContractViolation("energies: j_max must be >= 5");

    EnergyFamilies fam;

    // the zero snapshot has every functional equal to zero by definition
    if (state.omega.abs().maxCoeff() == 0.0 && state.u.abs().maxCoeff() == 0.0) {
        for (GevreySeq* s : {&fam.omega_full, &fam.omega_dot, &fam.omega_dot_diss, &fam.h,
                             &fam.h_diss, &fam.g1, &fam.g1_diss, &fam.g2, &fam.g2_diss})
            s->values = Eigen::ArrayXd::Zero(jm + 1);
        EnergyEvaluation ev;
        ev.families = std::move(fam);
        ev.report = assemble_report(ev.families, w, opt.alpha, state.t);
        return ev;
    }

    // vorticity families via the spectral term table
    const Eigen::MatrixXd t_om = calh_term_table(g, state.omega, opt.gamma, opt.s, jm);
    fam.omega_full = seq_from_table(t_om, jm, opt.s, 0);
    fam.omega_dot = seq_from_table(t_om, jm, opt.s, 1);
    const Eigen::MatrixXd t_dy =
        calh_term_table(g, Field(dy(g, state.omega, 1)), opt.gamma, opt.s, jm);
    fam.omega_dot_diss = seq_from_table(t_dy, jm, opt.s, 1);

    const Profile wgam = (1.0 + g.y_nodes()).pow(2.0 * opt.gamma);

    fam.h.values.resize(jm + 1);
    fam.h_diss.values.resize(jm + 1);
    fam.g1.values.resize(jm + 1);
    fam.g1_diss.values.resize(jm + 1);
    fam.g2.values.resize(jm + 1);
    fam.g2_diss.values.resize(jm + 1);

    // batched x-derivatives
    const Eigen::ArrayXXcd spec_om = x_spectrum(g, state.omega);
    const Eigen::ArrayXXcd spec_u = x_spectrum(g, state.u);
    const Field om_y = dy(g, state.omega, 1);

    // chi mask and 1/sqrt(dy omega) on its support
    Field chi_mask = Field::Zero(g.nx(), g.ny());
    Field inv_sqrt = Field::Zero(g.nx(), g.ny());
    if (curve.valid) {
        for (int i = 0; i < g.nx(); ++i)
            for (int jj = 0; jj < g.ny(); ++jj) {
                const double c = cut.chi(g.y_nodes()[jj] - curve.a[i]);
                if (c == 0.0) continue;
                if (om_y(i, jj) <= 0.0)
                    throw HypothesisViolation(
                        "energies: dy omega <= 0 inside the chi support");
                chi_mask(i, jj) = c;
                inv_sqrt(i, jj) = 1.0 / std::sqrt(om_y(i, jj));
            }
    }

    Profile psi(g.ny());
    for (int jj = 0; jj < g.ny(); ++jj) psi[jj] = cut.psi(g.y_nodes()[jj]);
    // hypothesis floor where psi < 1
    for (int jj = 0; jj < g.ny(); ++jj) {
        if (psi[jj] >= 1.0) continue;
        const double floor = 0.5 * hypo.delta * std::pow(1.0 + g.y_nodes()[jj], -hypo.sigma);
        for (int i = 0; i < g.nx(); ++i)
            if (std::abs(state.omega(i, jj)) < floor)
                throw HypothesisViolation("energies: vorticity under the hypothesis floor "
                                          "in the far region");
    }

    const Field gtilde_core =
        state.omega * dxj(g, spec_om, 5) - om_y * dxj(g, spec_u, 5);
    const Eigen::ArrayXXcd spec_core = x_spectrum(g, gtilde_core);

    for (int j = 0; j <= jm; ++j) {
        const Field om_xj = dxj(g, spec_om, j);
        const Field u_xj = dxj(g, spec_u, j);

        const Field h = chi_mask * om_xj * inv_sqrt;
        fam.h.values[j] = l2_norm(g, h);
        fam.h_diss.values[j] = l2_norm(g, Field(dy(g, h, 1)));

        Field gj(g.nx(), g.ny());
        for (int jj = 0; jj < g.ny(); ++jj) {
            const double p = psi[jj];
            for (int i = 0; i < g.nx(); ++i) {
                const double near =
                    state.omega(i, jj) * om_xj(i, jj) - om_y(i, jj) * u_xj(i, jj);
                const double far =
                    p < 1.0 ? om_xj(i, jj) -
                                  om_y(i, jj) / state.omega(i, jj) * u_xj(i, jj)
                            : 0.0;
                gj(i, jj) = p * near + (1.0 - p) * far;
            }
        }
        fam.g1.values[j] = l2_norm_weighted(g, gj, wgam);
        fam.g1_diss.values[j] = l2_norm_weighted(g, Field(dy(g, gj, 1)), wgam);

        if (j < 5) {
            fam.g2.values[j] = 0.0;
            fam.g2_diss.values[j] = 0.0;
        } else {
            const Field gt = dxj(g, spec_core, j - 5);
            fam.g2.values[j] = std::pow(j + 1.0, 0.75) * l2_norm(g, gt);
            fam.g2_diss.values[j] =
                std::pow(double(j), 0.75) * l2_norm(g, Field(dy(g, gt, 1)));
        }
    }

    require_finite(fam.omega_full, "E_omega");
    require_finite(fam.omega_dot, "E_dot_omega");
    require_finite(fam.omega_dot_diss, "D_dot_omega");
    require_finite(fam.h, "E_h");
    require_finite(fam.h_diss, "D_h");
    require_finite(fam.g1, "E_g1");
    require_finite(fam.g1_diss, "D_g1");
    require_finite(fam.g2, "E_g2");
    require_finite(fam.g2_diss, "D_g2");

    EnergyEvaluation ev;
    ev.families = std::move(fam);
    ev.report = assemble_report(ev.families, w, opt.alpha, state.t);
    return ev;
}

EnergyReport assemble_report(const EnergyFamilies& fam, const GevreyWeight& w,
                             double alpha, double t) {
    EnergyReport r;
    r.t = t;
    r.tau = w.tau;
    r.E_omega = weighted_square_sum(fam.omega_full, w);
    r.E_dot_omega = weighted_square_sum(fam.omega_dot, w);
    r.E_h = weighted_square_sum(fam.h, w);
    r.E_g1 = weighted_square_sum(fam.g1, w);
    r.E_g2 = weighted_square_sum(fam.g2, w);
    r.D_dot_omega = weighted_square_sum(fam.omega_dot_diss, w);
    r.D_h = weighted_square_sum(fam.h_diss, w);
    r.D_g1 = weighted_square_sum(fam.g1_diss, w);
    r.D_g2 = weighted_square_sum(fam.g2_diss, w);
    r.calE_alpha = r.E_dot_omega + r.E_h + r.E_g1 + alpha * r.E_g2;
    r.dtau_calE = dtau_lp2(fam.omega_dot, w).exact + dtau_lp2(fam.h, w).exact +
                  dtau_lp2(fam.g1, w).exact + alpha * dtau_lp2(fam.g2, w).exact;
    return r;
}

RelationsReport relations_check(const EnergyFamilies& fam, const GevreyWeight& w) {
    RelationsReport rep;
    const double eo = weighted_square_sum(fam.omega_full, w);
    const double ed = weighted_square_sum(fam.omega_dot, w);
    const double eh = weighted_square_sum(fam.h, w);
    const double eg = weighted_square_sum(fam.g1, w);
    const double lhs = eo - ed;
    const double rhs = eg + eh;
    if (lhs < 1e-300 || rhs < 1e-300) {
        rep.indeterminate = true;
        return rep;
    }
    rep.r1 = lhs / rhs;
    rep.r2 = rhs / lhs;
    const double dlhs = dtau_lp2(fam.omega_full, w).exact - dtau_lp2(fam.omega_dot, w).exact;
    const double drhs = dtau_lp2(fam.g1, w).exact + dtau_lp2(fam.h, w).exact;
    if (dlhs < 1e-300 || drhs < 1e-300) {
        rep.indeterminate = true;
        return rep;
    }
    rep.r1_tau = dlhs / drhs;
    rep.r2_tau = drhs / dlhs;
    return rep;
}

std::vector<LemmaReport> appendix_lemma_suite(const State& state,
                                              const CriticalCurve& curve,
                                              const Cutoffs& cut, const GevreyWeight& w,
                                              const EnergyOptions& opt,
                                              const HypothesisParams& hypo) {
    const SpectralGrid& g = *state.grid;
    const int jm = opt.j_max;
    const Eigen::ArrayXXcd spec_om = x_spectrum(g, state.omega);
    const Eigen::ArrayXXcd spec_u = x_spectrum(g, state.u);
    const Field om_y = dy(g, state.omega, 1);

    // indicator weight for the {y <= y_split} window
    Profile near_w(g.ny());
    for (int jj = 0; jj < g.ny(); ++jj)
        near_w[jj] = g.y_nodes()[jj] <= hypo.y_split ? 1.0 : 0.0;

    Profile psi(g.ny());
    for (int jj = 0; jj < g.ny(); ++jj) psi[jj] = cut.psi(g.y_nodes()[jj]);

    const Eigen::MatrixXd t_om = calh_term_table(g, state.omega, opt.gamma, opt.s, jm + 2);
    GevreySeq om_full = seq_from_table(t_om, jm + 2, opt.s, 0);

    Field chi_mask = Field::Zero(g.nx(), g.ny());
    if (curve.valid)
        for (int i = 0; i < g.nx(); ++i)
            for (int jj = 0; jj < g.ny(); ++jj)
                chi_mask(i, jj) = cut.chi(g.y_nodes()[jj] - curve.a[i]);

    const Field gtilde_core =
        state.omega * dxj(g, spec_om, 5) - om_y * dxj(g, spec_u, 5);
    const Eigen::ArrayXXcd spec_core = x_spectrum(g, gtilde_core);

    // per-j norms used below
    GevreySeq g_near, gt_near, gt_l0, gt_l1, gt_l2, mixed;
    g_near.values.resize(jm + 1);
    gt_near.values.resize(jm + 1);
    gt_l0.values.resize(jm + 1);
    gt_l1.values.resize(jm + 1);
    gt_l2.values.resize(jm + 1);
    mixed.values.resize(jm + 1);

    for (int j = 0; j <= jm; ++j) {
        const Field om_xj = dxj(g, spec_om, j);
        const Field u_xj = dxj(g, spec_u, j);
        Field gj(g.nx(), g.ny());
        for (int jj = 0; jj < g.ny(); ++jj) {
            const double p = psi[jj];
            for (int i = 0; i < g.nx(); ++i) {
                const double near =
                    state.omega(i, jj) * om_xj(i, jj) - om_y(i, jj) * u_xj(i, jj);
                const double far =
                    p < 1.0 ? om_xj(i, jj) -
                                  om_y(i, jj) / state.omega(i, jj) * u_xj(i, jj)
                            : 0.0;
                gj(i, jj) = p * near + (1.0 - p) * far;
            }
        }
        g_near.values[j] = l2_norm_weighted(g, gj, near_w);

        Field gt = j < 5 ? Field(Field::Zero(g.nx(), g.ny())) : dxj(g, spec_core, j - 5);
        gt_near.values[j] = l2_norm_weighted(g, gt, near_w);
        gt_l0.values[j] = l2_norm(g, gt);
        gt_l1.values[j] = l2_norm(g, Field(dy(g, gt, 1)));
        gt_l2.values[j] = l2_norm(g, Field(dy(g, gt, 2)));
        mixed.values[j] = std::pow(double(j), 0.75) *
                          l2_norm(g, Field(chi_mask.sqrt() * dy(g, Field(gt - gj), 1)));
    }

    auto weighted_seq = [&](const GevreySeq& s, double expo, int shift) {
        GevreySeq out;
        out.values.resize(jm + 1);
        for (int j = 0; j <= jm; ++j) {
            const int idx = j - shift;
            const double v = idx >= 0 ? s.values[idx] : 0.0;
            const double f = j == 0 ? (expo == 0.0 ? 1.0 : 0.0) : std::pow(double(j), expo);
            out.values[j] = f * v;
        }
        return out;
    };

    std::vector<LemmaReport> reports;

    // || j^{a/4} g_j ||_{l2, y<=split}  vs  || j^{a/4} gtilde_j || + || j^{(a-3)/4} ||omega||_H ||
    for (double a : {0.0, 5.0}) {
        LemmaReport rep;
        rep.name = "g_vs_gtilde_alpha" + std::to_string(int(a));
        rep.lhs = lp_tau_norm(weighted_seq(g_near, a / 4.0, 0), w, 2.0);
        GevreySeq om_trunc;
        om_trunc.values = om_full.values.head(jm + 1);
        rep.rhs = lp_tau_norm(weighted_seq(gt_near, a / 4.0, 0), w, 2.0) +
                  lp_tau_norm(weighted_seq(om_trunc, (a - 3.0) / 4.0, 0), w, 2.0);
        rep.indeterminate = rep.rhs < 1e-300;
        rep.ratio = rep.indeterminate ? 0.0 : rep.lhs / rep.rhs;
        reports.push_back(rep);
    }

    // || j^a dy^l gtilde_{j-l} ||  vs  || j^a ||omega||_H ||, l = 0, 1, 2
    {
        GevreySeq om_trunc;
        om_trunc.values = om_full.values.head(jm + 1);
        const double rhs = lp_tau_norm(om_trunc, w, 2.0);
        const GevreySeq* fams[3] = {&gt_l0, &gt_l1, &gt_l2};
        for (int l = 0; l < 3; ++l) {
            LemmaReport rep;
            rep.name = "dyl_gtilde_l" + std::to_string(l);
            rep.lhs = lp_tau_norm(weighted_seq(*fams[l], 0.0, l), w, 2.0);
            rep.rhs = rhs;
            rep.indeterminate = rep.rhs < 1e-300;
            rep.ratio = rep.indeterminate ? 0.0 : rep.lhs / rep.rhs;
            reports.push_back(rep);
        }
    }

    // || j^{3/4} sqrt(chi) dy(gtilde_j - g_j) ||^2  vs  D_h + E_omega
    {
        LemmaReport rep;
        rep.name = "dy_gtilde_minus_g";
        const double lhs_norm = lp_tau_norm(mixed, w, 2.0);
        rep.lhs = lhs_norm * lhs_norm;

        // D_h needs h_j; reuse the energies path cheaply at this snapshot
        Field inv_sqrt = Field::Zero(g.nx(), g.ny());
        if (curve.valid)
            for (int i = 0; i < g.nx(); ++i)
                for (int jj = 0; jj < g.ny(); ++jj)
                    if (chi_mask(i, jj) > 0.0 && om_y(i, jj) > 0.0)
                        inv_sqrt(i, jj) = 1.0 / std::sqrt(om_y(i, jj));
        GevreySeq h_diss;
        h_diss.values.resize(jm + 1);
        for (int j = 0; j <= jm; ++j) {
            const Field h = chi_mask * dxj(g, spec_om, j) * inv_sqrt;
            h_diss.values[j] = l2_norm(g, Field(dy(g, h, 1)));
        }
        GevreySeq om_trunc;
        om_trunc.values = om_full.values.head(jm + 1);
        rep.rhs = weighted_square_sum(h_diss, w) + weighted_square_sum(om_trunc, w);
        rep.indeterminate = rep.rhs < 1e-300;
        rep.ratio = rep.indeterminate ? 0.0 : rep.lhs / rep.rhs;
        reports.push_back(rep);
    }

    return reports;
}

} // namespace prandtl
