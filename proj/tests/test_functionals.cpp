#include "doctest.h"

#include <cmath>
#include <memory>

#include "prandtl/functionals.hpp"
#include "prandtl/numerics.hpp"
#include "prandtl/solver.hpp"

using namespace prandtl;

namespace {

std::shared_ptr<const SpectralGrid> grid32() {
    static auto g = std::make_shared<const SpectralGrid>(32, 257, 40.0);
    return g;
}

GeneratedData default_data() {
    InitialDataSpec sp;
    return make_initial_data(grid32(), sp);
}

const HypothesisParams kHypo{0.05, 2.0, 3.0};

} // namespace

TEST_CASE("find_critical_curve: linear field, monotone field, violations") {
    const SpectralGrid& g = *grid32();
    Field lin(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) lin.col(j).setConstant(g.y_nodes()[j] - 1.0);
    const CriticalCurve c = find_critical_curve(g, lin);
    CHECK(c.valid);
    for (int i = 0; i < g.nx(); ++i) {
        CHECK(c.a[i] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(c.dy_omega_on_curve[i] == doctest::Approx(1.0).epsilon(1e-10));
    }

    Field pos(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j)
        pos.col(j).setConstant(std::exp(-g.y_nodes()[j]) + 0.1);
    CHECK_FALSE(find_critical_curve(g, pos).valid);

    // two sign changes below y = 3
    Field two(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.y_nodes()[j];
        two.col(j).setConstant((y - 1.0) * (y - 2.0));
    }
    CHECK_THROWS_AS(find_critical_curve(g, two), HypothesisViolation);

    // root presence differing across columns
    Field mixed = pos;
    for (int j = 0; j < g.ny(); ++j) mixed(0, j) = g.y_nodes()[j] - 1.0;
    CHECK_THROWS_AS(find_critical_curve(g, mixed), HypothesisViolation);
}

TEST_CASE("evolve_critical_curve: frozen field and linear drift") {
    const SpectralGrid& g = *grid32();
    Field om(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) om.col(j).setConstant(g.y_nodes()[j] - 1.0);
    const CriticalCurve c = find_critical_curve(g, om);

    const CriticalCurve frozen =
        evolve_critical_curve(g, c, om, Field::Zero(g.nx(), g.ny()), 0.01);
    for (int i = 0; i < g.nx(); ++i)
        CHECK(frozen.a[i] == doctest::Approx(c.a[i]).epsilon(1e-13));

    // omega(t, y) = y - (1 + t): da/dt = 1 exactly, RK2 lands on a + dt
    const Field dt_om = Field::Constant(g.nx(), g.ny(), -1.0);
    const CriticalCurve moved = evolve_critical_curve(g, c, om, dt_om, 0.05);
    for (int i = 0; i < g.nx(); ++i)
        CHECK(moved.a[i] == doctest::Approx(1.05).epsilon(1e-12));

    // slope degenerating under the threshold
    CHECK_THROWS_AS(evolve_critical_curve(g, c, Field(1e-9 * om), dt_om, 0.01),
                    HypothesisViolation);
}

TEST_CASE("curve tracking follows the solver trajectory (re-rooting oracle)") {
    auto grid = grid32();
    const GeneratedData data = default_data();
    SolverConfig cfg;
    cfg.dt = 1e-3;
    ImexSolver walker(grid, cfg);
    State s = data.state;
    CriticalCurve ode_curve = find_critical_curve(*grid, s.omega);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const State next = walker.step(s);
        // both the tendency and the slope field staged at the step midpoint
        const Field dt_om = (next.omega - s.omega) / cfg.dt;
        const Field om_mid = 0.5 * (s.omega + next.omega);
        ode_curve = evolve_critical_curve(*grid, ode_curve, om_mid, dt_om, cfg.dt);
        const CriticalCurve rerooted = find_critical_curve(*grid, next.omega);
        worst = std::max(worst, (ode_curve.a - rerooted.a).abs().maxCoeff());
        s = next;
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("compute_hj: explicit values, monotone convention, oracle norm") {
    const SpectralGrid& g = *grid32();
    Cutoffs cut;

    // omega = y - 1 with a flat curve: h_0 = (y - 1) where chi = 1
    Field lin(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) lin.col(j).setConstant(g.y_nodes()[j] - 1.0);
    const CriticalCurve c = find_critical_curve(g, lin);
    const Field h0 = compute_hj(g, lin, 0, c, cut);
    for (int j = 0; j < g.ny(); ++j) {
        const double p = g.y_nodes()[j] - 1.0;
        if (std::abs(p) < cut.chi_r1)
            CHECK(h0(0, j) == doctest::Approx(p).epsilon(1e-9));
        if (std::abs(p) >= cut.chi_r2) CHECK(h0(0, j) == 0.0);
    }

    // invalid curve: zero field by convention
    CriticalCurve invalid;
    CHECK(compute_hj(g, lin, 2, invalid, cut).abs().maxCoeff() == 0.0);

    // generated data, j = 3: norm against an independent pointwise oracle
    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(g, data.state.omega);
    const Field h3 = compute_hj(g, data.state.omega, 3, curve, cut);

    const Field om_x3 = dx(g, data.state.omega, 3);
    const Field om_y = dy(g, data.state.omega, 1);
    double acc = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const double p = std::abs(g.y_nodes()[j] - curve.a[i]);
            double chi;
            if (p <= cut.chi_r1) chi = 1.0;
            else if (p >= cut.chi_r2) chi = 0.0;
            else {
                const double q = (p - cut.chi_r1) / (cut.chi_r2 - cut.chi_r1);
                chi = std::exp(1.0 - 1.0 / (1.0 - q * q));
            }
            if (chi == 0.0) continue;
            const double val = chi * om_x3(i, j) / std::sqrt(om_y(i, j));
            acc += g.x_weight() * g.y_weights()[j] * val * val;
        }
    CHECK(l2_norm(g, h3) == doctest::Approx(std::sqrt(acc)).epsilon(1e-10));

    // cutoff wider than the convexity region must fail loudly
    Field bend(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.y_nodes()[j];
        bend.col(j).setConstant((y - 1.0) * (1.0 - 2.0 * (y - 1.0)));
    }
    CriticalCurve c1;
    c1.valid = true;
    c1.a = Profile::Constant(g.nx(), 1.0);
    c1.dy_omega_on_curve = Profile::Constant(g.nx(), 1.0);
    CHECK_THROWS_AS(compute_hj(g, bend, 0, c1, cut), HypothesisViolation);
}

TEST_CASE("compute_gj: near form, far form, finiteness on the curve") {
    const SpectralGrid& g = *grid32();
    Cutoffs cut;

    // u = y^2/2, omega = y: in the psi = 1 region g_0 = y*y - 1*(y^2/2) = y^2/2
    Field u(g.nx(), g.ny()), om(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        u.col(j).setConstant(0.5 * g.y_nodes()[j] * g.y_nodes()[j]);
        om.col(j).setConstant(g.y_nodes()[j]);
    }
    HypothesisParams loose{1e-8, 2.0, 3.0}; // omega grows here, floor must be tiny
    const Field g0 = compute_gj(g, om, u, 0, cut, loose);
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.y_nodes()[j];
        if (y <= cut.psi_on && y > 0.0)
            CHECK(g0(0, j) == doctest::Approx(0.5 * y * y).epsilon(1e-8));
    }

    // generated data: both branches against a pointwise oracle
    const GeneratedData data = default_data();
    const Field gj = compute_gj(g, data.state.omega, data.state.u, 2, cut, kHypo);
    const Field om_x = dx(g, data.state.omega, 2);
    const Field u_x = dx(g, data.state.u, 2);
    const Field om_y = dy(g, data.state.omega, 1);
    double worst = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const double y = g.y_nodes()[j];
            double psi;
            if (y <= cut.psi_on) psi = 1.0;
            else if (y >= cut.psi_off) psi = 0.0;
            else {
                const double q = (y - cut.psi_on) / (cut.psi_off - cut.psi_on);
                psi = std::exp(1.0 - 1.0 / (1.0 - q * q));
            }
            const double om_v = data.state.omega(i, j);
            const double near = om_v * om_x(i, j) - om_y(i, j) * u_x(i, j);
            const double far =
                psi < 1.0 ? om_x(i, j) - om_y(i, j) / om_v * u_x(i, j) : 0.0;
            worst = std::max(worst, std::abs(gj(i, j) - (psi * near + (1 - psi) * far)));
        }
    CHECK(worst < 1e-12);
    CHECK(gj.isFinite().all()); // no division blow-up where omega vanishes

    // vorticity under the floor in the far region must fail loudly
    Field tiny = data.state.omega;
    for (int j = 0; j < g.ny(); ++j)
        if (g.y_nodes()[j] > 5.0) tiny.col(j) *= 1e-6;
    CHECK_THROWS_AS(compute_gj(g, tiny, data.state.u, 0, cut, kHypo),
                    HypothesisViolation);
}

TEST_CASE("compute_tilde_gj: index convention and x-independent data") {
    const SpectralGrid& g = *grid32();
    const GeneratedData data = default_data();
    CHECK(compute_tilde_gj(g, data.state.omega, data.state.u, 4).abs().maxCoeff() == 0.0);

    // j = 5: no outer derivative
    const Field want = data.state.omega * dx(g, data.state.omega, 5) -
                       dy(g, data.state.omega, 1) * dx(g, data.state.u, 5);
    const Field got = compute_tilde_gj(g, data.state.omega, data.state.u, 5);
    CHECK((got - want).abs().maxCoeff() < 1e-12);

    Field xindep(g.nx(), g.ny()), uind(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        xindep.col(j).setConstant(std::exp(-g.y_nodes()[j]));
        uind.col(j).setConstant(1.0 - std::exp(-g.y_nodes()[j]));
    }
    for (int j : {5, 7, 12})
        CHECK(compute_tilde_gj(g, xindep, uind, j).abs().maxCoeff() < 1e-12);
}

TEST_CASE("bar/hat quantities") {
    const SpectralGrid& g = *grid32();
    const GeneratedData data = default_data();
    const Field& om = data.state.omega;
    const Field& u = data.state.u;

    // hat g_1 = omega dy omega - dy omega omega: identically zero
    const auto [bar1, hat1] = compute_bar_hat_g(g, om, u, 1);
    CHECK(hat1.abs().maxCoeff() == 0.0);
    CHECK(bar1.isFinite().all());

    // x-independent data: bar g_k = 0 for k >= 1
    Field xindep(g.nx(), g.ny()), uind(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        xindep.col(j).setConstant(std::exp(-g.y_nodes()[j]));
        uind.col(j).setConstant(1.0 - std::exp(-g.y_nodes()[j]));
    }
    for (int k : {1, 3, 5}) {
        const auto [bark, hatk] = compute_bar_hat_g(g, xindep, uind, k);
        CHECK(bark.abs().maxCoeff() < 1e-14);
        (void)hatk;
    }

    // k = 2 against the defining products
    const auto [bar2, hat2] = compute_bar_hat_g(g, om, u, 2);
    const Field bar_want = om * dx(g, om, 2) - dy(g, om, 1) * dx(g, u, 2);
    const Field hat_want = om * dx(g, dy(g, om, 1), 1) - dy(g, om, 1) * dx(g, om, 1);
    CHECK((bar2 - bar_want).abs().maxCoeff() < 1e-13);
    CHECK((hat2 - hat_want).abs().maxCoeff() < 1e-13);

    CHECK_THROWS_AS(compute_bar_hat_g(g, om, u, 0), ContractViolation);
    CHECK_THROWS_AS(compute_bar_hat_g(g, om, u, 6), ContractViolation);
}

TEST_CASE("compute_Cj: trivial values and degenerate guard") {
    const SpectralGrid& g = *grid32();
    const GeneratedData data = default_data();

    // x-independent u: dx^j u = 0 at every height for j >= 1
    Field xindep(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) xindep.col(j).setConstant(std::exp(-g.y_nodes()[j]));
    const Profile c2 = compute_Cj(g, data.state.omega, xindep, 2);
    CHECK(c2.abs().maxCoeff() < 1e-12);

    // u = omega gives C_0 = -1
    const Profile c0 = compute_Cj(g, data.state.omega, data.state.omega, 0);
    for (int i = 0; i < g.nx(); ++i) CHECK(c0[i] == doctest::Approx(-1.0).epsilon(1e-12));

    // omega vanishing at the anchor height
    Field zero_at_3(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) zero_at_3.col(j).setConstant(g.y_nodes()[j] - 3.0);
    CHECK_THROWS_AS(compute_Cj(g, zero_at_3, data.state.u, 0), HypothesisViolation);
}

TEST_CASE("reconstruction: x-independent annihilation and identity round trip") {
    auto grid = std::make_shared<const SpectralGrid>(32, 1025, 40.0);
    const SpectralGrid& g = *grid;
    Cutoffs cut;
    InitialDataSpec sp;
    const GeneratedData data = make_initial_data(grid, sp);
    const CriticalCurve curve = find_critical_curve(g, data.state.omega);

    // x-independent data: g_j = 0 and C_j = 0 for j >= 1 reconstructs zero
    InitialDataSpec flat;
    flat.a0_amp = 0.0;
    const GeneratedData fdata = make_initial_data(grid, flat);
    const CriticalCurve fcurve = find_critical_curve(g, fdata.state.omega);
    const Field gj0 = compute_gj(g, fdata.state.omega, fdata.state.u, 1, cut, kHypo);
    const Profile cj0 = compute_Cj(g, fdata.state.omega, fdata.state.u, 1);
    const Field rec0 = reconstruct_dxju(g, gj0, fdata.state.omega, fcurve, cut, 1, cj0);
    CHECK(rec0.abs().maxCoeff() < 1e-10);

    // round trip at several derivative orders, measured away from the curve
    for (int j : {0, 1, 4, 8}) {
        const Field gj = compute_gj(g, data.state.omega, data.state.u, j, cut, kHypo);
        const Profile cj = compute_Cj(g, data.state.omega, data.state.u, j);
        const Field rec = reconstruct_dxju(g, gj, data.state.omega, curve, cut, j, cj);
        const Field want = dx(g, data.state.u, j);
        double err2 = 0.0, ref2 = 0.0;
        for (int i = 0; i < g.nx(); ++i)
            for (int jj = 0; jj < g.ny(); ++jj) {
                if (std::abs(g.y_nodes()[jj] - curve.a[i]) <= 0.2) continue;
                const double wq = g.x_weight() * g.y_weights()[jj];
                err2 += wq * (rec(i, jj) - want(i, jj)) * (rec(i, jj) - want(i, jj));
                ref2 += wq * want(i, jj) * want(i, jj);
            }
        CHECK(std::sqrt(err2 / ref2) < 1e-7);
    }
}

TEST_CASE("energies: zero state, monotone convention, report structure") {
    auto grid = grid32();
    const SpectralGrid& g = *grid;
    Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 16;

    State zero;
    zero.t = 0.0;
    zero.u = Field::Zero(g.nx(), g.ny());
    zero.v = Field::Zero(g.nx(), g.ny());
    zero.omega = Field::Zero(g.nx(), g.ny());
    zero.grid = grid;
    CriticalCurve invalid;
    const EnergyEvaluation ez = energies(zero, invalid, cut, w, opt, kHypo);
    CHECK(ez.report.E_omega == 0.0);
    CHECK(ez.report.calE_alpha == 0.0);
    CHECK(ez.report.dtau_calE == 0.0);

    InitialDataSpec mono;
    mono.monotone = true;
    const GeneratedData md = make_initial_data(grid, mono);
    const CriticalCurve mc = find_critical_curve(g, md.state.omega);
    const EnergyEvaluation em = energies(md.state, mc, cut, w, opt, kHypo);
    CHECK(em.report.E_h == 0.0);
    CHECK(em.report.E_omega > 0.0);
    CHECK(em.report.E_g1 > 0.0);

    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(g, data.state.omega);
    const EnergyEvaluation ev = energies(data.state, curve, cut, w, opt, kHypo);
    CHECK(ev.report.E_dot_omega < ev.report.E_omega);
    CHECK(ev.report.E_h > 0.0);
    CHECK(ev.report.E_g2 > 0.0);
    CHECK(ev.report.D_h > 0.0);
    CHECK(ev.report.calE_alpha ==
          doctest::Approx(ev.report.E_dot_omega + ev.report.E_h + ev.report.E_g1 +
                          opt.alpha * ev.report.E_g2));
}

TEST_CASE("E_h depends only on the near region") {
    auto grid = grid32();
    const SpectralGrid& g = *grid;
    Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 12;

    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(g, data.state.omega);
    const EnergyEvaluation base = energies(data.state, curve, cut, w, opt, kHypo);

    // multiply omega by a y-function supported above y = 4
    State bumped = data.state;
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.y_nodes()[j];
        if (y > 4.0) bumped.omega.col(j) *= 1.0 + 0.3 * std::exp(-(y - 6.0) * (y - 6.0));
    }
    bumped.u = cumulative_y(g, bumped.omega);
    const CriticalCurve curve2 = find_critical_curve(g, bumped.omega);
    const EnergyEvaluation mod = energies(bumped, curve2, cut, w, opt, kHypo);
    for (int j = 0; j <= opt.j_max; ++j)
        CHECK(mod.families.h.values[j] == base.families.h.values[j]);
    CHECK(mod.report.E_h == base.report.E_h);
    CHECK(mod.report.E_omega != base.report.E_omega);
}

TEST_CASE("exact tau derivative matches finite differences of the assembly") {
    auto grid = grid32();
    Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 12;
    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(*grid, data.state.omega);
    const EnergyEvaluation ev = energies(data.state, curve, cut, w, opt, kHypo);

    const double h = 1e-6;
    GevreyWeight wp = w, wm = w;
    wp.tau += h;
    wm.tau -= h;
    const double fd = (assemble_report(ev.families, wp, opt.alpha, 0.0).calE_alpha -
                       assemble_report(ev.families, wm, opt.alpha, 0.0).calE_alpha) /
                      (2.0 * h);
    CHECK(ev.report.dtau_calE == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("relations_check: indeterminate on zero, bounded on generated data") {
    auto grid = grid32();
    Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 12;

    EnergyFamilies zf;
    for (GevreySeq* s : {&zf.omega_full, &zf.omega_dot, &zf.omega_dot_diss, &zf.h,
                         &zf.h_diss, &zf.g1, &zf.g1_diss, &zf.g2, &zf.g2_diss})
        s->values = Eigen::ArrayXd::Zero(13);
    CHECK(relations_check(zf, w).indeterminate);

    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(*grid, data.state.omega);
    const EnergyEvaluation ev = energies(data.state, curve, cut, w, opt, kHypo);
    const RelationsReport rel = relations_check(ev.families, w);
    CHECK_FALSE(rel.indeterminate);
    CHECK(rel.r1 > 0.0);
    CHECK(rel.r2 > 0.0);
    CHECK(rel.r1 == doctest::Approx(1.0 / rel.r2).epsilon(1e-12));
    CHECK(rel.r1_tau > 0.0);
    CHECK(rel.r2_tau > 0.0);
}

TEST_CASE("appendix ratio harnesses") {
    auto grid = grid32();
    const SpectralGrid& g = *grid;
    Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 12;

    // x-independent data: gtilde vanishes, lemma sides degenerate gracefully
    InitialDataSpec flat;
    flat.a0_amp = 0.0;
    const GeneratedData fdata = make_initial_data(grid, flat);
    const CriticalCurve fcurve = find_critical_curve(g, fdata.state.omega);
    for (const auto& rep : appendix_lemma_suite(fdata.state, fcurve, cut, w, opt, kHypo)) {
        if (rep.name.rfind("dyl_gtilde", 0) == 0) CHECK(rep.lhs == 0.0);
        CHECK(std::isfinite(rep.ratio));
    }

    const GeneratedData data = default_data();
    const CriticalCurve curve = find_critical_curve(g, data.state.omega);
    for (const auto& rep : appendix_lemma_suite(data.state, curve, cut, w, opt, kHypo)) {
        CHECK_FALSE(rep.indeterminate);
        CHECK(rep.ratio > 0.0);
        CHECK(std::isfinite(rep.ratio));
    }
}
