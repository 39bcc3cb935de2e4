#include "doctest.h"

#include <cmath>
#include <memory>

#include "prandtl/solver.hpp"
#include "support/heat_oracle.hpp"

using namespace prandtl;

namespace {

// analytic layer dip with an exactly homogeneous far field:
// u0 = -y^2 e^-y, omega0 = y(y-2) e^-y (single non-degenerate root at y = 2)
double dip_u(double y) { return -y * y * std::exp(-y); }
double dip_omega(double y) { return y * (y - 2.0) * std::exp(-y); }

State dip_state(std::shared_ptr<const SpectralGrid> grid) {
    const SpectralGrid& g = *grid;
    State s;
    s.t = 0.0;
    s.u.resize(g.nx(), g.ny());
    s.omega.resize(g.nx(), g.ny());
    for (int j = 0; j < g.ny(); ++j) {
        s.u.col(j).setConstant(dip_u(g.y_nodes()[j]));
        s.omega.col(j).setConstant(dip_omega(g.y_nodes()[j]));
    }
    s.v = Field::Zero(g.nx(), g.ny());
    s.grid = grid;
    return s;
}

} // namespace

TEST_CASE("zero data is a fixed point") {
    auto grid = std::make_shared<const SpectralGrid>(16, 65, 20.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    ImexSolver solver(grid, cfg);
    State s;
    s.t = 0.0;
    s.u = Field::Zero(16, 65);
    s.v = Field::Zero(16, 65);
    s.omega = Field::Zero(16, 65);
    s.grid = grid;
    for (int k = 0; k < 5; ++k) s = solver.step(s);
    CHECK(s.u.abs().maxCoeff() == 0.0);
    CHECK(s.omega.abs().maxCoeff() == 0.0);
}

TEST_CASE("x-independent data reduces to the 1-D heat equation") {
    auto grid = std::make_shared<const SpectralGrid>(8, 257, 40.0);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 0.1;
    cfg.sample_every = 1000000;
    ImexSolver solver(grid, cfg);
    const RunSummary run = solver.run(dip_state(grid), {});

    std::vector<double> nodes(grid->y_nodes().data(), grid->y_nodes().data() + grid->ny());
    heat_oracle::CrankNicolson oracle(nodes, cfg.dt);
    Eigen::VectorXd f0(grid->ny());
    for (int j = 0; j < grid->ny(); ++j) f0[j] = dip_u(grid->y_nodes()[j]);
    const Eigen::VectorXd ref = oracle.evolve(f0, 200);

    double worst = 0.0;
    for (int j = 0; j < grid->ny(); ++j)
        worst = std::max(worst, std::abs(run.final_state.u(0, j) - ref[j]));
    CHECK(worst < 1e-10);

    // and the solution stays x-independent
    for (int j = 0; j < grid->ny(); ++j) {
        const double v0 = run.final_state.u(0, j);
        for (int i = 1; i < grid->nx(); ++i)
            CHECK(std::abs(run.final_state.u(i, j) - v0) < 1e-12);
    }
}

TEST_CASE("heat reduction converges at 4th order against a refined reference") {
    auto error_at = [](int ny) {
        auto grid = std::make_shared<const SpectralGrid>(4, ny, 40.0);
        SolverConfig cfg;
        cfg.dt = 1e-4;
        cfg.t_end = 0.05;
        cfg.sample_every = 1000000;
        ImexSolver solver(grid, cfg);
        const RunSummary run = solver.run(dip_state(grid), {});
        const Eigen::VectorXd ref =
            heat_oracle::refined_reference(dip_u, ny, 40.0, 4.0, 1e-4, 500, 4);
        double worst = 0.0;
        for (int j = 0; j < ny; ++j)
            worst = std::max(worst, std::abs(run.final_state.u(0, j) - ref[j]));
        return worst;
    };
    const double e1 = error_at(257), e2 = error_at(513);
    CHECK(e2 < e1);
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("small data with strong tangential diffusion decays monotonically") {
    auto grid = std::make_shared<const SpectralGrid>(32, 129, 20.0);
    SolverConfig cfg;
    cfg.epsilon = 0.1;
    cfg.dt = 2e-3;
    cfg.t_end = 0.05;
    ImexSolver solver(grid, cfg);

    State s = dip_state(grid);
    // small x-dependent ripple on top of the dip
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny(); ++j)
            s.u(i, j) *= 1.0 + 0.01 * std::sin(grid->x_nodes()[i]);
    s.u.col(grid->ny() - 1).setZero();
    s.omega = dy(*grid, s.u, 1);
    s.v = recover_v(*grid, s.u);

    std::vector<double> norms;
    solver.run(s, {[&](const State& st) { norms.push_back(l2_norm(*st.grid, st.u)); }});
    REQUIRE(norms.size() >= 3);
    for (size_t k = 0; k + 1 < norms.size(); ++k) CHECK(norms[k + 1] <= norms[k] * (1 + 1e-12));
}

TEST_CASE("discrete L2 energy of u decays step by step") {
    auto grid = std::make_shared<const SpectralGrid>(32, 257, 40.0);
    InitialDataSpec sp;
    const GeneratedData data = make_initial_data(grid, sp);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    ImexSolver solver(grid, cfg);
    State s = data.state;
    double prev = l2_norm(*grid, s.u);
    for (int k = 0; k < 40; ++k) {
        s = solver.step(s);
        const double now = l2_norm(*grid, s.u);
        CHECK(now <= prev * (1.0 + 1e-8));
        prev = now;
    }
}

TEST_CASE("wall identities shrink under simultaneous (dt, h) refinement") {
    // dy omega (y=0) ~ 0 and dyyy omega (y=0) ~ omega dx omega (y=0) hold for
    // evolved solutions; their residuals must drop by >= 4x per refinement
    auto residuals = [](int ny, double dt) {
        auto grid = std::make_shared<const SpectralGrid>(32, ny, 40.0);
        InitialDataSpec sp;
        const GeneratedData data = make_initial_data(grid, sp);
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.02;
        cfg.sample_every = 1000000;
        ImexSolver solver(grid, cfg);
        const State f = solver.run(data.state, {}).final_state;
        const SpectralGrid& g = *grid;
        const Profile first = wall_dy(g, f.omega, 1);
        const Profile third = wall_dy(g, f.omega, 3);
        const Profile om0 = f.omega.col(0);
        const Profile omx0 = dx(g, f.omega, 1).col(0);
        double r1 = 0.0, r3 = 0.0;
        for (int i = 0; i < g.nx(); ++i) {
            r1 = std::max(r1, std::abs(first[i]));
            r3 = std::max(r3, std::abs(third[i] - om0[i] * omx0[i]));
        }
        return std::pair<double, double>(r1, r3);
    };
    const auto [c1, c3] = residuals(257, 8e-4);
    const auto [f1, f3] = residuals(513, 4e-4);
    CHECK(c1 / f1 >= 4.0);
    CHECK(c3 / f3 >= 4.0);
}

TEST_CASE("run: t_end = 0, callbacks, and cutoff bookkeeping") {
    auto grid = std::make_shared<const SpectralGrid>(32, 129, 40.0);
    InitialDataSpec sp;
    const GeneratedData data = make_initial_data(grid, sp);
    SolverConfig cfg;
    cfg.t_end = 0.0;
    cfg.dealias = true;
    ImexSolver solver(grid, cfg);
    CHECK(solver.cutoff() == 10); // 32/3
    int calls = 0;
    const RunSummary run = solver.run(data.state, {[&](const State&) { ++calls; }});
    CHECK(run.steps == 0);
    CHECK(calls == 1); // the initial sample only
    // the data is nearly band-limited already: projection is a tiny touch-up
    CHECK((run.final_state.u - data.state.u).abs().maxCoeff() < 1e-8);
}

TEST_CASE("CFL refusal and blow-up detection") {
    auto grid = std::make_shared<const SpectralGrid>(32, 129, 40.0);
    SolverConfig cfg;
    cfg.dt = 1.0; // grossly violates dt max|u| max|k| < 0.5
    ImexSolver solver(grid, cfg);
    State s = dip_state(grid);
    CHECK_THROWS_AS(solver.step(s), StepRejected);

    SolverConfig cfg2;
    cfg2.dt = 1e-3;
    cfg2.blowup_threshold = 1e-6; // artificially low ceiling
    ImexSolver solver2(grid, cfg2);
    try {
        solver2.step(s);
        FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.t > 0.0);
    }
}

TEST_CASE("Galerkin refinement behaves like a Cauchy sequence") {
    // doubling the cutoff and halving the regularization changes the solution
    // less and less
    auto grid = std::make_shared<const SpectralGrid>(64, 129, 40.0);
    InitialDataSpec sp;
    const GeneratedData data = make_initial_data(grid, sp);
    auto evolve = [&](int n, double eps) {
        SolverConfig cfg;
        cfg.n_galerkin = n;
        cfg.dealias = false;
        cfg.epsilon = eps;
        cfg.dt = 5e-4;
        cfg.t_end = 0.02;
        cfg.sample_every = 1000000;
        ImexSolver solver(grid, cfg);
        return solver.run(data.state, {}).final_state;
    };
    const State s8 = evolve(8, 4e-3);
    const State s16 = evolve(16, 2e-3);
    const State s32 = evolve(32, 1e-3);
    const double d1 = l2_norm(*grid, Field(s16.u - s8.u));
    const double d2 = l2_norm(*grid, Field(s32.u - s16.u));
    CHECK(d2 < d1);
}
