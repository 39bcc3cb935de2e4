#include "prandtl/verification.hpp"

#include <cmath>
#include <sstream>

#include "prandtl/calibration.hpp"
#include "prandtl/numerics.hpp"

namespace prandtl {

namespace {

Profile random_decaying_profile(const SpectralGrid& g, const CounterRng& r) {
    // sum of four exponentials with random amplitudes; decays under 1e-10 by
    // y = 40 so both Hardy forms apply
    Profile f = Profile::Zero(g.ny());
    for (int m = 0; m < 4; ++m) {
        const double c = r.normal(m);
        const double b = 0.6 + 1.4 * r.uniform(100 + m);
        f += c * (-b * g.y_nodes()).exp();
    }
    return f;
}

GevreySeq random_lognormal_seq(int j_max, const CounterRng& r) {
    GevreySeq s;
    s.values.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) s.values[j] = std::exp(0.5 * r.normal(j));
    return s;
}

} // namespace

VerifyItem verify_hardy(const SpectralGrid& g, int trials, std::uint64_t seed) {
    const CounterRng rng(seed);
    const double lambdas[] = {0.0, 0.5, 1.0, -1.0, -2.0};
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Profile f = random_decaying_profile(g, rng.stream(t));
        for (double lam : lambdas) {
            const HardyReport rep = hardy_check(g, f, lam);
            if (rep.rhs > 0.0) worst = std::max(worst, rep.lhs / rep.rhs);
            else if (rep.lhs > 0.0) worst = std::max(worst, 2.0); // flagged out of bound
        }
    }
    VerifyItem item;
    item.name = "hardy_ratio";
    item.measured = worst;
    item.committed = 1.0 + 1e-10;
    item.pass = worst <= item.committed;
    return item;
}

VerifyItem verify_sobolev(const SpectralGrid& g, std::uint64_t seed) {
    const CounterRng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < 64; ++t) {
        const CounterRng r = rng.stream(t);
        const int k = 1 + static_cast<int>(r.uniform(0) * 8.0);
        const double phase = 2.0 * M_PI * r.uniform(1);
        const double b = 0.5 + 1.5 * r.uniform(2);
        const double p = 1.0 + 2.0 * r.uniform(3);
        Field f(g.nx(), g.ny());
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j)
                f(i, j) = std::sin(k * g.x_nodes()[i] + phase) *
                          std::exp(-b * g.y_nodes()[j]) *
                          std::pow(1.0 + g.y_nodes()[j], -p);
        const SobolevReport rep = sobolev_check(g, f);
        worst = std::max(worst, rep.ratio);
    }
    VerifyItem item;
    item.name = "sobolev_ratio";
    item.measured = worst;
    item.committed = calib::kSobolevConstant;
    item.pass = worst <= item.committed;
    return item;
}

std::vector<VerifyItem> verify_binom(int trials, int j_max, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<VerifyItem> items;
    for (int m = 0; m <= 5; ++m) {
        for (int ti = 0; ti < 3; ++ti) {
            GevreyWeight w;
            w.tau = calib::kBinomTaus[ti];
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                const CounterRng r = rng.stream(t * 100 + m * 10 + ti);
                const GevreySeq a = random_lognormal_seq(j_max, r.stream(0));
                const GevreySeq b = random_lognormal_seq(j_max, r.stream(1));
                worst = std::max(worst,
                                 binom_convolution_check(a, b, m, w, ConvolutionSide::low).ratio);
                worst = std::max(worst,
                                 binom_convolution_check(a, b, m, w, ConvolutionSide::high).ratio);
            }
            VerifyItem item;
            std::ostringstream name;
            name << "binom_m" << m << "_tau" << w.tau;
            item.name = name.str();
            item.measured = worst;
            item.committed = calib::kBinomRatio[m][ti];
            item.pass = worst <= item.committed;
            items.push_back(item);
        }
    }
    return items;
}

std::vector<VerifyItem> verify_multinom(int trials, int j_max, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<VerifyItem> items;
    for (int ti = 0; ti < 3; ++ti) {
        GevreyWeight w;
        w.tau = calib::kBinomTaus[ti];
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const CounterRng r = rng.stream(t * 10 + ti);
            std::vector<GevreySeq> seqs = {random_lognormal_seq(j_max, r.stream(0)),
                                           random_lognormal_seq(j_max, r.stream(1)),
                                           random_lognormal_seq(j_max, r.stream(2))};
            worst = std::max(worst, multinom_convolution_check(seqs, {2, 3}, w).ratio);
        }
        VerifyItem item;
        std::ostringstream name;
        name << "multinom3_tau" << w.tau;
        item.name = name.str();
        item.measured = worst;
        item.committed = calib::kMultinom3Ratio[ti];
        item.pass = worst <= item.committed;
        items.push_back(item);
    }
    return items;
}

std::vector<InitialDataSpec> calibration_family(int members, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<InitialDataSpec> out;
    for (int t = 0; t < members; ++t) {
        const CounterRng r = rng.stream(t);
        InitialDataSpec sp;
        sp.a0_mean = 1.3 + 0.4 * r.uniform(0);
        sp.a0_amp = 0.15 + 0.25 * r.uniform(1);
        sp.a0_mode = 1 + static_cast<int>(r.uniform(2) * 2.0);
        sp.amplitude = 0.2 + 0.1 * r.uniform(3);
        sp.sigma = 2.0;
        sp.delta = 0.04;
        sp.gamma = 1.0;
        sp.s = 8;
        out.push_back(sp);
    }
    return out;
}

std::vector<VerifyItem> verify_relations(std::shared_ptr<const SpectralGrid> grid,
                                         int members, std::uint64_t seed) {
    const auto family = calibration_family(members, seed);
    const Cutoffs cut;
    GevreyWeight w;
    EnergyOptions opt;
    opt.j_max = 24;

    double worst_rel = 0.0;
    double worst_g_gt = 0.0, worst_dyl = 0.0, worst_mixed = 0.0;
    for (const auto& sp : family) {
        HypothesisParams hypo{sp.delta, sp.sigma, sp.y_split};
        const GeneratedData data = make_initial_data(grid, sp);
        const CriticalCurve curve = find_critical_curve(*grid, data.state.omega);
        const EnergyEvaluation ev = energies(data.state, curve, cut, w, opt, hypo);
        const RelationsReport rel = relations_check(ev.families, w);
        if (!rel.indeterminate) {
            worst_rel = std::max({worst_rel, rel.r1, rel.r2, rel.r1_tau, rel.r2_tau});
        }
        for (const auto& lem : appendix_lemma_suite(data.state, curve, cut, w, opt, hypo)) {
            if (lem.indeterminate) continue;
            if (lem.name.rfind("g_vs_gtilde", 0) == 0)
                worst_g_gt = std::max(worst_g_gt, lem.ratio);
            else if (lem.name.rfind("dyl_gtilde", 0) == 0)
                worst_dyl = std::max(worst_dyl, lem.ratio);
            else
                worst_mixed = std::max(worst_mixed, lem.ratio);
        }
    }

    std::vector<VerifyItem> items;
    items.push_back({"relations_ratio", worst_rel, calib::kRelationsConstant,
                     worst_rel <= calib::kRelationsConstant});
    items.push_back({"lemma_g_vs_gtilde", worst_g_gt, calib::kLemmaGtildeG,
                     worst_g_gt <= calib::kLemmaGtildeG});
    items.push_back({"lemma_dyl_gtilde", worst_dyl, calib::kLemmaGtilde,
                     worst_dyl <= calib::kLemmaGtilde});
    items.push_back({"lemma_dy_gtilde_minus_g", worst_mixed, calib::kLemmaDyGtildeG,
                     worst_mixed <= calib::kLemmaDyGtildeG});
    return items;
}

VerifySummary run_verify_suite(std::shared_ptr<const SpectralGrid> grid,
                               std::uint64_t seed) {
    VerifySummary summary;
    summary.items.push_back(verify_hardy(*grid, 100, seed ^ 0x5EED01));
    summary.items.push_back(verify_sobolev(*grid, seed ^ 0x5EED01));
    for (auto& i : verify_binom(1000, 40, seed ^ 0x5EED02)) summary.items.push_back(i);
    for (auto& i : verify_multinom(1000, 40, seed ^ 0x5EED03)) summary.items.push_back(i);
    for (auto& i : verify_relations(grid, 20, seed ^ 0x5EED04)) summary.items.push_back(i);
    return summary;
}

} // namespace prandtl
