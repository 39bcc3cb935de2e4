#include "doctest.h"

#include <cmath>

#include "prandtl/gevrey.hpp"
#include "prandtl/numerics.hpp"

using namespace prandtl;

namespace {

GevreySeq seq_of(std::initializer_list<double> v, int pad_to = 8) {
    GevreySeq s;
    s.values = Eigen::ArrayXd::Zero(std::max<int>(pad_to, v.size()));
    int i = 0;
    for (double x : v) s.values[i++] = x;
    return s;
}

GevreySeq random_seq(int j_max, std::uint64_t seed) {
    CounterRng r(seed);
    GevreySeq s;
    s.values.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) s.values[j] = std::exp(0.5 * r.normal(j));
    return s;
}

} // namespace

TEST_CASE("weight values") {
    GevreyWeight w; // tau 1, m 7/4, p 10
    CHECK(log_weight(0, w) == doctest::Approx(0.0).epsilon(1e-15));

    GevreyWeight w2{2.0, 1.75, 10.0};
    // tau^1 (1!)^(-7/4) 2^10 = 2 * 1024
    CHECK(std::exp(log_weight(1, w2)) == doctest::Approx(2048.0).epsilon(1e-13));

    // deep index: finite log; Stirling oracle for ln(100!)
    const double lw = log_weight(100, w);
    const double n = 100.0;
    const double stirling = n * std::log(n) - n + 0.5 * std::log(2.0 * M_PI * n) +
                            1.0 / (12.0 * n);
    CHECK(lw == doctest::Approx(-1.75 * stirling + 10.0 * std::log(101.0)).epsilon(1e-8));
    CHECK(std::isfinite(lw));
    // a little deeper the linear-scale weight underflows outright
    CHECK(std::exp(log_weight(150, w)) == 0.0);

    CHECK_THROWS_AS(log_weight(1, GevreyWeight{-1.0, 1.75, 10.0}), ContractViolation);
}

TEST_CASE("lp_tau_norm basics") {
    GevreyWeight w;
    CHECK(lp_tau_norm(seq_of({0, 0, 0, 0, 0, 0}), w, 2.0) == 0.0);
    for (double p : {1.0, 2.0, 3.5})
        CHECK(lp_tau_norm(seq_of({1.0}), w, p) == doctest::Approx(1.0).epsilon(1e-14));

    // inverse-weight construction: a_j = alpha_j^(-2/p) for j <= 3 gives 4^(1/p)
    for (double p : {1.0, 2.0, 3.0}) {
        GevreySeq s;
        s.values = Eigen::ArrayXd::Zero(8);
        for (int j = 0; j <= 3; ++j)
            s.values[j] = std::exp(-2.0 / p * log_weight(j, w));
        CHECK(lp_tau_norm(s, w, p) == doctest::Approx(std::pow(4.0, 1.0 / p)).epsilon(1e-13));
    }

    CHECK_THROWS_AS(lp_tau_norm(seq_of({1.0}), w, 0.5), ContractViolation);
}

TEST_CASE("log-space norm agrees with direct summation when safe") {
    const GevreySeq s = random_seq(12, 3);
    for (double tau : {0.5, 1.0, 2.0}) {
        GevreyWeight w{tau, 1.75, 10.0};
        double direct = 0.0;
        for (int j = 0; j <= 12; ++j) {
            const double a = std::exp(log_weight(j, w));
            direct += a * a * s.values[j] * s.values[j];
        }
        CHECK(lp_tau_norm(s, w, 2.0) == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
    }
}

TEST_CASE("norm is nondecreasing in tau and nested across radii") {
    const GevreySeq s = random_seq(20, 5);
    GevreyWeight lo{0.7, 1.75, 10.0}, hi{1.3, 1.75, 10.0};
    CHECK(lp_tau_norm(s, lo, 2.0) <= lp_tau_norm(s, hi, 2.0));
}

TEST_CASE("dtau_lp2: exact derivative and surrogate") {
    GevreyWeight w;
    CHECK(dtau_lp2(seq_of({0, 0, 0, 0, 0, 0}), w).exact == 0.0);
    CHECK(dtau_lp2(seq_of({1.0}), w).exact == 0.0); // j = 0 has no tau dependence

    const DtauReport one = dtau_lp2(seq_of({0.0, 1.0}), w);
    CHECK(one.exact == doctest::Approx(2097152.0).epsilon(1e-13)); // 2 * (2^10)^2
    CHECK(one.exact == doctest::Approx(2.0 / w.tau * one.surrogate).epsilon(1e-15));

    // against a centered finite difference of the weighted square sum
    const GevreySeq s = random_seq(16, 9);
    const double h = 1e-6;
    GevreyWeight wp{1.0 + h, 1.75, 10.0}, wm{1.0 - h, 1.75, 10.0};
    const double fd =
        (weighted_square_sum(s, wp) - weighted_square_sum(s, wm)) / (2.0 * h);
    CHECK(dtau_lp2(s, w).exact == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("sum bounded by tau-derivative for j >= 1 support, tau <= 2") {
    for (double tau : {0.5, 1.0, 2.0}) {
        GevreyWeight w{tau, 1.75, 10.0};
        GevreySeq s = random_seq(24, 17);
        s.values[0] = 0.0; // restrict support to j >= 1
        CHECK(weighted_square_sum(s, w) <= dtau_lp2(s, w).exact * (1.0 + 1e-12));
    }
}

TEST_CASE("binomial convolution check") {
    GevreyWeight w;
    const GevreySeq z = seq_of({0, 0, 0, 0, 0, 0});
    const GevreySeq a = random_seq(16, 21);
    CHECK(binom_convolution_check(z, a, 0, w, ConvolutionSide::low).ratio == 0.0);

    // delta sequences: single-term bookkeeping, ratio exactly 1
    const GevreySeq d = seq_of({1.0});
    const ConvolutionReport rep = binom_convolution_check(d, d, 0, w, ConvolutionSide::low);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-14));

    // shift above the lemma hypothesis is reported, not asserted
    CHECK_FALSE(binom_convolution_check(a, a, 6, w, ConvolutionSide::low).hypothesis_ok);
    CHECK(binom_convolution_check(a, a, 5, w, ConvolutionSide::low).hypothesis_ok);
}

TEST_CASE("two-factor multinomial reduces to the low-side binomial") {
    GevreyWeight w{1.0, 1.75, 10.0};
    const GevreySeq a = random_seq(20, 31);
    const GevreySeq b = random_seq(20, 32);
    for (int m : {0, 2, 5}) {
        const ConvolutionReport two = multinom_convolution_check({a, b}, {m}, w);
        const ConvolutionReport low = binom_convolution_check(b, a, m, w, ConvolutionSide::low);
        CHECK(two.lhs == doctest::Approx(low.lhs).epsilon(1e-12));
        CHECK(two.ratio == doctest::Approx(low.ratio).epsilon(1e-12));
    }
}

TEST_CASE("multinomial edge cases") {
    GevreyWeight w;
    const GevreySeq z = seq_of({0, 0, 0, 0, 0, 0});
    const GevreySeq a = random_seq(12, 41);
    CHECK(multinom_convolution_check({z, a, a}, {1, 2}, w).ratio == 0.0);
    CHECK_FALSE(multinom_convolution_check({a, a, a}, {6, 2}, w).hypothesis_ok);
    CHECK_THROWS_AS(multinom_convolution_check({a}, {}, w), ContractViolation);
}
