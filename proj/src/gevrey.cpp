#include "prandtl/gevrey.hpp"

#include <cmath>
#include <limits>

#include "prandtl/numerics.hpp"

namespace prandtl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

} // namespace

void GevreySeq::validate(const char* who) const {
    if (values.size() < 6)
        throw ContractViolation(std::string(who) + ": j_max must be >= 5");
    for (int j = 0; j < values.size(); ++j)
        if (!std::isfinite(values[j]) || values[j] < 0.0)
            throw ContractViolation(std::string(who) +
                                    ": sequence entries must be finite and >= 0");
}

double log_weight(int j, const GevreyWeight& w) {
    if (j < 0) throw ContractViolation("log_weight: j must be >= 0");
    if (w.tau <= 0.0) throw ContractViolation("log_weight: tau must be positive");
    return j * std::log(w.tau) - w.m * std::lgamma(j + 1.0) + w.p_corr * std::log(j + 1.0);
}

double lp_tau_norm_log(const Eigen::ArrayXd& log_values, const GevreyWeight& w, double p) {
    if (p < 1.0) throw ContractViolation("lp_tau_norm: p must be >= 1");
    const int n = static_cast<int>(log_values.size());
    Eigen::ArrayXd terms(n);
    for (int j = 0; j < n; ++j)
        terms[j] = 2.0 * log_weight(j, w) + p * log_values[j];
    const double lse = log_sum_exp(std::span<const double>(terms.data(), terms.size()));
    return std::isfinite(lse) ? std::exp(lse / p) : 0.0;
}

double lp_tau_norm(const GevreySeq& seq, const GevreyWeight& w, double p) {
    seq.validate("lp_tau_norm");
    Eigen::ArrayXd lv(seq.values.size());
    for (int j = 0; j < seq.values.size(); ++j) lv[j] = safe_log(seq.values[j]);
    return lp_tau_norm_log(lv, w, p);
}

double weighted_square_sum(const GevreySeq& seq, const GevreyWeight& w) {
    const double n = lp_tau_norm(seq, w, 2.0);
    return n * n;
}

DtauReport dtau_lp2(const GevreySeq& seq, const GevreyWeight& w) {
    seq.validate("dtau_lp2");
    if (w.tau <= 0.0) throw ContractViolation("dtau_lp2: tau must be positive");
    const int n = static_cast<int>(seq.values.size());
    Eigen::ArrayXd terms(n);
    for (int j = 0; j < n; ++j) {
        const double a = seq.values[j];
        terms[j] = a > 0.0 ? 2.0 * log_weight(j, w) + 2.0 * std::log(a) + safe_log(double(j))
                           : kNegInf;
    }
    const double lse = log_sum_exp(std::span<const double>(terms.data(), terms.size()));
    const double surrogate = std::isfinite(lse) ? std::exp(lse) : 0.0;
    return DtauReport{2.0 / w.tau * surrogate, surrogate};
}

ConvolutionReport binom_convolution_check(const GevreySeq& a, const GevreySeq& b,
                                          int m, const GevreyWeight& w,
                                          ConvolutionSide side) {
    a.validate("binom_convolution_check");
    b.validate("binom_convolution_check");
    if (m < 0) throw ContractViolation("binom_convolution_check: shift must be >= 0");

    ConvolutionReport rep;
    rep.hypothesis_ok = (m <= 5);

    const int ja = a.j_max();
    const int jb = b.j_max();
    const int jc = std::min(ja, jb); // indices where the convolution is fully defined

    Eigen::ArrayXd la(ja + 1), lb(jb + 1);
    for (int j = 0; j <= ja; ++j) la[j] = safe_log(a.values[j]);
    for (int j = 0; j <= jb; ++j) lb[j] = safe_log(b.values[j]);

    Eigen::ArrayXd lc = Eigen::ArrayXd::Constant(jc + 1, kNegInf);
    std::vector<double> terms;
    for (int j = 0; j <= jc; ++j) {
        terms.clear();
        if (side == ConvolutionSide::low) {
            for (int k = 0; k <= j / 2; ++k) {
                if (k + m > ja || j - k > jb) continue;
                const double t = log_binomial(j, k) + la[k + m] + lb[j - k];
                if (std::isfinite(t)) terms.push_back(t);
            }
        } else {
            for (int k = j / 2; k <= j; ++k) {
                if (k > ja || j - k + m > jb) continue;
                const double t = log_binomial(j, k) + la[k] + lb[j - k + m];
                if (std::isfinite(t)) terms.push_back(t);
            }
        }
        if (!terms.empty()) lc[j] = log_sum_exp(terms);
    }

    GevreyWeight wc = w;
    rep.lhs = lp_tau_norm_log(lc, wc, 2.0);
    rep.rhs_product = lp_tau_norm(a, w, 2.0) * lp_tau_norm(b, w, 2.0);
    rep.ratio = rep.rhs_product > 0.0 ? rep.lhs / rep.rhs_product : 0.0;
    return rep;
}

namespace {

// Enumerate compositions k_{level} + ... + k_N = remaining recursively,
// accumulating the log term; k_1 is fixed by the caller loop.
void accumulate_multinom(const std::vector<Eigen::ArrayXd>& logs,
                         const std::vector<int>& shifts, size_t level, int remaining,
                         double partial, std::vector<double>& terms) {
    if (level == logs.size() - 1) {
        const int k = remaining;
        const int idx = k + shifts[level];
        if (idx < logs[level].size()) {
            const double t = partial - std::lgamma(k + 1.0) + logs[level][idx];
            if (std::isfinite(t)) terms.push_back(t);
        }
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        const int idx = k + shifts[level];
        if (idx >= logs[level].size()) continue;
        const double t = partial - std::lgamma(k + 1.0) + logs[level][idx];
        if (!std::isfinite(t)) continue;
        accumulate_multinom(logs, shifts, level + 1, remaining - k, t, terms);
    }
}

} // namespace

ConvolutionReport multinom_convolution_check(const std::vector<GevreySeq>& seqs,
                                             const std::vector<int>& shifts,
                                             const GevreyWeight& w) {
    const int n = static_cast<int>(seqs.size());
    if (n < 2) throw ContractViolation("multinom_convolution_check: need N >= 2 sequences");
    if (static_cast<int>(shifts.size()) != n - 1)
        throw ContractViolation("multinom_convolution_check: need N-1 shifts");

    ConvolutionReport rep;
    int jc = seqs[0].j_max();
    for (const auto& s : seqs) {
        s.validate("multinom_convolution_check");
        jc = std::min(jc, s.j_max());
    }
    for (int m : shifts) {
        if (m < 0) throw ContractViolation("multinom_convolution_check: shifts must be >= 0");
        if (m > 5) rep.hypothesis_ok = false;
    }

    std::vector<Eigen::ArrayXd> logs(n);
    for (int l = 0; l < n; ++l) {
        logs[l].resize(seqs[l].values.size());
        for (int j = 0; j < seqs[l].values.size(); ++j)
            logs[l][j] = safe_log(seqs[l].values[j]);
    }
    std::vector<int> all_shifts(n, 0);
    for (int l = 1; l < n; ++l) all_shifts[l] = shifts[l - 1];

    Eigen::ArrayXd lc = Eigen::ArrayXd::Constant(jc + 1, kNegInf);
    std::vector<double> terms;
    for (int j = 0; j <= jc; ++j) {
        terms.clear();
        const double lfact = std::lgamma(j + 1.0);
        // k_1 ranges over the restricted set k_1 >= j/N (real comparison).
        for (int k1 = (j + n - 1) / n; k1 <= j; ++k1) {
            if (k1 > seqs[0].j_max()) break;
            const double base = lfact - std::lgamma(k1 + 1.0) + logs[0][k1];
            if (!std::isfinite(base)) continue;
            accumulate_multinom(logs, all_shifts, 1, j - k1, base, terms);
        }
        if (!terms.empty()) lc[j] = log_sum_exp(terms);
    }

    rep.lhs = lp_tau_norm_log(lc, w, 2.0);
    rep.rhs_product = 1.0;
    for (const auto& s : seqs) rep.rhs_product *= lp_tau_norm(s, w, 2.0);
    rep.ratio = rep.rhs_product > 0.0 ? rep.lhs / rep.rhs_product : 0.0;
    return rep;
}

} // namespace prandtl
