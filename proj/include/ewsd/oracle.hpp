// Ground-truth metrics by full enumeration of erasure patterns. This is the
// trust anchor everything else is validated against, so it stays maximally
// simple: iterate masks, recompute the rank per pattern, accumulate.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ewsd/common.hpp"
#include "ewsd/gf2.hpp"
#include "ewsd/metrics.hpp"

namespace ewsd {

inline constexpr int kMaxOracleN = 24;
inline constexpr int kMaxTvN = 16;
inline constexpr int kMaxTvKappa = 8;

inline void check_oracle_n(int n) {
    if (n > kMaxOracleN)
        throw resource_error("pattern enumeration capped at n <= " + std::to_string(kMaxOracleN));
}

// "01011" style pattern string: leftmost character is position 1 (the LSB).
inline std::string pattern_string(std::uint32_t mask, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int p = 0; p < n; ++p)
        if (mask & (1u << p)) s[static_cast<std::size_t>(p)] = '1';
    return s;
}

struct PatternRow {
    std::uint32_t pattern = 0;
    int rank = 0;
    double probability = 0.0;
};

// One row per erasure pattern r: rank(G_r) and
// Pr(r) = epsilon^(n-|r|) (1-epsilon)^|r|.
inline std::vector<PatternRow> pattern_table(const GeneratorMatrix& g, double epsilon) {
    check_oracle_n(g.n());
    const int n = g.n();
    std::vector<PatternRow> rows;
    rows.reserve(1ull << n);
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        const auto m = static_cast<std::uint32_t>(mask);
        const int revealed = std::popcount(m);
        rows.push_back({m, mask_ops::rank(g.selected(m)),
                        std::pow(epsilon, n - revealed) * std::pow(1.0 - epsilon, revealed)});
    }
    return rows;
}

namespace detail {

// Streams f(revealed_count, rank) * Pr(pattern) over all 2^n patterns with a
// worker-count-invariant chunked reduction.
template <typename PerPattern>
double fixed_epsilon_expectation(const GeneratorMatrix& g, double epsilon, PerPattern f, int workers) {
    const int n = g.n();
    // pow tables keep the per-pattern cost at the rank computation
    std::vector<double> pe(static_cast<std::size_t>(n) + 1), pr(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        pe[static_cast<std::size_t>(i)] = std::pow(epsilon, i);
        pr[static_cast<std::size_t>(i)] = std::pow(1.0 - epsilon, i);
    }
    return parallel_chunked_sum(1ull << n, workers, [&](std::uint64_t lo, std::uint64_t hi) {
        KahanSum sum;
        std::vector<std::uint32_t> cols;
        cols.reserve(static_cast<std::size_t>(n));
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            const auto m = static_cast<std::uint32_t>(mask);
            const int revealed = std::popcount(m);
            cols.clear();
            for (int j = 0; j < n; ++j)
                if (m & (1u << j)) cols.push_back(g.col(j));
            const int rank = mask_ops::rank(cols);
            sum.add(f(revealed, rank) * pe[static_cast<std::size_t>(n - revealed)] *
                    pr[static_cast<std::size_t>(revealed)]);
        }
        return sum.value();
    });
}

// Uniform average of f(mu, rank) over the C(n, mu) weight-mu patterns.
template <typename PerPattern>
double fixed_mu_expectation(const GeneratorMatrix& g, int mu, PerPattern f) {
    const int n = g.n();
    KahanSum sum;
    std::uint64_t count = 0;
    if (mu == 0) {
        sum.add(f(0, 0));
        count = 1;
    } else {
        // Gosper's hack over weight-mu masks
        std::uint64_t mask = (1ull << mu) - 1;
        while (mask < (1ull << n)) {
            std::vector<std::uint32_t> cols;
            for (int j = 0; j < n; ++j)
                if (mask & (1ull << j)) cols.push_back(g.col(j));
            sum.add(f(mu, mask_ops::rank(cols)));
            ++count;
            const std::uint64_t c = mask & -mask;
            const std::uint64_t r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    return sum.value() / static_cast<double>(count);
}

template <typename PerPattern>
double oracle_expectation(const GeneratorMatrix& g, const ChannelParams& params, PerPattern f, int workers) {
    check_oracle_n(g.n());
    if (params.n != g.n()) throw validation_error("channel blocklength does not match generator");
    return params.fixed_epsilon() ? fixed_epsilon_expectation(g, params.epsilon, f, workers)
                                  : fixed_mu_expectation(g, params.mu, f);
}

}  // namespace detail

// Expected equivocation loss: E[|r| - rank(G_r)].
inline MetricResult equivocation_loss_oracle(const GeneratorMatrix& g, const ChannelParams& params,
                                             int workers = 1) {
    StopWatch sw;
    const double value = detail::oracle_expectation(
        g, params, [](int revealed, int rank) { return static_cast<double>(revealed - rank); }, workers);
    return {Metric::equivocation_loss, Method::oracle, value, params, sw.elapsed_ms(), {}};
}

// chi^2 divergence: E[2^(|r| - rank(G_r))] - 1.
inline MetricResult chi2_oracle(const GeneratorMatrix& g, const ChannelParams& params, int workers = 1) {
    StopWatch sw;
    const double value = detail::oracle_expectation(
        g, params, [](int revealed, int rank) { return std::exp2(revealed - rank); }, workers);
    return {Metric::chi2, Method::oracle, value - 1.0, params, sw.elapsed_ms(), {}};
}

// Total variation distance between joint and product distributions. Per
// pattern the joint splits into a consistent block of 2^H equal masses and an
// inconsistent block of zeros, which collapses the sum over messages to
// E[1 - 2^(rank - |r|)].
inline MetricResult total_variation_oracle(const GeneratorMatrix& g, const ChannelParams& params,
                                           int workers = 1) {
    if (g.n() > kMaxTvN || g.kappa() > kMaxTvKappa)
        throw resource_error("total variation enumeration capped at n <= " + std::to_string(kMaxTvN) +
                             ", kappa <= " + std::to_string(kMaxTvKappa));
    StopWatch sw;
    const double value = detail::oracle_expectation(
        g, params, [](int revealed, int rank) { return 1.0 - std::exp2(rank - revealed); }, workers);
    return {Metric::total_variation, Method::oracle, value, params, sw.elapsed_ms(), {}};
}

// H(M | Z = z) = k - |r| + rank(G_r) for a revealed position set (1-based).
inline double conditional_entropy(const GeneratorMatrix& g, std::span<const int> revealed_positions) {
    std::uint32_t mask = 0;
    for (int p : revealed_positions) {
        if (p < 1 || p > g.n()) throw validation_error("revealed position out of range");
        mask |= 1u << (p - 1);
    }
    const int k = g.n() - g.kappa();
    return k - std::popcount(mask) + mask_ops::rank(g.selected(mask));
}

// Consistency bridge between the two channel modes:
// sum_mu Binom(n, mu) eps^(n-mu) (1-eps)^mu L(mu) = l(eps).
inline double binomial_weight(int n, int mu, double epsilon) {
    double c = 1.0;
    for (int i = 0; i < mu; ++i) c = c * (n - i) / (i + 1);
    return c * std::pow(epsilon, n - mu) * std::pow(1.0 - epsilon, mu);
}

}  // namespace ewsd
