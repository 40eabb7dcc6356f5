// Monte Carlo wiretap laboratory: coset encoder, seeded binary erasure
// channel, and statistical estimation of equivocation loss and chi^2 with
// standard errors. Trials draw from counter-based RNG streams derived from
// the master seed, so estimates are independent of worker scheduling.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ewsd/common.hpp"
#include "ewsd/gf2.hpp"
#include "ewsd/metrics.hpp"
#include "ewsd/oracle.hpp"

namespace ewsd {

// Counter-based splittable generator: stream(i) gives an independent
// deterministic substream; draws are pure functions of (seed, counter).
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

    SplitRng stream(std::uint64_t idx) const {
        return SplitRng(splitmix64(seed_ ^ (0xd1342543de82ef95ULL * (idx + 1))));
    }
    std::uint64_t next_u64() { return splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t seed_;
    std::uint64_t ctr_ = 0;
};

// Eavesdropper's view: symbols from {0, 1, ?}. revealed_mask bit p-1 set
// means position p survived; values carries the surviving bits.
struct Observation {
    int n = 0;
    std::uint32_t revealed_mask = 0;
    std::uint32_t values = 0;

    char symbol(int position) const {  // 1-based
        const std::uint32_t bit = 1u << (position - 1);
        if (!(revealed_mask & bit)) return '?';
        return (values & bit) ? '1' : '0';
    }
    std::vector<int> revealed_positions() const {
        std::vector<int> out;
        for (int p = 1; p <= n; ++p)
            if (revealed_mask & (1u << (p - 1))) out.push_back(p);
        return out;
    }
};

// Coset encoder x = [m m'] [G'; G]. G must have full row rank kappa; the
// default auxiliary generator G' completes G's rows to a basis of F2^n by
// greedy unit-vector completion, making G* square and invertible.
class CosetEncoder {
  public:
    explicit CosetEncoder(GeneratorMatrix g) : g_(std::move(g)) {
        const int n = g_.n();
        const int kappa = g_.kappa();
        if (n > kMaxOracleN) throw resource_error("encoder blocklength capped at n <= 24");
        if (n < kappa) throw validation_error("coset encoding needs n >= kappa");
        g_rows_ = rows_of(g_);
        if (mask_ops::rank(g_rows_) != kappa)
            throw validation_error("coset encoding requires a full-rank base generator");
        // greedy unit-vector completion to n independent rows
        std::vector<std::uint32_t> basis = g_rows_;
        for (int j = 0; j < n && static_cast<int>(gprime_rows_.size()) < n - kappa; ++j) {
            basis.push_back(1u << j);
            if (mask_ops::rank(basis) == static_cast<int>(basis.size()))
                gprime_rows_.push_back(1u << j);
            else
                basis.pop_back();
        }
        if (static_cast<int>(gprime_rows_.size()) != n - kappa)
            throw validation_error("failed to complete G to a basis of F2^n");
    }

    CosetEncoder(GeneratorMatrix g, std::vector<std::uint32_t> gprime_rows)
        : g_(std::move(g)), gprime_rows_(std::move(gprime_rows)) {
        g_rows_ = rows_of(g_);
        std::vector<std::uint32_t> all = g_rows_;
        all.insert(all.end(), gprime_rows_.begin(), gprime_rows_.end());
        if (static_cast<int>(all.size()) != g_.n() || mask_ops::rank(all) != g_.n())
            throw validation_error("rows of G* must be linearly independent and span F2^n");
    }

    int n() const { return g_.n(); }
    int kappa() const { return g_.kappa(); }
    int k() const { return g_.n() - g_.kappa(); }
    const GeneratorMatrix& generator() const { return g_; }
    const std::vector<std::uint32_t>& gprime_rows() const { return gprime_rows_; }

    // x = m . G' xor m' . G, messages given as bitmasks (bit i-1 = entry i).
    std::uint32_t encode(std::uint32_t m, std::uint32_t m_prime) const {
        if (m >= (1ull << k()) || m_prime >= (1ull << kappa()))
            throw validation_error("message dimensions do not match the encoder");
        std::uint32_t x = 0;
        for (int i = 0; i < k(); ++i)
            if (m & (1u << i)) x ^= gprime_rows_[static_cast<std::size_t>(i)];
        for (int i = 0; i < kappa(); ++i)
            if (m_prime & (1u << i)) x ^= g_rows_[static_cast<std::size_t>(i)];
        return x;
    }

  private:
    static std::vector<std::uint32_t> rows_of(const GeneratorMatrix& g) {
        std::vector<std::uint32_t> rows(static_cast<std::size_t>(g.kappa()), 0);
        for (int i = 0; i < g.kappa(); ++i)
            for (int j = 0; j < g.n(); ++j)
                if ((g.col(j) >> i) & 1u) rows[static_cast<std::size_t>(i)] |= 1u << j;
        return rows;
    }

    GeneratorMatrix g_;
    std::vector<std::uint32_t> g_rows_;
    std::vector<std::uint32_t> gprime_rows_;
};

// Binary erasure channel: each symbol independently erased with probability
// epsilon. Deterministic under the rng stream.
inline Observation erase(std::uint32_t codeword, int n, double epsilon, SplitRng& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw validation_error("epsilon must lie in [0, 1]");
    Observation z;
    z.n = n;
    for (int p = 0; p < n; ++p)
        if (rng.uniform01() >= epsilon) z.revealed_mask |= 1u << p;
    z.values = codeword & z.revealed_mask;
    return z;
}

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Message content is irrelevant to the per-observation loss (it depends only
// on the revealed position set), so trials sample erasure patterns directly.
template <typename PerPattern>
McEstimate mc_estimate(const GeneratorMatrix& g, double epsilon, long trials, std::uint64_t seed,
                       PerPattern f, int workers) {
    if (trials < 1) throw validation_error("need at least one trial");
    const int n = g.n();
    if (n > kMaxOracleN) throw resource_error("simulation blocklength capped at n <= 24");

    struct Acc {
        double sum = 0.0, sumsq = 0.0;
    };
    constexpr long kChunk = 1 << 12;
    const long n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Acc> parts(static_cast<std::size_t>(n_chunks));
    auto run_chunk = [&](long ci) {
        KahanSum s, s2;
        const long lo = ci * kChunk;
        const long hi = std::min(trials, lo + kChunk);
        const SplitRng master(seed);
        for (long t = lo; t < hi; ++t) {
            SplitRng rng = master.stream(static_cast<std::uint64_t>(t));
            std::uint32_t mask = 0;
            for (int p = 0; p < n; ++p)
                if (rng.uniform01() >= epsilon) mask |= 1u << p;
            const double v = f(std::popcount(mask), mask_ops::rank(g.selected(mask)));
            s.add(v);
            s2.add(v * v);
        }
        parts[static_cast<std::size_t>(ci)] = {s.value(), s2.value()};
    };
    if (workers <= 1 || n_chunks == 1) {
        for (long ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const long ci = next.fetch_add(1);
                    if (ci >= n_chunks) return;
                    run_chunk(ci);
                }
            });
        for (auto& t : pool) t.join();
    }
    KahanSum sum, sumsq;
    for (const auto& p : parts) {
        sum.add(p.sum);
        sumsq.add(p.sumsq);
    }
    const double mean = sum.value() / static_cast<double>(trials);
    const double var =
        trials > 1 ? std::max(0.0, (sumsq.value() - trials * mean * mean) / (trials - 1.0)) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(trials)), trials, seed};
}

}  // namespace detail

inline McEstimate estimate_equivocation(const GeneratorMatrix& g, double epsilon, long trials,
                                        std::uint64_t seed, int workers = 1) {
    return detail::mc_estimate(
        g, epsilon, trials, seed,
        [](int revealed, int rank) { return static_cast<double>(revealed - rank); }, workers);
}

inline McEstimate estimate_chi2(const GeneratorMatrix& g, double epsilon, long trials,
                                std::uint64_t seed, int workers = 1) {
    return detail::mc_estimate(
        g, epsilon, trials, seed,
        [](int revealed, int rank) { return std::exp2(revealed - rank) - 1.0; }, workers);
}

}  // namespace ewsd
