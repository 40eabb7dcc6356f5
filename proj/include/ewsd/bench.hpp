// Runtime comparison harness: oracle enumeration vs the subspace fast path
// across a (kappa, n) grid, with median-of-repeats timing and a derived
// crossover summary (the smallest n from which the subspace path stays
// faster).
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ewsd/codes.hpp"
#include "ewsd/common.hpp"
#include "ewsd/oracle.hpp"
#include "ewsd/sdmetrics.hpp"

namespace ewsd {

struct BenchOptions {
    int kappa_lo = 3, kappa_hi = 4;
    int n_lo = 8, n_hi = 16;
    double epsilon = 0.3;
    int repeats = 5;
    std::uint64_t seed = 7;
};

struct BenchRow {
    int kappa = 0, n = 0;
    std::string method;  // oracle | subspace
    std::string metric;  // equivocation-loss | chi2
    double median_ms = 0.0;
};

struct CrossoverSummary {
    int kappa = 0;
    std::string metric;
    int crossover_n = -1;  // -1: not reached within the grid
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<CrossoverSummary> crossovers;
    double median_ms(int kappa, int n, const std::string& method, const std::string& metric) const {
        for (const auto& r : rows)
            if (r.kappa == kappa && r.n == n && r.method == method && r.metric == metric)
                return r.median_ms;
        throw validation_error("bench row not found");
    }
};

namespace detail {

// Median wall time of f over `repeats` runs; very fast calls are looped so
// each sample spans at least ~1 ms.
inline double median_ms_of(const std::function<void()>& f, int repeats) {
    f();  // warm-up
    int iters = 1;
    for (;;) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < iters; ++i) f();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (ms >= 1.0 || iters >= (1 << 20)) break;
        iters *= 2;
    }
    std::vector<double> samples;
    for (int r = 0; r < std::max(1, repeats); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < iters; ++i) f();
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        samples.push_back(ms / iters);
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

}  // namespace detail

inline BenchReport run_bench(const BenchOptions& opt) {
    if (opt.kappa_lo < 1 || opt.kappa_hi > kMaxFullLatticeKappa || opt.kappa_lo > opt.kappa_hi)
        throw validation_error("kappa range must lie within [1, 8]");
    if (opt.n_lo < 1 || opt.n_hi > kMaxOracleN || opt.n_lo > opt.n_hi)
        throw validation_error("n range must lie within [1, 24]");

    BenchReport report;
    std::mt19937 rng(static_cast<std::uint32_t>(opt.seed));
    for (int kappa = opt.kappa_lo; kappa <= opt.kappa_hi; ++kappa) {
        const auto fam = constants(kappa);
        for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
            // one random code per cell, shared by all four measurements
            std::vector<std::uint32_t> cols;
            for (int j = 0; j < n; ++j) cols.push_back(static_cast<std::uint32_t>(rng()) % (1u << kappa));
            const GeneratorMatrix g(kappa, cols);
            const auto code = from_generator(g);
            const auto params = ChannelParams::with_epsilon(n, opt.epsilon);

            volatile double sink = 0.0;  // keep the calls observable
            auto add = [&](const std::string& method, const std::string& metric, auto&& f) {
                report.rows.push_back(
                    {kappa, n, method, metric, detail::median_ms_of([&] { sink = f(); }, opt.repeats)});
            };
            add("oracle", "equivocation-loss", [&] { return equivocation_loss_oracle(g, params).value; });
            add("subspace", "equivocation-loss",
                [&] { return equivocation_loss_sd(code, params, &fam).value; });
            add("oracle", "chi2", [&] { return chi2_oracle(g, params).value; });
            add("subspace", "chi2", [&] { return chi2_sd(code, params).value; });
            (void)sink;
        }
        for (const std::string metric : {"equivocation-loss", "chi2"}) {
            CrossoverSummary cs{kappa, metric, -1};
            for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
                bool faster_from_here = true;
                for (int m = n; m <= opt.n_hi; ++m)
                    if (report.median_ms(kappa, m, "subspace", metric) >=
                        report.median_ms(kappa, m, "oracle", metric)) {
                        faster_from_here = false;
                        break;
                    }
                if (faster_from_here) {
                    cs.crossover_n = n;
                    break;
                }
            }
            report.crossovers.push_back(cs);
        }
    }
    return report;
}

// Least-squares slope of log2(median oracle ms) against n.
inline double oracle_log2_slope(const BenchReport& report, int kappa, const std::string& metric,
                                int n_lo, int n_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double y = std::log2(report.median_ms(kappa, n, "oracle", metric));
        sx += n;
        sy += y;
        sxx += static_cast<double>(n) * n;
        sxy += n * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

inline std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "kappa,n,method,metric,median_runtime_ms\n";
    out.precision(6);
    for (const auto& r : report.rows)
        out << r.kappa << ',' << r.n << ',' << r.method << ',' << r.metric << ',' << std::fixed
            << r.median_ms << '\n';
    out << std::defaultfloat;
    for (const auto& c : report.crossovers)
        out << "# crossover kappa=" << c.kappa << " metric=" << c.metric
            << " n=" << (c.crossover_n < 0 ? std::string("none") : std::to_string(c.crossover_n)) << '\n';
    return out.str();
}

}  // namespace ewsd
