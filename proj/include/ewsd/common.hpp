// Shared infrastructure: error taxonomy, compensated summation, chunked
// parallel reduction. Everything downstream includes this first.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ewsd {

// Bad inputs (flag misuse, malformed files, contract violations). CLI exit 2.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds the enforced resource caps (n <= 24, kappa caps). CLI exit 3.
class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Kahan-compensated accumulator. Sums over the subspace lattice reach ~4e5
// addends at kappa = 8; plain summation loses digits we assert on.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    void merge(const KahanSum& other) {
        add(other.s_);
        add(other.c_);
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Splits [0, count) into fixed-size chunks and reduces f over each chunk.
// Chunk boundaries do not depend on the worker count and the merge happens in
// chunk order, so the result is identical for any number of workers.
inline double parallel_chunked_sum(std::uint64_t count, int workers,
                                   const std::function<double(std::uint64_t, std::uint64_t)>& chunk_sum) {
    constexpr std::uint64_t kChunk = 1u << 14;
    const std::uint64_t n_chunks = count == 0 ? 0 : (count + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks, 0.0);
    if (workers < 1) workers = 1;
    if (workers == 1 || n_chunks <= 1) {
        for (std::uint64_t i = 0; i < n_chunks; ++i)
            partial[i] = chunk_sum(i * kChunk, std::min(count, (i + 1) * kChunk));
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        std::atomic<std::uint64_t> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t i = next.fetch_add(1);
                    if (i >= n_chunks) return;
                    partial[i] = chunk_sum(i * kChunk, std::min(count, (i + 1) * kChunk));
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

// splitmix64: the per-stream seeding workhorse. Counter-based draws keep
// Monte Carlo results independent of worker scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace ewsd
