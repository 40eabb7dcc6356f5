// Common metric vocabulary shared by the enumeration oracle, the subspace
// fast path, and the Monte Carlo estimator.
#pragma once

#include <chrono>
#include <string>

#include "ewsd/common.hpp"

namespace ewsd {

enum class Metric { equivocation_loss, chi2, total_variation };
enum class Method { oracle, subspace, montecarlo };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::equivocation_loss: return "equivocation-loss";
        case Metric::chi2: return "chi2";
        case Metric::total_variation: return "total-variation";
    }
    return "?";
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::oracle: return "oracle";
        case Method::subspace: return "subspace";
        case Method::montecarlo: return "montecarlo";
    }
    return "?";
}

// Channel parameterization: either a fixed erasure probability epsilon or a
// fixed revealed-bit count mu. Exactly one is active per mode.
struct ChannelParams {
    enum class Mode { fixed_epsilon, fixed_mu };
    Mode mode = Mode::fixed_epsilon;
    int n = 0;
    double epsilon = 0.0;
    int mu = 0;

    static ChannelParams with_epsilon(int n, double epsilon) {
        if (n < 0) throw validation_error("blocklength must be nonnegative");
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw validation_error("epsilon must lie in [0, 1]");
        return {Mode::fixed_epsilon, n, epsilon, 0};
    }
    static ChannelParams with_mu(int n, int mu) {
        if (n < 0) throw validation_error("blocklength must be nonnegative");
        if (mu < 0 || mu > n) throw validation_error("mu must lie in [0, n]");
        return {Mode::fixed_mu, n, 0.0, mu};
    }
    bool fixed_epsilon() const { return mode == Mode::fixed_epsilon; }
};

struct MetricResult {
    Metric metric = Metric::equivocation_loss;
    Method method = Method::oracle;
    double value = 0.0;
    ChannelParams params;
    double runtime_ms = 0.0;
    std::string note;  // e.g. the mu = 0 edge the loss formula formally excludes
};

class StopWatch {
  public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace ewsd
