// Code representations: the length-2^kappa column-fraction vector q, its
// round trip with generator matrices, and the named constructions (uniform
// vector fraction, subspace exclusion) with their constraint geometry.
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ewsd/common.hpp"
#include "ewsd/gf2.hpp"
#include "ewsd/lattice.hpp"

namespace ewsd {

inline constexpr double kUnitSumTol = 1e-12;
inline constexpr double kRealizabilityTol = 1e-9;

// q_i = fraction of generator columns equal to nu(i). `reduced` marks the
// q-bar representation with the zero column pinned out (q_0 = 0).
struct CodeDefinition {
    int kappa = 1;
    std::vector<double> q;
    bool reduced = false;
    std::optional<int> natural_n;  // attached by constructions

    std::size_t size() const { return q.size(); }

    static CodeDefinition from_vector(int kappa, std::vector<double> q, bool reduced = false) {
        check_width(kappa);
        if (q.size() != (1u << kappa)) throw validation_error("q must have 2^kappa entries");
        KahanSum sum;
        for (double v : q) {
            if (!(v >= -kUnitSumTol) || !std::isfinite(v))
                throw validation_error("q entries must be nonnegative");
            sum.add(v);
        }
        if (std::abs(sum.value() - 1.0) > kUnitSumTol)
            throw validation_error("q entries must sum to 1, got " + std::to_string(sum.value()));
        if (reduced && std::abs(q[0]) > kUnitSumTol)
            throw validation_error("reduced code definition requires q_0 = 0");
        return CodeDefinition{kappa, std::move(q), reduced, std::nullopt};
    }
};

struct RealizabilityReport {
    int n = 0;
    bool realizable = false;
    std::vector<int> offending;  // indices i with n*q_i not an integer
};

class RealizabilityError : public validation_error {
  public:
    RealizabilityError(RealizabilityReport rep)
        : validation_error("code definition not realizable at n = " + std::to_string(rep.n)),
          report(std::move(rep)) {}
    RealizabilityReport report;
};

inline RealizabilityReport check_realizable(const CodeDefinition& code, int n) {
    RealizabilityReport rep;
    rep.n = n;
    for (std::size_t i = 0; i < code.q.size(); ++i) {
        const double scaled = code.q[i] * n;
        if (std::abs(scaled - std::round(scaled)) > kRealizabilityTol)
            rep.offending.push_back(static_cast<int>(i));
    }
    rep.realizable = rep.offending.empty();
    return rep;
}

inline CodeDefinition from_generator(const GeneratorMatrix& g) {
    if (g.n() == 0) throw validation_error("generator matrix has no columns");
    std::vector<double> q(1u << g.kappa(), 0.0);
    for (std::uint32_t c : g.cols()) q[c] += 1.0 / g.n();
    return CodeDefinition::from_vector(g.kappa(), std::move(q));
}

// Emits n*q_i copies of column nu(i) in ascending column order (canonical).
inline GeneratorMatrix to_generator(const CodeDefinition& code, int n) {
    if (n <= 0) throw validation_error("blocklength must be positive");
    const RealizabilityReport rep = check_realizable(code, n);
    if (!rep.realizable) throw RealizabilityError(rep);
    std::vector<std::uint32_t> cols;
    cols.reserve(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < code.q.size(); ++i) {
        const long count = std::lround(code.q[i] * n);
        for (long c = 0; c < count; ++c) cols.push_back(static_cast<std::uint32_t>(i));
    }
    if (static_cast<int>(cols.size()) != n)
        throw validation_error("rounded column counts do not total n");
    return GeneratorMatrix(code.kappa, std::move(cols));
}

// q_0 = 0, q_i = 1/(2^kappa - 1) elsewhere; realizable at multiples of
// 2^kappa - 1, where n = 2^kappa - 1 gives the simplex code.
inline CodeDefinition uniform_fraction(int kappa) {
    check_width(kappa);
    const std::size_t m = 1u << kappa;
    std::vector<double> q(m, 1.0 / static_cast<double>(m - 1));
    q[0] = 0.0;
    auto code = CodeDefinition::from_vector(kappa, std::move(q), true);
    code.natural_n = static_cast<int>(m - 1);
    return code;
}

// Canonical subspace exclusion code: all columns outside the span of the
// first u unit vectors in equal proportion. u = 0 recovers the uniform
// fraction; u = kappa - 1 is the augmented Hadamard code.
inline CodeDefinition subspace_exclusion(int kappa, int u) {
    check_width(kappa);
    if (u < 0 || u > kappa - 1) throw validation_error("need 0 <= u <= kappa - 1");
    const std::size_t m = 1u << kappa;
    const std::size_t excluded = 1u << u;
    std::vector<double> q(m, 0.0);
    for (std::size_t i = excluded; i < m; ++i) q[i] = 1.0 / static_cast<double>(m - excluded);
    auto code = CodeDefinition::from_vector(kappa, std::move(q), true);
    code.natural_n = static_cast<int>(m - excluded);
    return code;
}

// Variant excluding an arbitrary subspace U (used by the minimum-distance
// constraint probes). Equivalent in performance to the canonical code of the
// same dimension.
inline CodeDefinition subspace_exclusion(const Subspace& U) {
    const int kappa = U.kappa();
    if (U.dim() > kappa - 1) throw validation_error("cannot exclude the full space");
    const std::size_t m = 1u << kappa;
    std::vector<double> q(m, 1.0 / static_cast<double>(m - U.elements().size()));
    for (std::uint32_t e : U.elements()) q[e] = 0.0;
    q[0] = 0.0;
    auto code = CodeDefinition::from_vector(kappa, std::move(q), true);
    code.natural_n = static_cast<int>(m - U.elements().size());
    return code;
}

// Difference vector between the uniform fraction and the dimension-u
// exclusion code, with its closed-form magnitude
// |rho(u)| = sqrt((2^u - 1) / ((2^kappa - 2^u)(2^kappa - 1))).
struct RhoVector {
    std::vector<double> values;  // indexed like q; values[0] = 0
    double magnitude = 0.0;
};

inline RhoVector rho(int kappa, int u) {
    check_width(kappa);
    if (u < 0 || u > kappa - 1) throw validation_error("need 0 <= u <= kappa - 1");
    const double full = static_cast<double>((1u << kappa) - 1);
    const double kept = static_cast<double>((1u << kappa) - (1u << u));
    RhoVector out;
    out.values.assign(1u << kappa, 0.0);
    for (std::size_t i = 1; i < out.values.size(); ++i)
        out.values[i] = (i < (1u << u)) ? -1.0 / full
                                        : (static_cast<double>((1u << u) - 1)) / (full * kept);
    out.magnitude = std::sqrt(static_cast<double>((1u << u) - 1) / (kept * full));
    return out;
}

}  // namespace ewsd
