// The subspace-decomposition fast path: the zeta / phi / psi function family,
// the integer constant families (K, eta', c, Gamma), equivocation loss as a
// K-weighted sum of phi over the lattice, and the chi^2 divergence needing
// only the hyperplanes (with a Hadamard-transform route for all hyperplane
// zeta values at once).
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ewsd/codes.hpp"
#include "ewsd/common.hpp"
#include "ewsd/gf2.hpp"
#include "ewsd/lattice.hpp"
#include "ewsd/metrics.hpp"
#include "ewsd/walsh.hpp"

namespace ewsd {

inline constexpr int kMaxConstantsKappa = 16;
inline constexpr int kMaxChi2DirectKappa = 12;

// --- the function family -------------------------------------------------

// zeta(S, q): fraction of generator columns lying within S.
inline double zeta(std::span<const std::uint32_t> elements, std::span<const double> q) {
    KahanSum sum;
    for (std::uint32_t e : elements) sum.add(q[e]);
    return sum.value();
}

inline double zeta(const Subspace& s, const CodeDefinition& code) {
    if (s.kappa() != code.kappa) throw validation_error("subspace and code widths differ");
    return zeta(s.elements(), code.q);
}

// phi(S, n, epsilon, q) = epsilon^( n (1 - zeta) ): probability of all
// revealed bits lying within S at fixed epsilon. pow(0, 0) = 1 covers the
// epsilon = 0, zeta = 1 corner.
inline double phi_from_zeta(double z, int n, double epsilon) {
    return std::pow(epsilon, static_cast<double>(n) * (1.0 - z));
}

inline double phi_eps(const Subspace& s, int n, double epsilon, const CodeDefinition& code) {
    return phi_from_zeta(zeta(s, code), n, epsilon);
}

// Phi(S, n, mu, q) = prod_{i<mu} (zeta - i/n) / (1 - i/n): hypergeometric
// probability of mu revealed bits all lying within S. Evaluated as written
// even when factors go negative (unrealizable q); no clamping.
inline double Phi_from_zeta(double z, int n, int mu) {
    double p = 1.0;
    for (int i = 0; i < mu; ++i) {
        const double frac = static_cast<double>(i) / n;
        p *= (z - frac) / (1.0 - frac);
    }
    return p;
}

inline double Phi_mu(const Subspace& s, int n, int mu, const CodeDefinition& code) {
    if (mu < 0 || mu > n) throw validation_error("mu must lie in [0, n]");
    return Phi_from_zeta(zeta(s, code), n, mu);
}

// --- exact constant families ----------------------------------------------

// K_delta = prod_{i=1}^{delta-1} (1 - 2^i); eta'(a, b) per its Gaussian
// binomial definition; c(d, d') = (-1)^(d-d') 2^((d-d')(d-d'-1)/2);
// Gamma(kappa, d) both as the exact summation (scaled by 2^kappa) and as the
// collapsed closed form.
struct ConstantFamilies {
    int kappa = 0;
    std::vector<BigInt> K;                        // index delta in [1, kappa]; K[0] unused
    std::vector<std::vector<BigInt>> eta_prime;   // [a][b], 0 <= b <= a <= kappa
    std::vector<std::vector<BigInt>> c;           // [d][d'], 0 <= d' <= d <= kappa
    std::vector<BigInt> gamma_scaled;             // 2^kappa * Gamma(kappa, d) via the summation
    std::vector<double> gamma_closed;             // 2^-kappa for d in {kappa-1, kappa}, else 0
};

inline BigInt eta_prime(int a, int b) {
    if (b < 0 || b > a) return 0;
    const int e = (a - b) * (a - b - 1) / 2;
    BigInt v = gaussian_binomial(a, b) * pow2(e);
    return ((a - b) % 2 == 0) ? v : -v;
}

inline BigInt c_constant(int d, int d_prime) {
    if (d_prime < 0 || d_prime > d) return 0;
    const int e = (d - d_prime) * (d - d_prime - 1) / 2;
    const BigInt v = pow2(e);
    return ((d - d_prime) % 2 == 0) ? v : -v;
}

inline BigInt K_constant(int delta) {
    BigInt k = 1;
    for (int i = 1; i <= delta - 1; ++i) k *= 1 - pow2(i);
    return k;
}

// 2^kappa * Gamma(kappa, d) evaluated from the defining summation
// sum_{i=d}^{kappa} 2^-i binom(kappa-d, i-d)_2 c(i, d); every term is an
// integer after the 2^kappa scaling.
inline BigInt gamma_scaled_sum(int kappa, int d) {
    BigInt total = 0;
    for (int i = d; i <= kappa; ++i) {
        // 2^(kappa - i) * binom * 2^((i-d)(i-d-1)/2), signed
        BigInt term = gaussian_binomial(kappa - d, i - d) * pow2(kappa - i) *
                      pow2((i - d) * (i - d - 1) / 2);
        total += ((i - d) % 2 == 0) ? term : -term;
    }
    return total;
}

inline ConstantFamilies constants(int kappa) {
    if (kappa < 1 || kappa > kMaxConstantsKappa)
        throw resource_error("constant tables capped at kappa <= " + std::to_string(kMaxConstantsKappa));
    ConstantFamilies f;
    f.kappa = kappa;
    f.K.assign(static_cast<std::size_t>(kappa) + 1, 0);
    for (int delta = 1; delta <= kappa; ++delta) f.K[static_cast<std::size_t>(delta)] = K_constant(delta);
    f.eta_prime.resize(static_cast<std::size_t>(kappa) + 1);
    f.c.resize(static_cast<std::size_t>(kappa) + 1);
    for (int a = 0; a <= kappa; ++a) {
        f.eta_prime[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(a) + 1);
        f.c[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(a) + 1);
        for (int b = 0; b <= a; ++b) {
            f.eta_prime[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = eta_prime(a, b);
            f.c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = c_constant(a, b);
        }
    }
    f.gamma_scaled.resize(static_cast<std::size_t>(kappa) + 1);
    f.gamma_closed.resize(static_cast<std::size_t>(kappa) + 1);
    for (int d = 0; d <= kappa; ++d) {
        f.gamma_scaled[static_cast<std::size_t>(d)] = gamma_scaled_sum(kappa, d);
        f.gamma_closed[static_cast<std::size_t>(d)] =
            (d == kappa || d == kappa - 1) ? std::exp2(-kappa) : 0.0;
    }
    return f;
}

// --- equivocation loss via the K-weighted lattice sum ----------------------

namespace detail {

inline void check_full_lattice(int kappa) {
    if (kappa > kMaxFullLatticeKappa)
        throw resource_error("full-lattice metrics capped at kappa <= " +
                             std::to_string(kMaxFullLatticeKappa));
}

// K-weighted sum over the lattice of the within-S probability. Never touches
// psi: phi/Phi grouped by dimension is the whole fast path.
inline double k_weighted_lattice_sum(int kappa, std::span<const double> q, const ChannelParams& params,
                                     const std::vector<BigInt>& K) {
    KahanSum outer;
    for (int delta = 1; delta <= kappa; ++delta) {
        const double kd = K[static_cast<std::size_t>(delta)].convert_to<double>();
        KahanSum inner;
        for (const Subspace& s : enumerate_subspaces(kappa, kappa - delta)) {
            const double z = zeta(s.elements(), q);
            inner.add(params.fixed_epsilon() ? phi_from_zeta(z, params.n, params.epsilon)
                                             : Phi_from_zeta(z, params.n, params.mu));
        }
        outer.add(kd * inner.value());
    }
    return outer.value();
}

}  // namespace detail

inline MetricResult equivocation_loss_sd(const CodeDefinition& code, const ChannelParams& params,
                                         const ConstantFamilies* families = nullptr) {
    detail::check_full_lattice(code.kappa);
    StopWatch sw;
    ConstantFamilies local;
    if (!families) {
        local = constants(code.kappa);
        families = &local;
    }
    const double sum = detail::k_weighted_lattice_sum(code.kappa, code.q, params, families->K);
    const double base = params.fixed_epsilon() ? params.n * (1.0 - params.epsilon)
                                               : static_cast<double>(params.mu);
    MetricResult res{Metric::equivocation_loss, Method::subspace, base - code.kappa + sum, params,
                     0.0, {}};
    if (!params.fixed_epsilon() && params.mu == 0)
        res.note = "mu = 0 lies outside the theorem's stated range; value follows the definition";
    res.runtime_ms = sw.elapsed_ms();
    return res;
}

// --- chi^2 divergence (hyperplane path) ------------------------------------

enum class Chi2Path { fast_transform, direct };

// zeta over every hyperplane, indexed 1..2^kappa-1 (entry h-1 of the result).
// Fast route: one Walsh-Hadamard transform gives all parity sums; the
// hyperplane with index h has parity vector flip(nu(h)), and
// zeta(S_h) = (sum q + W[flip(h)]) / 2.
inline std::vector<double> hyperplane_zetas(int kappa, std::span<const double> q,
                                            Chi2Path path = Chi2Path::fast_transform) {
    const std::uint32_t m = 1u << kappa;
    std::vector<double> zetas(m - 1, 0.0);
    if (path == Chi2Path::fast_transform) {
        std::vector<double> w(q.begin(), q.end());
        fwht_inplace(w);
        for (std::uint32_t h = 1; h < m; ++h)
            zetas[h - 1] = 0.5 * (w[0] + w[flip_bits(h, kappa)]);
    } else {
        if (kappa > kMaxChi2DirectKappa)
            throw resource_error("direct hyperplane summation capped at kappa <= " +
                                 std::to_string(kMaxChi2DirectKappa));
        for (std::uint32_t h = 1; h < m; ++h) {
            const std::uint32_t a = flip_bits(h, kappa);
            KahanSum sum;
            for (std::uint32_t i = 0; i < m; ++i)
                if (std::popcount(a & i) % 2 == 0) sum.add(q[i]);
            zetas[h - 1] = sum.value();
        }
    }
    return zetas;
}

inline MetricResult chi2_sd(const CodeDefinition& code, const ChannelParams& params,
                            Chi2Path path = Chi2Path::fast_transform) {
    StopWatch sw;
    const auto zetas = hyperplane_zetas(code.kappa, code.q, path);
    KahanSum bracket;
    bracket.add(1.0);
    if (params.fixed_epsilon()) {
        const double ratio = params.epsilon / (2.0 - params.epsilon);
        for (double z : zetas) bracket.add(std::pow(ratio, static_cast<double>(params.n) * (1.0 - z)));
        const double scale = std::pow(2.0 - params.epsilon, params.n) * std::exp2(-code.kappa);
        return {Metric::chi2, Method::subspace, scale * bracket.value() - 1.0, params, sw.elapsed_ms(), {}};
    }
    for (double z : zetas) bracket.add(Phi_from_zeta(z, params.n, params.mu));
    const double scale = std::exp2(params.mu - code.kappa);
    return {Metric::chi2, Method::subspace, scale * bracket.value() - 1.0, params, sw.elapsed_ms(), {}};
}

// --- exact-spanning probabilities (psi / Psi) and the full decomposition ---

// One Table-II-style row per subspace of W, ordered by (dimension, canonical
// key). psi and Psi come from the recursive subtraction evaluated bottom-up
// in dimension order; memoization is by canonical basis key.
struct DecompositionRow {
    Subspace subspace;
    double zeta = 0.0;
    double Phi = 0.0;
    double Psi = 0.0;
    double phi = 0.0;
    double psi = 0.0;
};

inline std::vector<DecompositionRow> decomposition_table(const CodeDefinition& code, int n, int mu,
                                                         double epsilon) {
    detail::check_full_lattice(code.kappa);
    std::vector<DecompositionRow> rows;
    std::map<std::vector<std::uint32_t>, std::size_t> index;
    for (int d = 0; d <= code.kappa; ++d) {
        for (const Subspace& s : enumerate_subspaces(code.kappa, d)) {
            DecompositionRow row;
            row.zeta = zeta(s.elements(), code.q);
            row.Phi = Phi_from_zeta(row.zeta, n, mu);
            row.phi = phi_from_zeta(row.zeta, n, epsilon);
            KahanSum psi_sub, Psi_sub;
            for (int dp = 0; dp < d; ++dp) {
                for (const Subspace& t : subspaces_of(s, dp)) {
                    const auto it = index.find(t.key());
                    psi_sub.add(rows[it->second].psi);
                    Psi_sub.add(rows[it->second].Psi);
                }
            }
            row.psi = row.phi - psi_sub.value();
            row.Psi = row.Phi - Psi_sub.value();
            row.subspace = s;
            index.emplace(s.key(), rows.size());
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// Single-subspace queries; the bottom-up pass runs over the sub-lattice of S.
namespace detail {

template <typename Base>
double exact_span_probability(const Subspace& s, Base base) {
    std::map<std::vector<std::uint32_t>, double> memo;
    for (int d = 0; d <= s.dim(); ++d) {
        for (const Subspace& t : subspaces_of(s, d)) {
            KahanSum sub;
            for (int dp = 0; dp < d; ++dp)
                for (const Subspace& u : subspaces_of(t, dp)) sub.add(memo.at(u.key()));
            memo[t.key()] = base(t) - sub.value();
        }
    }
    return memo.at(s.key());
}

}  // namespace detail

inline double psi_eps(const Subspace& s, int n, double epsilon, const CodeDefinition& code) {
    detail::check_full_lattice(s.kappa());
    return detail::exact_span_probability(
        s, [&](const Subspace& t) { return phi_eps(t, n, epsilon, code); });
}

inline double Psi_mu(const Subspace& s, int n, int mu, const CodeDefinition& code) {
    detail::check_full_lattice(s.kappa());
    return detail::exact_span_probability(s,
                                          [&](const Subspace& t) { return Phi_mu(t, n, mu, code); });
}

// E[rank(G_r)] = sum_d d * (psi or Psi summed over dimension-d subspaces);
// the loss identity then reads l = n(1 - epsilon) - E[rank].
inline double expected_rank_sd(const CodeDefinition& code, const ChannelParams& params) {
    detail::check_full_lattice(code.kappa);
    const auto rows = decomposition_table(code, params.n, params.fixed_epsilon() ? 0 : params.mu,
                                          params.fixed_epsilon() ? params.epsilon : 0.0);
    KahanSum sum;
    for (const auto& row : rows)
        sum.add(row.subspace.dim() * (params.fixed_epsilon() ? row.psi : row.Psi));
    return sum.value();
}

// CSV dump replicating the worked example's schema.
inline std::string decomposition_csv(const std::vector<DecompositionRow>& rows) {
    std::ostringstream out;
    out << "subspace,zeta,Phi,Psi,phi,psi\n";
    out.precision(17);
    for (const auto& row : rows) {
        out << '"' << row.subspace.to_string() << "\"," << row.zeta << ',' << row.Phi << ','
            << row.Psi << ',' << row.phi << ',' << row.psi << '\n';
    }
    return out.str();
}

}  // namespace ewsd
