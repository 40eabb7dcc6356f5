// Numerical verification machinery for the optimality theorems: analytic
// gradients with finite-difference cross-checks, the zero-column directional
// derivatives, the xi hyperplane transform, constraint-projected
// stationarity tests, and sphere/simplex sampling probes for the chi^2
// global-optimality claims.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ewsd/codes.hpp"
#include "ewsd/common.hpp"
#include "ewsd/lattice.hpp"
#include "ewsd/metrics.hpp"
#include "ewsd/sdmetrics.hpp"

namespace ewsd {

inline constexpr int kMaxGradientKappa = 6;

// Raw-vector metric evaluations. The continuous formulas are defined for any
// real vector; the probes differentiate through points that leave the
// simplex, so these skip CodeDefinition validation.
inline double equivocation_loss_value(int kappa, std::span<const double> q, const ChannelParams& params,
                                      const std::vector<BigInt>& K) {
    const double sum = detail::k_weighted_lattice_sum(kappa, q, params, K);
    const double base =
        params.fixed_epsilon() ? params.n * (1.0 - params.epsilon) : static_cast<double>(params.mu);
    return base - kappa + sum;
}

inline double chi2_value(int kappa, std::span<const double> q, const ChannelParams& params,
                         Chi2Path path = Chi2Path::fast_transform) {
    const auto zetas = hyperplane_zetas(kappa, q, path);
    KahanSum bracket;
    bracket.add(1.0);
    if (params.fixed_epsilon()) {
        const double ratio = params.epsilon / (2.0 - params.epsilon);
        for (double z : zetas) bracket.add(std::pow(ratio, static_cast<double>(params.n) * (1.0 - z)));
        return std::pow(2.0 - params.epsilon, params.n) * std::exp2(-kappa) * bracket.value() - 1.0;
    }
    for (double z : zetas) bracket.add(Phi_from_zeta(z, params.n, params.mu));
    return std::exp2(params.mu - kappa) * bracket.value() - 1.0;
}

// --- analytic gradient ------------------------------------------------------

inline void check_gradient_domain(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw validation_error("gradient requires epsilon in (0, 1): ln(epsilon) is singular at the ends");
}

// Gradient of l(n, epsilon, q) over the reduced coordinates (q_0 pinned).
// Entry i of the result is dl/dq_i; entry 0 is fixed at zero.
inline std::vector<double> gradient_equivocation(int kappa, std::span<const double> q, int n,
                                                 double epsilon) {
    if (kappa > kMaxGradientKappa)
        throw resource_error("analytic gradient capped at kappa <= " + std::to_string(kMaxGradientKappa));
    check_gradient_domain(epsilon);
    const auto fam = constants(kappa);
    const double lneps = std::log(epsilon);
    std::vector<KahanSum> grad(1u << kappa);
    for (int delta = 1; delta <= kappa; ++delta) {
        const double kd = fam.K[static_cast<std::size_t>(delta)].convert_to<double>();
        for (const Subspace& s : enumerate_subspaces(kappa, kappa - delta)) {
            const double w = kd * std::exp(n * lneps * (1.0 - zeta(s.elements(), q)));
            for (std::uint32_t e : s.elements())
                if (e != 0) grad[e].add(w);
        }
    }
    std::vector<double> out(1u << kappa, 0.0);
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = -n * lneps * grad[i].value();
    return out;
}

inline std::vector<double> gradient_equivocation(const CodeDefinition& code, int n, double epsilon) {
    return gradient_equivocation(code.kappa, code.q, n, epsilon);
}

// Closed form of the gradient component at the uniform vector fraction:
// -n ln(eps) sum_delta K_delta binom(kappa-1, delta)_2
//   exp(n ln(eps) (2^kappa - 2^(kappa-delta)) / (2^kappa - 1)).
inline double gradient_equivocation_at_uniform(int kappa, int n, double epsilon) {
    check_gradient_domain(epsilon);
    const auto fam = constants(kappa);
    const double lneps = std::log(epsilon);
    const double denom = static_cast<double>((1u << kappa) - 1);
    KahanSum sum;
    for (int delta = 1; delta <= kappa; ++delta) {
        const double kd = fam.K[static_cast<std::size_t>(delta)].convert_to<double>();
        const double cnt = gaussian_binomial(kappa - 1, delta).convert_to<double>();
        sum.add(kd * cnt * std::exp(n * lneps * ((1u << kappa) - (1u << (kappa - delta))) / denom));
    }
    return -n * lneps * sum.value();
}

// --- zero-column directional derivatives ------------------------------------

inline void check_zero_column_domain(const CodeDefinition& code) {
    if (!(code.q[0] > 0.0 && code.q[0] < 1.0))
        throw validation_error("zero-column derivative needs 0 < q_0 < 1");
}

// Per-dimension contributions omega-grave(d) = n ln(eps) sum_{T of dim d}
// (1 - zeta(T)) psi(T); the directional derivative along q-grave is their sum
// over d = 0 .. kappa-1.
inline std::vector<double> zero_column_omega(const CodeDefinition& code, int n, double epsilon) {
    check_gradient_domain(epsilon);
    const auto rows = decomposition_table(code, n, 0, epsilon);
    std::vector<KahanSum> per_dim(static_cast<std::size_t>(code.kappa) + 1);
    for (const auto& row : rows)
        per_dim[static_cast<std::size_t>(row.subspace.dim())].add((1.0 - row.zeta) * row.psi);
    std::vector<double> out(static_cast<std::size_t>(code.kappa), 0.0);
    for (int d = 0; d < code.kappa; ++d)
        out[static_cast<std::size_t>(d)] = n * std::log(epsilon) * per_dim[static_cast<std::size_t>(d)].value();
    return out;
}

inline double zero_column_derivative(const CodeDefinition& code, int n, double epsilon) {
    check_zero_column_domain(code);
    KahanSum sum;
    for (double w : zero_column_omega(code, n, epsilon)) sum.add(w);
    return sum.value();
}

// chi^2 analogue: per-hyperplane terms
// varphi-grave(S) = n ln(r) (1 - zeta(S)) r^(n (1 - zeta(S))), r = eps/(2-eps);
// the derivative is (2-eps)^n 2^-kappa times their sum. Every term is
// nonpositive.
inline std::vector<double> chi2_zero_column_terms(const CodeDefinition& code, int n, double epsilon) {
    check_gradient_domain(epsilon);
    const double lnr = std::log(epsilon / (2.0 - epsilon));
    std::vector<double> terms;
    for (double z : hyperplane_zetas(code.kappa, code.q))
        terms.push_back(n * lnr * (1.0 - z) * std::exp(n * lnr * (1.0 - z)));
    return terms;
}

inline double chi2_zero_column_derivative(const CodeDefinition& code, int n, double epsilon) {
    check_zero_column_domain(code);
    KahanSum sum;
    for (double t : chi2_zero_column_terms(code, n, epsilon)) sum.add(t);
    return std::pow(2.0 - epsilon, n) * std::exp2(-code.kappa) * sum.value();
}

// --- xi transform -----------------------------------------------------------

// xi_i = zeta(hyperplane_i, q), a full-rank linear image of the reduced q.
struct XiVector {
    int kappa = 1;
    std::vector<double> xi;  // size 2^kappa - 1; entry h-1 belongs to hyperplane h
};

inline XiVector xi_transform(const CodeDefinition& code) {
    return {code.kappa, hyperplane_zetas(code.kappa, code.q)};
}

// Inverse via the Walsh-Hadamard route: reconstruct the parity sums
// W[flip(h)] = 2 xi_h - W[0] (with W[0] = sum q recovered from the xi sum
// constraint), then invert the transform. Lands in the reduced space q_0 = 0.
inline CodeDefinition xi_inverse(const XiVector& xi) {
    const int kappa = xi.kappa;
    const std::uint32_t m = 1u << kappa;
    if (xi.xi.size() != m - 1) throw validation_error("xi vector must have 2^kappa - 1 entries");
    if (kappa == 1) {
        // the single hyperplane is the zero space, so xi carries no
        // information; the unit-sum reduced vector is forced
        if (std::abs(xi.xi[0]) > 1e-9)
            throw validation_error("kappa = 1 xi vector must be [0]");
        return CodeDefinition::from_vector(1, {0.0, 1.0}, true);
    }
    KahanSum xi_sum;
    for (double v : xi.xi) xi_sum.add(v);
    const double w0 = xi_sum.value() / (std::exp2(kappa - 1) - 1.0);
    std::vector<double> w(m, 0.0);
    w[0] = w0;
    for (std::uint32_t h = 1; h < m; ++h) w[flip_bits(h, kappa)] = 2.0 * xi.xi[h - 1] - w0;
    fwht_inplace(w);
    for (double& v : w) v /= static_cast<double>(m);
    if (std::abs(w[0]) > 1e-9)
        throw validation_error("xi vector does not correspond to a reduced code definition");
    w[0] = 0.0;
    return CodeDefinition::from_vector(kappa, std::move(w), true);
}

// --- constraint sets and probes ----------------------------------------------

// Declarative constraint description for the probes. Unit sum is always on.
struct ConstraintSet {
    bool nonnegativity = true;                    // simplex wall q_i >= 0
    bool pin_zero_column = true;                  // q_0 = 0
    std::optional<double> radius;                 // |q - q_bar| fixed (sphere)
    std::optional<int> radius_u;                  // declared u with radius = |rho(u)|
    std::optional<double> min_dist_first_secs;    // min distance from each first SEC

    static ConstraintSet simplex() { return {}; }
    static ConstraintSet sphere(int kappa, int u) {
        ConstraintSet c;
        c.radius = rho(kappa, u).magnitude;
        c.radius_u = u;
        return c;
    }
    std::string describe() const {
        std::string s = "unit-sum";
        if (pin_zero_column) s += ",q0=0";
        if (nonnegativity) s += ",nonneg";
        if (radius) s += ",radius";
        if (min_dist_first_secs) s += ",min-dist-first-secs";
        return s;
    }
};

// Deterministic counter-based Gaussian draws (Box-Muller over splitmix64).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}
    double uniform() {
        const std::uint64_t x = splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (++ctr_));
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }
    double normal() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t ctr_ = 0;
};

struct StationarityReport {
    double projected_gradient_norm = 0.0;
    double min_curvature = 0.0;
    int directions = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(std::vector<double>& y, double alpha, std::span<const double> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace detail

// Projects the analytic gradient onto the tangent space of the active
// constraints and samples tangent curvature by second-order central
// differences. On the sphere the probe path q(t) = q_bar + R * unit(q - q_bar
// + t v) stays exactly on the constraint surface, so the measured curvature
// includes the second-order correction term the radius constraint induces.
inline StationarityReport stationarity_probe(const CodeDefinition& code, int n, double epsilon,
                                             const ConstraintSet& constraints, int directions = 64,
                                             std::uint64_t seed = 20240001ULL) {
    const int kappa = code.kappa;
    const std::uint32_t m = 1u << kappa;
    if (constraints.pin_zero_column && std::abs(code.q[0]) > 1e-12)
        throw validation_error("constraint set pins q_0 = 0 but q_0 != 0");
    const auto qbar = uniform_fraction(kappa);

    // constraint normals in the reduced coordinate space (index 0 unused)
    std::vector<std::vector<double>> normals;
    {
        std::vector<double> ones(m, 1.0);
        ones[0] = 0.0;
        const double nn = detail::norm(ones);
        for (double& v : ones) v /= nn;
        normals.push_back(std::move(ones));
    }
    if (constraints.radius) {
        std::vector<double> radial(m, 0.0);
        for (std::uint32_t i = 1; i < m; ++i) radial[i] = code.q[i] - qbar.q[i];
        const double r = detail::norm(radial);
        if (std::abs(r - *constraints.radius) > 1e-9)
            throw validation_error("q does not satisfy the declared radius constraint");
        for (double& v : radial) v /= r;
        normals.push_back(std::move(radial));
    }

    auto project = [&](std::vector<double>& v) {
        v[0] = 0.0;
        for (const auto& nvec : normals) detail::axpy(v, -detail::dot(v, nvec), nvec);
    };

    std::vector<double> grad = gradient_equivocation(kappa, code.q, n, epsilon);
    std::vector<double> pg = grad;
    project(pg);

    const auto fam = constants(kappa);
    const auto params = ChannelParams::with_epsilon(n, epsilon);
    auto loss_at = [&](std::span<const double> q) {
        return equivocation_loss_value(kappa, q, params, fam.K);
    };

    const double h = 1e-3;
    const double l0 = loss_at(code.q);
    GaussianStream rng(seed);
    double min_curv = std::numeric_limits<double>::infinity();
    for (int dir = 0; dir < directions; ++dir) {
        std::vector<double> v(m, 0.0);
        for (std::uint32_t i = 1; i < m; ++i) v[i] = rng.normal();
        project(v);
        const double vn = detail::norm(v);
        if (vn < 1e-12) continue;  // degenerate draw
        for (double& x : v) x /= vn;

        double lp, lm;
        if (constraints.radius) {
            const double r = *constraints.radius;
            auto on_sphere = [&](double t) {
                std::vector<double> p(m, 0.0);
                for (std::uint32_t i = 1; i < m; ++i) p[i] = code.q[i] - qbar.q[i] + t * v[i];
                const double pn = detail::norm(p);
                for (std::uint32_t i = 1; i < m; ++i) p[i] = qbar.q[i] + r * p[i] / pn;
                return loss_at(p);
            };
            lp = on_sphere(h);
            lm = on_sphere(-h);
        } else {
            std::vector<double> p(code.q.begin(), code.q.end());
            detail::axpy(p, h, v);
            lp = loss_at(p);
            detail::axpy(p, -2.0 * h, v);
            lm = loss_at(p);
        }
        min_curv = std::min(min_curv, (lp - 2.0 * l0 + lm) / (h * h));
    }
    return {detail::norm(pg), min_curv, directions, seed};
}

// --- chi^2 global-optimality probe -------------------------------------------

struct Construction {
    enum class Kind { uniform, sec };
    Kind kind = Kind::uniform;
    int u = 0;  // subspace-exclusion dimension, used when kind == sec

    static Construction uniform() { return {Kind::uniform, 0}; }
    static Construction sec(int u) { return {Kind::sec, u}; }
    std::string label() const {
        return kind == Kind::uniform ? "uniform" : ("sec(u=" + std::to_string(u) + ")");
    }
};

struct GlobalProbeReport {
    std::string construction;
    std::string constraints;
    int samples = 0;
    int violations = 0;
    double min_margin = 0.0;           // min over samples of lambda(sample) - lambda(candidate)
    double candidate_value = 0.0;
    std::uint64_t seed = 0;
    long attempts = 0;                 // includes rejected draws
};

// Samples the declared constraint set and checks
// lambda(construction) <= lambda(sample) for every accepted sample.
// Rejection enforces nonnegativity and, when requested, the minimum distance
// from each first subspace exclusion code; sphere draws are tangent-space
// Gaussians renormalized to the declared radius. Every attempt draws from its
// own RNG stream derived from the master seed, and attempts are consumed in
// index order, so the report is identical for any worker count.
inline GlobalProbeReport chi2_global_probe(int kappa, int n, double epsilon, Construction cons,
                                           int samples, std::uint64_t seed,
                                           bool enforce_min_dist = true, int workers = 1) {
    if (kappa > kMaxHyperplaneKappa)
        throw resource_error("global probe capped at kappa <= " + std::to_string(kMaxHyperplaneKappa));
    const std::uint32_t m = 1u << kappa;
    const auto params = ChannelParams::with_epsilon(n, epsilon);
    const bool sphere = cons.kind == Construction::Kind::sec;
    const CodeDefinition candidate = sphere ? subspace_exclusion(kappa, cons.u) : uniform_fraction(kappa);
    const auto qbar = uniform_fraction(kappa);
    const double radius = sphere ? rho(kappa, cons.u).magnitude : 0.0;

    // first-SEC reference codes and the minimum-distance bound between SEC tiers
    std::vector<CodeDefinition> first_secs;
    double min_dist = 0.0;
    const bool use_min_dist = sphere && enforce_min_dist && cons.u < kappa - 1 && cons.u > 0;
    if (use_min_dist) {
        for (const auto& hp : hyperplanes(kappa)) first_secs.push_back(subspace_exclusion(hp));
        const auto ref = subspace_exclusion(kappa, kappa - 1);
        KahanSum d2;
        for (std::uint32_t i = 0; i < m; ++i) {
            const double d = candidate.q[i] - ref.q[i];
            d2.add(d * d);
        }
        min_dist = std::sqrt(d2.value());
    }

    const double lambda_cand = chi2_value(kappa, candidate.q, params);
    const double tol = 1e-9 * std::max(1.0, std::abs(lambda_cand));

    GlobalProbeReport rep;
    rep.construction = cons.label();
    ConstraintSet cset;
    if (sphere) {
        cset = ConstraintSet::sphere(kappa, cons.u);
        if (use_min_dist) cset.min_dist_first_secs = min_dist;
    }
    rep.constraints = cset.describe();
    rep.samples = samples;
    rep.seed = seed;
    rep.candidate_value = lambda_cand;
    rep.min_margin = std::numeric_limits<double>::infinity();

    // one attempt = one independent stream; returns the margin if accepted
    auto attempt = [&](std::uint64_t index, double& margin) -> bool {
        GaussianStream rng(splitmix64(seed ^ (0xa0761d6478bd642fULL * (index + 1))));
        std::vector<double> q(m, 0.0);
        if (sphere) {
            double mean = 0.0;
            for (std::uint32_t i = 1; i < m; ++i) {
                q[i] = rng.normal();
                mean += q[i];
            }
            mean /= static_cast<double>(m - 1);
            double norm2 = 0.0;
            for (std::uint32_t i = 1; i < m; ++i) {
                q[i] -= mean;
                norm2 += q[i] * q[i];
            }
            if (norm2 < 1e-24) return false;
            const double scale = radius / std::sqrt(norm2);
            for (std::uint32_t i = 1; i < m; ++i) {
                q[i] = qbar.q[i] + scale * q[i];
                if (q[i] < 0.0) return false;
            }
            if (use_min_dist) {
                for (const auto& sec_ref : first_secs) {
                    KahanSum d2;
                    for (std::uint32_t i = 0; i < m; ++i) {
                        const double d = q[i] - sec_ref.q[i];
                        d2.add(d * d);
                    }
                    if (std::sqrt(d2.value()) < min_dist - 1e-12) return false;
                }
            }
        } else {
            // uniform over the reduced simplex (normalized exponentials)
            double sum = 0.0;
            for (std::uint32_t i = 1; i < m; ++i) {
                double u1 = rng.uniform();
                if (u1 <= 0.0) u1 = 0x1.0p-53;
                q[i] = -std::log(u1);
                sum += q[i];
            }
            for (std::uint32_t i = 1; i < m; ++i) q[i] /= sum;
        }
        margin = chi2_value(kappa, q, params) - lambda_cand;
        return true;
    };

    const long max_attempts = 10000L * std::max(samples, 1);
    constexpr long kBlock = 512;
    std::vector<double> margins(kBlock);
    std::vector<char> ok(kBlock);
    int accepted = 0;
    long base = 0;
    while (accepted < samples) {
        if (base >= max_attempts) throw resource_error("rejection sampling exceeded the attempt budget");
        const long block = std::min<long>(kBlock, max_attempts - base);
        auto run = [&](long lo, long hi) {
            for (long i = lo; i < hi; ++i)
                ok[static_cast<std::size_t>(i)] =
                    attempt(static_cast<std::uint64_t>(base + i), margins[static_cast<std::size_t>(i)]);
        };
        if (workers <= 1) {
            run(0, block);
        } else {
            std::vector<std::thread> pool;
            const long per = (block + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const long lo = w * per;
                if (lo >= block) break;
                pool.emplace_back(run, lo, std::min(block, lo + per));
            }
            for (auto& t : pool) t.join();
        }
        for (long i = 0; i < block && accepted < samples; ++i) {
            ++rep.attempts;
            if (!ok[static_cast<std::size_t>(i)]) continue;
            ++accepted;
            rep.min_margin = std::min(rep.min_margin, margins[static_cast<std::size_t>(i)]);
            if (margins[static_cast<std::size_t>(i)] < -tol) ++rep.violations;
        }
        base += block;
    }
    return rep;
}

}  // namespace ewsd
