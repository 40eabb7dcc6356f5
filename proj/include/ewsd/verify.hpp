// Self-verification suites: oracle equivalence on random codes, the lemma
// identity checks, and the differential cross-checks, all seeded and
// reported with per-suite counts. The mutate_k3 hook deliberately corrupts
// the K constant table so the suites' ability to detect a wrong fast path
// can itself be tested.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ewsd/codes.hpp"
#include "ewsd/common.hpp"
#include "ewsd/lattice.hpp"
#include "ewsd/optprobe.hpp"
#include "ewsd/oracle.hpp"
#include "ewsd/sdmetrics.hpp"

namespace ewsd {

struct VerifyOptions {
    int kappa_max = 4;
    int n_max = 10;
    int samples = 100;
    std::uint64_t seed = 1;
    bool mutate_k3 = false;  // negative control: corrupt K_3 and expect failures
};

struct VerifySuite {
    std::string name;
    long cases = 0;
    long failures = 0;
};

struct VerifyReport {
    std::vector<VerifySuite> suites;
    bool passed() const {
        for (const auto& s : suites)
            if (s.failures != 0) return false;
        return true;
    }
};

namespace detail {

inline GeneratorMatrix random_generator(std::mt19937& rng, int kappa, int n) {
    std::vector<std::uint32_t> cols;
    for (int j = 0; j < n; ++j) cols.push_back(static_cast<std::uint32_t>(rng()) % (1u << kappa));
    return GeneratorMatrix(kappa, cols);
}

inline CodeDefinition random_simplex(std::mt19937& rng, int kappa, bool pin_zero) {
    std::uniform_real_distribution<double> uni(1e-12, 1.0);
    std::vector<double> q(1u << kappa, 0.0);
    double sum = 0.0;
    for (std::size_t i = pin_zero ? 1 : 0; i < q.size(); ++i) {
        q[i] = -std::log(uni(rng));
        sum += q[i];
    }
    for (double& v : q) v /= sum;
    return CodeDefinition::from_vector(kappa, std::move(q), pin_zero);
}

}  // namespace detail

inline VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport report;
    std::mt19937 rng(static_cast<std::uint32_t>(opt.seed));
    const int kmax = std::max(1, std::min(opt.kappa_max, kMaxFullLatticeKappa));
    const int nmax = std::max(3, std::min(opt.n_max, 16));

    // Constant tables per kappa, optionally corrupted.
    std::vector<ConstantFamilies> fams;
    for (int kappa = 1; kappa <= kmax; ++kappa) {
        fams.push_back(constants(kappa));
        if (opt.mutate_k3 && kappa >= 3) fams.back().K[3] += 1;
    }
    auto fam_for = [&](int kappa) -> const ConstantFamilies& {
        return fams[static_cast<std::size_t>(kappa - 1)];
    };

    {  // rank against the exhaustive XOR-subset oracle
        VerifySuite s{"gf2-rank-oracle"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % 6);
            const int count = static_cast<int>(rng() % 9);
            std::vector<std::uint32_t> v;
            for (int i = 0; i < count; ++i) v.push_back(static_cast<std::uint32_t>(rng()) % (1u << kappa));
            std::vector<std::uint32_t> span{0};
            for (std::uint32_t x : v) {
                const std::size_t sz = span.size();
                for (std::size_t i = 0; i < sz; ++i) {
                    const std::uint32_t y = span[i] ^ x;
                    bool found = false;
                    for (std::uint32_t e : span)
                        if (e == y) { found = true; break; }
                    if (!found) span.push_back(y);
                }
            }
            int r = 0;
            while ((1u << r) < span.size()) ++r;
            ++s.cases;
            if (mask_ops::rank(v) != r) ++s.failures;
        }
        report.suites.push_back(s);
    }

    {  // lattice counts vs Gaussian binomials, hyperplane membership counts
        VerifySuite s{"lattice-counts"};
        for (int kappa = 1; kappa <= std::min(kmax + 2, 6); ++kappa) {
            for (int d = 0; d <= kappa; ++d) {
                ++s.cases;
                if (BigInt(enumerate_subspaces(kappa, d).size()) != gaussian_binomial(kappa, d))
                    ++s.failures;
            }
            const auto hs = hyperplanes(kappa);
            for (std::uint32_t v = 1; v < (1u << kappa); ++v) {
                long cnt = 0;
                for (const auto& h : hs)
                    if (h.contains(v)) ++cnt;
                ++s.cases;
                if (cnt != (1 << (kappa - 1)) - 1) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // eta' integer identities plus the K-table consistency check
        VerifySuite s{"lemma2-eta-identities"};
        for (int a = 0; a <= 10; ++a) {
            BigInt total = 0;
            for (int i = 0; i <= a; ++i) total += eta_prime(a, i);
            ++s.cases;
            if (total != (a == 0 ? 1 : 0)) ++s.failures;
            for (int b = 1; b <= a; ++b) {
                BigInt partial = 0;
                for (int i = b; i <= a; ++i) partial += eta_prime(a, i);
                ++s.cases;
                if (partial != pow2(a - b) * eta_prime(a - 1, b - 1)) ++s.failures;
            }
            for (int b = 0; b <= a; ++b) {
                BigInt weighted = 0;
                for (int i = b; i <= a; ++i) weighted += gaussian_binomial(a, i) * eta_prime(i, b);
                ++s.cases;
                if (weighted != (a == b ? 1 : 0)) ++s.failures;
            }
        }
        // sum_j j eta'(delta, j) must equal the K table actually in use
        for (int kappa = 1; kappa <= kmax; ++kappa) {
            const auto& fam = fam_for(kappa);
            for (int delta = 1; delta <= kappa; ++delta) {
                BigInt kd = 0;
                for (int j = 1; j <= delta; ++j) kd += j * eta_prime(delta, j);
                ++s.cases;
                if (kd != fam.K[static_cast<std::size_t>(delta)]) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // Gamma summation collapses to 2^-kappa exactly on {kappa-1, kappa}
        VerifySuite s{"gamma-collapse"};
        for (int kappa = 1; kappa <= 10; ++kappa) {
            for (int d = 0; d <= kappa; ++d) {
                ++s.cases;
                if (gamma_scaled_sum(kappa, d) != ((d == kappa || d == kappa - 1) ? 1 : 0)) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // Mersenne-product sum is negative (exact integers)
        VerifySuite s{"lemma3-mersenne-sum"};
        for (int b = 1; b <= 6; ++b) {
            for (int n = 1; n <= 10; ++n) {
                BigInt total = 0;
                for (int i = 0; i <= n; ++i) {
                    BigInt prod = 1;
                    for (int j = i; j <= n; ++j) prod *= 1 - pow2(j);
                    total += pow2(b * i) * prod;
                }
                ++s.cases;
                if (!(total < 0)) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // superexponential sum is negative (long double; beta^(2^i) can top 1e400)
        VerifySuite s{"lemma4-superexponential"};
        for (double beta : {1.0, 1.5, 2.0, std::exp(1.0)}) {
            for (int n = 1; n <= 10; ++n) {
                long double total = 0.0L;
                for (int i = 0; i <= n; ++i) {
                    long double prod = 1.0L;
                    for (int j = i; j <= n; ++j) prod *= 1.0L - std::exp2(static_cast<long double>(j));
                    const long double p2i = std::exp2(static_cast<long double>(i));
                    total += p2i * std::pow(static_cast<long double>(beta), p2i) * prod;
                }
                ++s.cases;
                if (!(total < 0.0L)) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // equivocation: subspace fast path vs pattern-enumeration oracle
        VerifySuite s{"oracle-equivalence-equivocation"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % static_cast<unsigned>(kmax));
            const int n = std::max(2, 2 + static_cast<int>(rng() % static_cast<unsigned>(nmax - 1)));
            const auto g = detail::random_generator(rng, std::min(kappa, kmax), n);
            const auto code = from_generator(g);
            const auto& fam = fam_for(code.kappa);
            for (int e = 1; e <= 9; e += 2) {
                const auto params = ChannelParams::with_epsilon(n, e / 10.0);
                ++s.cases;
                if (std::abs(equivocation_loss_value(code.kappa, code.q, params, fam.K) -
                             equivocation_loss_oracle(g, params).value) > 1e-9)
                    ++s.failures;
            }
            const int mu = static_cast<int>(rng() % (static_cast<unsigned>(n) + 1));
            const auto params = ChannelParams::with_mu(n, mu);
            ++s.cases;
            if (std::abs(equivocation_loss_value(code.kappa, code.q, params, fam.K) -
                         equivocation_loss_oracle(g, params).value) > 1e-9)
                ++s.failures;
        }
        report.suites.push_back(s);
    }

    {  // chi^2 equivalence plus fast-transform vs direct hyperplane loop
        VerifySuite s{"oracle-equivalence-chi2"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % static_cast<unsigned>(kmax));
            const int n = std::max(2, 2 + static_cast<int>(rng() % static_cast<unsigned>(nmax - 1)));
            const auto g = detail::random_generator(rng, std::min(kappa, kmax), n);
            const auto code = from_generator(g);
            for (int e = 1; e <= 9; e += 2) {
                const auto params = ChannelParams::with_epsilon(n, e / 10.0);
                ++s.cases;
                if (std::abs(chi2_value(code.kappa, code.q, params) - chi2_oracle(g, params).value) >
                    1e-9)
                    ++s.failures;
                ++s.cases;
                if (std::abs(chi2_value(code.kappa, code.q, params, Chi2Path::direct) -
                             chi2_value(code.kappa, code.q, params, Chi2Path::fast_transform)) > 1e-12)
                    ++s.failures;
            }
            const int mu = static_cast<int>(rng() % (static_cast<unsigned>(n) + 1));
            const auto params = ChannelParams::with_mu(n, mu);
            ++s.cases;
            if (std::abs(chi2_value(code.kappa, code.q, params) - chi2_oracle(g, params).value) > 1e-9)
                ++s.failures;
        }
        report.suites.push_back(s);
    }

    {  // psi >= 0 for arbitrary simplex q, and psi sums to one
        VerifySuite s{"lemma1-psi-nonneg"};
        VerifySuite p{"psi-partition-of-unity"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % std::min(4, kmax));
            const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(nmax));
            const auto q = detail::random_simplex(rng, kappa, false);
            const double eps = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
            const auto rows = decomposition_table(q, n, std::min(2, n), eps);
            KahanSum total;
            for (const auto& row : rows) {
                ++s.cases;
                if (!(row.psi >= -1e-12)) ++s.failures;
                total.add(row.psi);
            }
            ++p.cases;
            if (std::abs(total.value() - 1.0) > 1e-10) ++p.failures;
        }
        report.suites.push_back(s);
        report.suites.push_back(p);
    }

    {  // zero-column directional derivatives are negative (both metrics)
        VerifySuite s{"zero-column-derivative"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % std::min(4, kmax));
            const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(nmax));
            auto q = detail::random_simplex(rng, kappa, false);
            if (!(q.q[0] > 0.0 && q.q[0] < 1.0)) continue;
            const double eps = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
            ++s.cases;
            if (!(zero_column_derivative(q, n, eps) < 0.0)) ++s.failures;
            for (double w : zero_column_omega(q, n, eps)) {
                ++s.cases;
                if (!(w <= 1e-12)) ++s.failures;
            }
            ++s.cases;
            if (!(chi2_zero_column_derivative(q, n, eps) < 0.0)) ++s.failures;
        }
        report.suites.push_back(s);
    }

    {  // analytic gradient vs central finite differences (step 1e-6)
        VerifySuite s{"gradient-vs-fd"};
        const int cap = std::min(4, kmax);
        for (int t = 0; t < std::min(opt.samples, 50); ++t) {
            const int kappa = 1 + static_cast<int>(rng() % cap);
            const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(nmax));
            const auto q = detail::random_simplex(rng, kappa, true);
            const double eps = 0.15 + 0.7 * static_cast<double>(rng() % 1000) / 1000.0;
            const auto& fam = fam_for(kappa);
            const auto params = ChannelParams::with_epsilon(n, eps);
            const auto grad = gradient_equivocation(kappa, q.q, n, eps);
            double gmax = 0.0;
            for (double gi : grad) gmax = std::max(gmax, std::abs(gi));
            const double h = 1e-6;
            for (std::uint32_t i = 1; i < (1u << kappa); ++i) {
                std::vector<double> qp(q.q), qm(q.q);
                qp[i] += h;
                qm[i] -= h;
                const double fd = (equivocation_loss_value(kappa, qp, params, fam.K) -
                                   equivocation_loss_value(kappa, qm, params, fam.K)) /
                                  (2.0 * h);
                ++s.cases;
                if (std::abs(grad[i] - fd) > 1e-5 * std::max(1.0, gmax)) ++s.failures;
            }
        }
        report.suites.push_back(s);
    }

    {  // xi transform: round trip, sum constraint, distance law
        VerifySuite s{"xi-transform"};
        for (int t = 0; t < opt.samples; ++t) {
            const int kappa = 1 + static_cast<int>(rng() % std::min(6, kmax + 2));
            const auto q = detail::random_simplex(rng, kappa, true);
            const auto q2 = detail::random_simplex(rng, kappa, true);
            const auto xi = xi_transform(q);
            const auto xi2 = xi_transform(q2);
            const auto back = xi_inverse(xi);
            double maxerr = 0.0;
            for (std::size_t i = 0; i < q.q.size(); ++i)
                maxerr = std::max(maxerr, std::abs(back.q[i] - q.q[i]));
            ++s.cases;
            if (maxerr > 1e-10) ++s.failures;

            KahanSum xs;
            for (double v : xi.xi) xs.add(v);
            ++s.cases;
            if (std::abs(xs.value() - (std::exp2(kappa - 1) - 1.0)) > 1e-10) ++s.failures;

            KahanSum dq, dxi;
            for (std::size_t i = 0; i < q.q.size(); ++i) {
                const double d = q.q[i] - q2.q[i];
                dq.add(d * d);
            }
            for (std::size_t i = 0; i < xi.xi.size(); ++i) {
                const double d = xi.xi[i] - xi2.xi[i];
                dxi.add(d * d);
            }
            ++s.cases;
            const double lhs = dxi.value();
            const double rhs = std::exp2(kappa - 2) * dq.value();
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, rhs)) ++s.failures;
        }
        report.suites.push_back(s);
    }

    return report;
}

}  // namespace ewsd
