#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "ewsd/oracle.hpp"
#include "ewsd/sdmetrics.hpp"

using namespace ewsd;

namespace {

const char* kExampleGenerator =
    "01001\n"
    "00111\n"
    "00001\n";

CodeDefinition example_code() { return from_generator(parse_generator(kExampleGenerator)); }

struct TableIIRow {
    double zeta, Phi, Psi, phi, psi;
};

// Worked-example subspace decomposition (n = 5, mu = 2, epsilon = 0.2),
// keyed by the subspace's sorted element list. Printed values are exact
// decimals.
const std::map<std::vector<std::uint32_t>, TableIIRow> kTableII = {
    {{0}, {0.2, 0, 0, 0.0016, 0.0016}},
    {{0, 1}, {0.4, 0.1, 0.1, 0.008, 0.0064}},
    {{0, 2}, {0.6, 0.3, 0.3, 0.04, 0.0384}},
    {{0, 3}, {0.2, 0, 0, 0.0016, 0}},
    {{0, 4}, {0.2, 0, 0, 0.0016, 0}},
    {{0, 5}, {0.2, 0, 0, 0.0016, 0}},
    {{0, 6}, {0.2, 0, 0, 0.0016, 0}},
    {{0, 7}, {0.4, 0.1, 0.1, 0.008, 0.0064}},
    {{0, 1, 2, 3}, {0.8, 0.6, 0.2, 0.2, 0.1536}},
    {{0, 1, 4, 5}, {0.4, 0.1, 0, 0.008, 0}},
    {{0, 1, 6, 7}, {0.6, 0.3, 0.1, 0.04, 0.0256}},
    {{0, 2, 4, 6}, {0.6, 0.3, 0, 0.04, 0}},
    {{0, 2, 5, 7}, {0.8, 0.6, 0.2, 0.2, 0.1536}},
    {{0, 3, 4, 7}, {0.4, 0.1, 0, 0.008, 0}},
    {{0, 3, 5, 6}, {0.2, 0, 0, 0.0016, 0}},
    {{0, 1, 2, 3, 4, 5, 6, 7}, {1, 1, 0, 1, 0.6144}}};

CodeDefinition random_code(std::mt19937& rng, int kappa, int n) {
    std::vector<std::uint32_t> cols;
    for (int j = 0; j < n; ++j) cols.push_back(rng() % (1u << kappa));
    return from_generator(GeneratorMatrix(kappa, cols));
}

// Random vector on the probability simplex over 2^kappa entries (generally
// unrealizable for small n).
CodeDefinition random_simplex_q(std::mt19937& rng, int kappa, bool pin_zero) {
    std::vector<double> q(1u << kappa, 0.0);
    std::uniform_real_distribution<double> uni(1e-9, 1.0);
    double sum = 0.0;
    for (std::size_t i = pin_zero ? 1 : 0; i < q.size(); ++i) {
        q[i] = -std::log(uni(rng));
        sum += q[i];
    }
    for (double& v : q) v /= sum;
    return CodeDefinition::from_vector(kappa, std::move(q), pin_zero);
}

}  // namespace

TEST_CASE("worked-example decomposition table at 1e-12") {
    const auto rows = decomposition_table(example_code(), 5, 2, 0.2);
    REQUIRE(rows.size() == kTableII.size());
    for (const auto& row : rows) {
        const auto& want = kTableII.at(row.subspace.elements());
        CHECK(row.zeta == Catch::Approx(want.zeta).margin(1e-12));
        CHECK(row.Phi == Catch::Approx(want.Phi).margin(1e-12));
        CHECK(row.Psi == Catch::Approx(want.Psi).margin(1e-12));
        CHECK(row.phi == Catch::Approx(want.phi).margin(1e-12));
        CHECK(row.psi == Catch::Approx(want.psi).margin(1e-12));
    }
}

TEST_CASE("zeta examples") {
    const auto code = example_code();
    CHECK(zeta(Subspace::full(3), code) == Catch::Approx(1.0).margin(1e-15));
    const std::vector<std::uint32_t> b1{1, 2};
    CHECK(zeta(Subspace::from_basis(3, b1), code) == Catch::Approx(0.8).margin(1e-15));
    const std::vector<std::uint32_t> b2{3, 5};  // {0,3,5,6}
    CHECK(zeta(Subspace::from_basis(3, b2), code) == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("phi and Phi examples") {
    const auto code = example_code();
    const std::vector<std::uint32_t> b1{1};
    CHECK(phi_eps(Subspace::from_basis(3, b1), 5, 0.2, code) == Catch::Approx(0.008).margin(1e-15));
    const std::vector<std::uint32_t> b2{2};
    CHECK(Phi_mu(Subspace::from_basis(3, b2), 5, 2, code) == Catch::Approx(0.3).margin(1e-15));
    CHECK(Phi_mu(Subspace::full(3), 5, 2, code) == Catch::Approx(1.0).margin(1e-15));
    // epsilon = 0 with zeta < 1 gives phi = 0, not an error
    CHECK(phi_eps(Subspace::from_basis(3, b1), 5, 0.0, code) == 0.0);
}

TEST_CASE("psi and Psi examples") {
    const auto code = example_code();
    const std::vector<std::uint32_t> b1{1};
    CHECK(psi_eps(Subspace::from_basis(3, b1), 5, 0.2, code) == Catch::Approx(0.0064).margin(1e-15));
    CHECK(psi_eps(Subspace::full(3), 5, 0.2, code) == Catch::Approx(0.6144).margin(1e-13));
    CHECK(Psi_mu(Subspace::full(3), 5, 2, code) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("constant families") {
    const auto fam = constants(10);
    CHECK(fam.K[1] == 1);
    CHECK(fam.K[2] == -1);
    CHECK(fam.K[3] == 3);
    CHECK(fam.K[4] == -21);

    // eta' sums to zero for a = 2: 2 - 3 + 1
    CHECK(eta_prime(2, 2) == 1);
    CHECK(eta_prime(2, 1) == -3);
    CHECK(eta_prime(2, 0) == 2);

    SECTION("eta' identities hold exactly for a, b <= 10") {
        for (int a = 0; a <= 10; ++a) {
            BigInt total = 0;
            for (int i = 0; i <= a; ++i) total += eta_prime(a, i);
            CHECK(total == (a == 0 ? 1 : 0));

            for (int b = 1; b <= a; ++b) {
                BigInt partial = 0;
                for (int i = b; i <= a; ++i) partial += eta_prime(a, i);
                CHECK(partial == pow2(a - b) * eta_prime(a - 1, b - 1));
            }

            for (int b = 0; b <= a; ++b) {
                BigInt weighted = 0;
                for (int i = b; i <= a; ++i) weighted += gaussian_binomial(a, i) * eta_prime(i, b);
                CHECK(weighted == (a == b ? 1 : 0));
            }

            BigInt kd = 0;
            for (int j = 1; j <= a; ++j) kd += j * eta_prime(a, j);
            if (a >= 1) CHECK(kd == K_constant(a));
        }
    }

    SECTION("c constants") {
        CHECK(c_constant(4, 4) == 1);
        CHECK(c_constant(4, 3) == -1);
        CHECK(c_constant(4, 2) == 2);
        CHECK(c_constant(4, 1) == -8);
        for (int d = 0; d <= 10; ++d)
            for (int dp = 0; dp <= d; ++dp)
                CHECK(c_constant(d, dp) * gaussian_binomial(d, dp) == eta_prime(d, dp));
    }

    SECTION("Gamma collapse is exact up to kappa = 10") {
        for (int kappa = 1; kappa <= 10; ++kappa) {
            const auto f = constants(kappa);
            for (int d = 0; d <= kappa; ++d) {
                const BigInt expect = (d == kappa || d == kappa - 1) ? 1 : 0;
                CHECK(f.gamma_scaled[static_cast<std::size_t>(d)] == expect);
                CHECK(f.gamma_closed[static_cast<std::size_t>(d)] ==
                      expect.convert_to<double>() * std::exp2(-kappa));
            }
        }
    }
}

TEST_CASE("equivocation loss via subspace decomposition") {
    const auto code = example_code();
    CHECK(equivocation_loss_sd(code, ChannelParams::with_epsilon(5, 0.2)).value ==
          Catch::Approx(1.44).margin(1e-12));
    // fixed-mu mode matches the weight-mu enumeration oracle
    const auto g = parse_generator(kExampleGenerator);
    for (int mu = 0; mu <= 5; ++mu) {
        CHECK(equivocation_loss_sd(code, ChannelParams::with_mu(5, mu)).value ==
              Catch::Approx(equivocation_loss_oracle(g, ChannelParams::with_mu(5, mu)).value)
                  .margin(1e-10));
    }
    // uniform fraction, epsilon -> 1: no leakage
    CHECK(equivocation_loss_sd(uniform_fraction(3), ChannelParams::with_epsilon(7, 1.0)).value ==
          Catch::Approx(0.0).margin(1e-12));
    // mu = 0 is outside the loss formula's stated range: value 0, flagged
    const auto zero_mu = equivocation_loss_sd(code, ChannelParams::with_mu(5, 0));
    CHECK(zero_mu.value == Catch::Approx(0.0).margin(1e-12));
    CHECK_FALSE(zero_mu.note.empty());
}

TEST_CASE("chi2 via subspace decomposition") {
    const auto code = example_code();
    CHECK(chi2_sd(code, ChannelParams::with_epsilon(5, 0.2)).value ==
          Catch::Approx(1.952).margin(1e-9));
    CHECK(chi2_sd(code, ChannelParams::with_epsilon(5, 1.0)).value ==
          Catch::Approx(0.0).margin(1e-12));
    // direct hyperplane loop and fast transform agree
    std::mt19937 rng(31337);
    for (int kappa = 1; kappa <= 8; ++kappa) {
        const auto q = random_simplex_q(rng, kappa, false);
        const auto params = ChannelParams::with_epsilon(2 * kappa + 1, 0.35);
        CHECK(chi2_sd(q, params, Chi2Path::direct).value ==
              Catch::Approx(chi2_sd(q, params, Chi2Path::fast_transform).value).margin(1e-12));
    }
    // fixed-mu mode matches the oracle
    const auto g = parse_generator(kExampleGenerator);
    for (int mu = 0; mu <= 5; ++mu)
        CHECK(chi2_sd(code, ChannelParams::with_mu(5, mu)).value ==
              Catch::Approx(chi2_oracle(g, ChannelParams::with_mu(5, mu)).value).margin(1e-10));
}

TEST_CASE("oracle equivalence on random realizable codes") {
    std::mt19937 rng(1618);
    for (int trial = 0; trial < 25; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 9);
        const auto cols = [&] {
            std::vector<std::uint32_t> c;
            for (int j = 0; j < n; ++j) c.push_back(rng() % (1u << kappa));
            return c;
        }();
        const GeneratorMatrix g(kappa, cols);
        const auto code = from_generator(g);
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto params = ChannelParams::with_epsilon(n, eps);
            CHECK(equivocation_loss_sd(code, params).value ==
                  Catch::Approx(equivocation_loss_oracle(g, params).value).margin(1e-9));
            CHECK(chi2_sd(code, params).value ==
                  Catch::Approx(chi2_oracle(g, params).value).margin(1e-9));
        }
    }
}

TEST_CASE("expected rank") {
    const auto code = example_code();
    CHECK(expected_rank_sd(code, ChannelParams::with_epsilon(5, 0.2)) ==
          Catch::Approx(2.56).margin(1e-12));
    // l = n(1 - eps) - E[rank]
    CHECK(5 * 0.8 - 2.56 == Catch::Approx(1.44).margin(1e-12));

    // single support vector at epsilon = 0: rank of a repeated column is 1
    std::vector<double> q(8, 0.0);
    q[5] = 1.0;
    const auto single = CodeDefinition::from_vector(3, std::move(q));
    CHECK(expected_rank_sd(single, ChannelParams::with_epsilon(4, 0.0)) ==
          Catch::Approx(1.0).margin(1e-12));

    // equals the oracle's E[rank] = sum_r Pr(r) rank(G_r)
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 6);
        std::vector<std::uint32_t> cols;
        for (int j = 0; j < n; ++j) cols.push_back(rng() % (1u << kappa));
        const GeneratorMatrix g(kappa, cols);
        KahanSum oracle_rank;
        for (const auto& row : pattern_table(g, 0.3)) oracle_rank.add(row.probability * row.rank);
        CHECK(expected_rank_sd(from_generator(g), ChannelParams::with_epsilon(n, 0.3)) ==
              Catch::Approx(oracle_rank.value()).margin(1e-10));
    }
}

TEST_CASE("psi nonnegativity and partition of unity") {
    std::mt19937 rng(515);
    for (int trial = 0; trial < 30; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 10);
        const auto q = random_simplex_q(rng, kappa, false);  // generally unrealizable
        const double eps = 0.1 + 0.8 * (rng() % 100) / 100.0;
        const auto rows = decomposition_table(q, n, std::min(n, 2), eps);
        KahanSum psi_total;
        for (const auto& row : rows) {
            CHECK(row.psi >= -1e-12);  // psi >= 0 for any simplex q
            psi_total.add(row.psi);
        }
        CHECK(psi_total.value() == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("Phi may go negative for unrealizable q, evaluated as written") {
    // zeta < (mu-1)/n forces a negative factor
    std::vector<double> q{0.0, 0.05, 0.95, 0.0};
    const auto code = CodeDefinition::from_vector(2, std::move(q));
    const std::vector<std::uint32_t> b{1};
    const double val = Phi_mu(Subspace::from_basis(2, b), 4, 2, code);
    CHECK(val < 0.0);
}

TEST_CASE("decomposition csv matches the documented schema") {
    const auto rows = decomposition_table(example_code(), 5, 2, 0.2);
    const std::string csv = decomposition_csv(rows);
    CHECK(csv.rfind("subspace,zeta,Phi,Psi,phi,psi\n", 0) == 0);
    CHECK(csv.find("\"{0, 1, 2, 3}\"") != std::string::npos);
}
