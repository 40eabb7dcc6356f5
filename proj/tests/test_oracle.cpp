#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "ewsd/codes.hpp"
#include "ewsd/oracle.hpp"

using namespace ewsd;

namespace {

const char* kExampleGenerator =
    "01001\n"
    "00111\n"
    "00001\n";

GeneratorMatrix example_g() { return parse_generator(kExampleGenerator); }

// Table of the worked example's full erasure-pattern enumeration at
// epsilon = 0.2: pattern string -> (rank, probability).
const std::map<std::string, std::pair<int, double>> kTableI = {
    {"00000", {0, 0.00032}}, {"10000", {0, 0.00128}}, {"01000", {1, 0.00128}},
    {"00100", {1, 0.00128}}, {"00010", {1, 0.00128}}, {"00001", {1, 0.00128}},
    {"11000", {1, 0.00512}}, {"10100", {1, 0.00512}}, {"10010", {1, 0.00512}},
    {"10001", {1, 0.00512}}, {"01100", {2, 0.00512}}, {"01010", {2, 0.00512}},
    {"01001", {2, 0.00512}}, {"00110", {1, 0.00512}}, {"00101", {2, 0.00512}},
    {"00011", {2, 0.00512}}, {"11100", {2, 0.02048}}, {"11010", {2, 0.02048}},
    {"11001", {2, 0.02048}}, {"10110", {1, 0.02048}}, {"10101", {2, 0.02048}},
    {"10011", {2, 0.02048}}, {"01110", {2, 0.02048}}, {"01101", {3, 0.02048}},
    {"01011", {3, 0.02048}}, {"00111", {2, 0.02048}}, {"11110", {2, 0.08192}},
    {"11101", {3, 0.08192}}, {"11011", {3, 0.08192}}, {"10111", {2, 0.08192}},
    {"01111", {3, 0.08192}}, {"11111", {3, 0.32768}}};

GeneratorMatrix random_g(std::mt19937& rng, int kappa, int n) {
    std::vector<std::uint32_t> cols;
    for (int j = 0; j < n; ++j) cols.push_back(rng() % (1u << kappa));
    return GeneratorMatrix(kappa, cols);
}

}  // namespace

TEST_CASE("pattern table reproduces the worked example") {
    const auto rows = pattern_table(example_g(), 0.2);
    REQUIRE(rows.size() == 32);
    for (const auto& row : rows) {
        const auto& expected = kTableI.at(pattern_string(row.pattern, 5));
        CHECK(row.rank == expected.first);
        CHECK(row.probability == Catch::Approx(expected.second).margin(1e-12));
    }
}

TEST_CASE("pattern probabilities sum to one") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_g(rng, 1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 10));
        const double eps = 0.05 + 0.9 * (rng() % 100) / 100.0;
        KahanSum sum;
        for (const auto& row : pattern_table(g, eps)) sum.add(row.probability);
        CHECK(sum.value() == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("equivocation loss oracle on the worked example") {
    const auto g = example_g();
    CHECK(equivocation_loss_oracle(g, ChannelParams::with_epsilon(5, 0.2)).value ==
          Catch::Approx(1.44).margin(1e-12));
    // epsilon = 0: whole message leaks (k = 2 bits)
    CHECK(equivocation_loss_oracle(g, ChannelParams::with_epsilon(5, 0.0)).value ==
          Catch::Approx(2.0).margin(1e-12));
    // epsilon -> 1: nothing leaks
    CHECK(equivocation_loss_oracle(g, ChannelParams::with_epsilon(5, 1.0)).value ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("chi2 oracle") {
    const auto g = example_g();
    CHECK(chi2_oracle(g, ChannelParams::with_epsilon(5, 0.2)).value ==
          Catch::Approx(1.952).margin(1e-9));
    CHECK(chi2_oracle(g, ChannelParams::with_epsilon(5, 1.0)).value ==
          Catch::Approx(0.0).margin(1e-12));
    // full-support q, epsilon = 0: eavesdropper ML-decodes with certainty
    const GeneratorMatrix full(3, {0, 1, 2, 3, 4, 5, 6, 7});
    CHECK(chi2_oracle(full, ChannelParams::with_epsilon(8, 0.0)).value ==
          Catch::Approx(std::exp2(5) - 1.0).margin(1e-9));
}

TEST_CASE("total variation oracle") {
    const auto g = example_g();
    CHECK(total_variation_oracle(g, ChannelParams::with_epsilon(5, 1.0)).value ==
          Catch::Approx(0.0).margin(1e-12));
    // epsilon = 0, full-rank G: deterministic decoding gives 1 - 2^-k
    CHECK(total_variation_oracle(g, ChannelParams::with_epsilon(5, 0.0)).value ==
          Catch::Approx(1.0 - std::exp2(-2)).margin(1e-12));
    CHECK(total_variation_oracle(g, ChannelParams::with_epsilon(5, 0.2)).value >=
          total_variation_oracle(g, ChannelParams::with_epsilon(5, 0.8)).value);
    CHECK_THROWS_AS(total_variation_oracle(GeneratorMatrix(3, std::vector<std::uint32_t>(17, 1)),
                                           ChannelParams::with_epsilon(17, 0.5)),
                    resource_error);
}

TEST_CASE("conditional entropy") {
    const auto g = example_g();
    const std::vector<int> all{1, 2, 3, 4, 5};
    CHECK(conditional_entropy(g, all) == Catch::Approx(0.0));
    CHECK(conditional_entropy(g, std::vector<int>{}) == Catch::Approx(2.0));  // k
    CHECK(conditional_entropy(g, std::vector<int>{1}) == Catch::Approx(1.0));  // zero column
    CHECK_THROWS_AS(conditional_entropy(g, std::vector<int>{6}), validation_error);
}

TEST_CASE("metric ranges for full-rank generators") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 30; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const int n = kappa + static_cast<int>(rng() % 7);
        const auto g = random_g(rng, kappa, n);
        if (!g.full_rank()) continue;  // loss <= k only holds for proper coset codes
        const double eps = (rng() % 11) / 10.0;
        const int k = n - kappa;
        const double loss = equivocation_loss_oracle(g, ChannelParams::with_epsilon(n, eps)).value;
        CHECK(loss >= -1e-12);
        CHECK(loss <= k + 1e-12);
        const double chi = chi2_oracle(g, ChannelParams::with_epsilon(n, eps)).value;
        CHECK(chi >= -1e-12);
        CHECK(chi <= std::exp2(k) - 1.0 + 1e-9);
    }
}

TEST_CASE("fixed-mu and fixed-epsilon modes are consistent") {
    std::mt19937 rng(909);
    for (int trial = 0; trial < 10; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 7);
        const auto g = random_g(rng, kappa, n);
        for (double eps : {0.1, 0.35, 0.7}) {
            KahanSum mixed;
            for (int mu = 0; mu <= n; ++mu)
                mixed.add(binomial_weight(n, mu, eps) *
                          equivocation_loss_oracle(g, ChannelParams::with_mu(n, mu)).value);
            CHECK(mixed.value() ==
                  Catch::Approx(equivocation_loss_oracle(g, ChannelParams::with_epsilon(n, eps)).value)
                      .margin(1e-10));
        }
    }
}

TEST_CASE("leakage is monotone nonincreasing in epsilon") {
    std::mt19937 rng(111);
    for (int trial = 0; trial < 10; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const int n = kappa + static_cast<int>(rng() % (11 - kappa));
        const auto g = random_g(rng, kappa, n);
        double prev = std::numeric_limits<double>::infinity();
        for (int e = 1; e <= 9; ++e) {
            const double loss =
                equivocation_loss_oracle(g, ChannelParams::with_epsilon(n, e / 10.0)).value;
            CHECK(loss <= prev + 1e-12);
            prev = loss;
        }
    }
}

TEST_CASE("parallel enumeration matches sequential") {
    std::mt19937 rng(222);
    const auto g = random_g(rng, 4, 16);
    for (double eps : {0.15, 0.6}) {
        const auto params = ChannelParams::with_epsilon(16, eps);
        CHECK(equivocation_loss_oracle(g, params, 4).value ==
              Catch::Approx(equivocation_loss_oracle(g, params, 1).value).margin(1e-12));
        CHECK(chi2_oracle(g, params, 4).value ==
              Catch::Approx(chi2_oracle(g, params, 1).value).margin(1e-12));
    }
}

TEST_CASE("resource cap on blocklength") {
    CHECK_THROWS_AS(pattern_table(GeneratorMatrix(2, std::vector<std::uint32_t>(25, 1)), 0.5),
                    resource_error);
}
