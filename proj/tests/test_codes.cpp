#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ewsd/codes.hpp"

using namespace ewsd;

namespace {

const char* kExampleGenerator =
    "01001\n"
    "00111\n"
    "00001\n";

CodeDefinition random_realizable(std::mt19937& rng, int kappa, int n) {
    // random multiset of n columns
    std::vector<std::uint32_t> cols;
    for (int j = 0; j < n; ++j) cols.push_back(rng() % (1u << kappa));
    return from_generator(GeneratorMatrix(kappa, cols));
}

}  // namespace

TEST_CASE("from_generator reproduces the worked-example q vector") {
    const auto code = from_generator(parse_generator(kExampleGenerator));
    REQUIRE(code.kappa == 3);
    const std::vector<double> expected{0.2, 0.2, 0.4, 0, 0, 0, 0, 0.2};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(code.q[i] == Catch::Approx(expected[i]).margin(1e-15));
}

TEST_CASE("single repeated column") {
    const auto code = from_generator(GeneratorMatrix(3, {1, 1, 1, 1}));
    CHECK(code.q[1] == 1.0);
    for (std::size_t i = 0; i < code.q.size(); ++i)
        if (i != 1) CHECK(code.q[i] == 0.0);
}

TEST_CASE("to_generator emits canonical sorted columns") {
    const auto code = from_generator(parse_generator(kExampleGenerator));
    const auto g = to_generator(code, 5);
    CHECK(g.cols() == std::vector<std::uint32_t>{0, 1, 2, 2, 7});
}

TEST_CASE("round trip from_generator(to_generator(q, n)) = q") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const int kappa = 1 + static_cast<int>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 12);
        const auto code = random_realizable(rng, kappa, n);
        const auto back = from_generator(to_generator(code, n));
        for (std::size_t i = 0; i < code.q.size(); ++i)
            CHECK(back.q[i] == Catch::Approx(code.q[i]).margin(1e-12));
    }
}

TEST_CASE("realizability") {
    const auto ubar = uniform_fraction(3);
    CHECK(check_realizable(ubar, 7).realizable);
    CHECK(check_realizable(ubar, 14).realizable);
    const auto rep = check_realizable(ubar, 3);
    CHECK_FALSE(rep.realizable);
    CHECK_FALSE(rep.offending.empty());
    CHECK_THROWS_AS(to_generator(ubar, 3), RealizabilityError);
}

TEST_CASE("uniform fraction construction") {
    const auto ubar = uniform_fraction(3);
    CHECK(ubar.q[0] == 0.0);
    for (std::size_t i = 1; i < 8; ++i) CHECK(ubar.q[i] == Catch::Approx(1.0 / 7).margin(1e-16));
    CHECK(ubar.reduced);
    REQUIRE(ubar.natural_n.has_value());
    CHECK(*ubar.natural_n == 7);

    // n = 2^kappa - 1 realization is the simplex code: all nonzero columns once
    const auto g = to_generator(ubar, 7);
    CHECK(g.cols() == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 6, 7});

    // equals subspace_exclusion(kappa, 0)
    const auto sec0 = subspace_exclusion(3, 0);
    for (std::size_t i = 0; i < 8; ++i) CHECK(sec0.q[i] == ubar.q[i]);
}

TEST_CASE("subspace exclusion construction") {
    const auto sec = subspace_exclusion(3, 2);
    const std::vector<double> expected{0, 0, 0, 0, 0.25, 0.25, 0.25, 0.25};
    for (std::size_t i = 0; i < 8; ++i) CHECK(sec.q[i] == Catch::Approx(expected[i]).margin(1e-16));
    REQUIRE(sec.natural_n.has_value());
    CHECK(*sec.natural_n == 4);
    CHECK(check_realizable(sec, 4).realizable);
    // n = 4 realization: the augmented Hadamard generator's four columns
    CHECK(to_generator(sec, 4).cols() == std::vector<std::uint32_t>{4, 5, 6, 7});

    CHECK_THROWS_AS(subspace_exclusion(3, 3), validation_error);

    // arbitrary-subspace variant agrees with the canonical one on the
    // canonical subspace
    std::vector<std::uint32_t> ubasis{1, 2};
    const auto variant = subspace_exclusion(Subspace::from_basis(3, ubasis));
    for (std::size_t i = 0; i < 8; ++i) CHECK(variant.q[i] == sec.q[i]);
}

TEST_CASE("rho difference vector and magnitude") {
    const auto r0 = rho(3, 0);
    CHECK(r0.magnitude == 0.0);
    for (double v : r0.values) CHECK(v == 0.0);

    CHECK(rho(3, 1).magnitude == Catch::Approx(std::sqrt(1.0 / 42)).epsilon(1e-14));

    // formula value equals the direct vector-norm of (q-check - q-bar)
    for (int kappa = 1; kappa <= 8; ++kappa) {
        const auto ubar = uniform_fraction(kappa);
        for (int u = 0; u <= kappa - 1; ++u) {
            const auto sec = subspace_exclusion(kappa, u);
            const auto r = rho(kappa, u);
            double norm2 = 0.0, diff2 = 0.0;
            for (std::size_t i = 0; i < ubar.q.size(); ++i) {
                norm2 += r.values[i] * r.values[i];
                const double d = sec.q[i] - ubar.q[i];
                diff2 += d * d;
                CHECK(r.values[i] == Catch::Approx(sec.q[i] - ubar.q[i]).margin(1e-15));
            }
            CHECK(std::sqrt(norm2) == Catch::Approx(r.magnitude).margin(1e-14));
            CHECK(std::sqrt(diff2) == Catch::Approx(r.magnitude).margin(1e-14));
        }
    }
}

TEST_CASE("constructions satisfy the simplex constraints") {
    for (int kappa = 1; kappa <= 8; ++kappa) {
        for (int u = 0; u <= kappa - 1; ++u) {
            const auto sec = subspace_exclusion(kappa, u);
            KahanSum sum;
            for (double v : sec.q) {
                CHECK(v >= 0.0);
                sum.add(v);
            }
            CHECK(std::abs(sum.value() - 1.0) <= 1e-12);
            CHECK(check_realizable(sec, *sec.natural_n).realizable);
        }
    }
}

TEST_CASE("validation rejects malformed q") {
    CHECK_THROWS_AS(CodeDefinition::from_vector(2, {0.5, 0.5, 0.0}), validation_error);
    CHECK_THROWS_AS(CodeDefinition::from_vector(2, {0.5, 0.5, 0.5, 0.5}), validation_error);
    CHECK_THROWS_AS(CodeDefinition::from_vector(2, {-0.5, 0.5, 0.5, 0.5}), validation_error);
    CHECK_THROWS_AS(from_generator(GeneratorMatrix(2, {})), validation_error);
}
