#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "ewsd/json_io.hpp"

using namespace ewsd;

TEST_CASE("q-vector JSON round trip") {
    const auto code = subspace_exclusion(4, 2);
    const json j = to_json(code);
    CHECK(j.at("kappa") == 4);
    CHECK(j.at("q").size() == 16);
    const auto back = code_from_json(j);
    CHECK(back.kappa == code.kappa);
    for (std::size_t i = 0; i < code.q.size(); ++i) CHECK(back.q[i] == code.q[i]);

    const std::string path = "qtmp_test.json";
    {
        std::ofstream out(path);
        out << j.dump();
    }
    const auto loaded = load_code(path);
    CHECK(loaded.q == code.q);
    std::remove(path.c_str());

    CHECK_THROWS_AS(code_from_json(json{{"kappa", 3}}), validation_error);
    CHECK_THROWS_AS(load_code("definitely_missing.json"), validation_error);
}

TEST_CASE("metric result JSON schema") {
    MetricResult r{Metric::chi2, Method::subspace, 1.952, ChannelParams::with_epsilon(5, 0.2), 0.12, {}};
    const json j = to_json(r);
    CHECK(j.at("metric") == "chi2");
    CHECK(j.at("method") == "subspace");
    CHECK(j.at("value") == 1.952);
    CHECK(j.at("n") == 5);
    CHECK(j.at("epsilon") == 0.2);
    CHECK(j.contains("runtime_ms"));
    CHECK_FALSE(j.contains("mu"));

    MetricResult rm{Metric::equivocation_loss, Method::oracle, 0.5, ChannelParams::with_mu(5, 2), 0.3, {}};
    const json jm = to_json(rm);
    CHECK(jm.at("mu") == 2);
    CHECK_FALSE(jm.contains("epsilon"));
}

TEST_CASE("monte carlo and report JSON schemas") {
    const json mc = to_json(McEstimate{1.44, 0.01, 1000, 7}, Metric::equivocation_loss, 0.2);
    for (const char* key : {"metric", "method", "value", "std_error", "trials", "seed", "epsilon"})
        CHECK(mc.contains(key));
    CHECK(mc.at("method") == "montecarlo");

    const json sp = to_json(StationarityReport{1e-12, 0.5, 64, 9});
    for (const char* key : {"projected_gradient_norm", "min_curvature", "directions", "seed"})
        CHECK(sp.contains(key));

    const json gp = to_json(GlobalProbeReport{"uniform", "unit-sum,q0=0,nonneg", 100, 0, 0.25, 1.0, 9, 120});
    for (const char* key :
         {"construction", "constraints", "samples", "violations", "min_margin", "seed"})
        CHECK(gp.contains(key));

    VerifyReport vr;
    vr.suites.push_back({"demo", 10, 0});
    const json vj = to_json(vr);
    CHECK(vj.at("passed") == true);
    CHECK(vj.at("suites")[0].at("name") == "demo");
}
