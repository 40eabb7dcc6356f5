// JSON serialization for the documented external interfaces: q-vector files,
// metric results, Monte Carlo estimates, probe and verify reports.
#pragma once

#include <json.hpp>

#include <fstream>
#include <string>

#include "ewsd/codes.hpp"
#include "ewsd/mcsim.hpp"
#include "ewsd/metrics.hpp"
#include "ewsd/optprobe.hpp"
#include "ewsd/verify.hpp"

namespace ewsd {

using nlohmann::json;

// q-vector file schema: { "kappa": int, "q": [2^kappa numbers] }
inline json to_json(const CodeDefinition& code) {
    return json{{"kappa", code.kappa}, {"q", code.q}};
}

inline CodeDefinition code_from_json(const json& j) {
    if (!j.contains("kappa") || !j.contains("q"))
        throw validation_error("q-vector file needs fields 'kappa' and 'q'");
    return CodeDefinition::from_vector(j.at("kappa").get<int>(), j.at("q").get<std::vector<double>>());
}

inline CodeDefinition load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open q-vector file: " + path);
    json j;
    in >> j;
    return code_from_json(j);
}

inline json to_json(const MetricResult& r) {
    json j{{"metric", to_string(r.metric)},
           {"method", to_string(r.method)},
           {"value", r.value},
           {"n", r.params.n},
           {"runtime_ms", r.runtime_ms}};
    if (r.params.fixed_epsilon())
        j["epsilon"] = r.params.epsilon;
    else
        j["mu"] = r.params.mu;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const McEstimate& e, Metric metric, double epsilon) {
    return json{{"metric", to_string(metric)}, {"method", "montecarlo"}, {"value", e.estimate},
                {"std_error", e.std_error},   {"trials", e.trials},      {"seed", e.seed},
                {"epsilon", epsilon}};
}

inline json to_json(const StationarityReport& r) {
    return json{{"projected_gradient_norm", r.projected_gradient_norm},
                {"min_curvature", r.min_curvature},
                {"directions", r.directions},
                {"seed", r.seed}};
}

inline json to_json(const GlobalProbeReport& r) {
    return json{{"construction", r.construction},
                {"constraints", r.constraints},
                {"samples", r.samples},
                {"violations", r.violations},
                {"min_margin", r.min_margin},
                {"candidate_value", r.candidate_value},
                {"attempts", r.attempts},
                {"seed", r.seed}};
}

inline json to_json(const VerifyReport& r) {
    json suites = json::array();
    for (const auto& s : r.suites)
        suites.push_back(json{{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}});
    return json{{"passed", r.passed()}, {"suites", suites}};
}

}  // namespace ewsd
