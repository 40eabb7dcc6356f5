// Command-line surface: analyze, construct, verify, probe, simulate, bench.
// Structured JSON/CSV output for scripting; every run echoes its resolved
// configuration. Exit codes: 0 success, 1 internal failure, 2 validation,
// 3 resource limit.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ewsd/bench.hpp"
#include "ewsd/codes.hpp"
#include "ewsd/json_io.hpp"
#include "ewsd/mcsim.hpp"
#include "ewsd/optprobe.hpp"
#include "ewsd/oracle.hpp"
#include "ewsd/sdmetrics.hpp"
#include "ewsd/verify.hpp"

namespace {

using ewsd::json;

int default_parallelism() {
    if (const char* env = std::getenv("EWSD_PARALLEL")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

ewsd::GeneratorMatrix load_generator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ewsd::validation_error("cannot open generator file: " + path);
    return ewsd::parse_generator(in);
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
    if (path) {
        std::ofstream out(*path);
        if (!out) throw ewsd::validation_error("cannot open output file: " + *path);
        out << text;
    } else {
        std::cout << text;
    }
}

struct AnalyzeArgs {
    std::string generator_path, q_path;
    int n = -1;
    double epsilon = -1.0;
    int mu = -1;
    std::string metric = "equivocation";
    std::string method = "all";
    long trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string format = "json";
    int parallel = 1;
    std::string dump_patterns, dump_decomposition;
    int dump_mu = 0;          // mu used for the Phi/Psi columns when in epsilon mode
    double dump_epsilon = 0;  // epsilon used for the phi/psi columns when in mu mode
};

int run_analyze(const AnalyzeArgs& a) {
    if (a.generator_path.empty() == a.q_path.empty())
        throw ewsd::validation_error("provide exactly one of --generator or --q");
    if ((a.epsilon >= 0.0) == (a.mu >= 0))
        throw ewsd::validation_error("provide exactly one of --epsilon or --mu");

    std::optional<ewsd::GeneratorMatrix> g;
    ewsd::CodeDefinition code{1, {1.0, 0.0}, false, std::nullopt};
    int n = 0;
    if (!a.generator_path.empty()) {
        g = load_generator(a.generator_path);
        code = ewsd::from_generator(*g);
        n = g->n();
        if (a.n >= 0 && a.n != n)
            throw ewsd::validation_error("--n conflicts with the generator's blocklength");
    } else {
        code = ewsd::load_code(a.q_path);
        if (a.n < 1) throw ewsd::validation_error("--q input requires --n");
        n = a.n;
    }
    const auto params = a.epsilon >= 0.0 ? ewsd::ChannelParams::with_epsilon(n, a.epsilon)
                                         : ewsd::ChannelParams::with_mu(n, a.mu);

    const bool want_oracle = a.method == "oracle" || a.method == "all";
    const bool want_subspace = a.method == "subspace" || a.method == "all";
    const bool want_mc = a.method == "montecarlo" || (a.method == "all" && a.trials > 0);
    if (a.metric == "tv" && (a.method == "subspace" || a.method == "montecarlo"))
        throw ewsd::validation_error("total variation is oracle-only");
    if (want_mc) {
        if (a.trials < 1) throw ewsd::validation_error("montecarlo needs --trials");
        if (!a.seed_set) throw ewsd::validation_error("montecarlo needs --seed");
        if (!params.fixed_epsilon())
            throw ewsd::validation_error("montecarlo supports --epsilon mode only");
    }

    // oracle / montecarlo need a realized generator; --q inputs are realized
    // on demand (unrealizable q is a validation error per the contract)
    auto need_generator = [&]() -> const ewsd::GeneratorMatrix& {
        if (!g) g = ewsd::to_generator(code, n);
        return *g;
    };

    std::vector<ewsd::MetricResult> results;
    if (a.metric == "tv") {
        if (want_oracle) results.push_back(ewsd::total_variation_oracle(need_generator(), params, a.parallel));
    } else {
        const bool chi = a.metric == "chi2";
        if (want_oracle)
            results.push_back(chi ? ewsd::chi2_oracle(need_generator(), params, a.parallel)
                                  : ewsd::equivocation_loss_oracle(need_generator(), params, a.parallel));
        if (want_subspace)
            results.push_back(chi ? ewsd::chi2_sd(code, params)
                                  : ewsd::equivocation_loss_sd(code, params));
        if (want_mc) {
            ewsd::StopWatch sw;
            const auto est = chi ? ewsd::estimate_chi2(need_generator(), a.epsilon, a.trials, a.seed,
                                                       a.parallel)
                                 : ewsd::estimate_equivocation(need_generator(), a.epsilon, a.trials,
                                                               a.seed, a.parallel);
            ewsd::MetricResult r{chi ? ewsd::Metric::chi2 : ewsd::Metric::equivocation_loss,
                                 ewsd::Method::montecarlo, est.estimate, params, sw.elapsed_ms(), {}};
            r.note = "std_error=" + std::to_string(est.std_error);
            results.push_back(r);
        }
    }

    if (!a.dump_patterns.empty()) {
        std::ostringstream csv;
        csv << "pattern,rank,probability\n";
        csv.precision(17);
        for (const auto& row :
             ewsd::pattern_table(need_generator(), params.fixed_epsilon() ? params.epsilon : 0.0))
            csv << ewsd::pattern_string(row.pattern, n) << ',' << row.rank << ',' << row.probability
                << '\n';
        write_text(a.dump_patterns, csv.str());
    }
    if (!a.dump_decomposition.empty()) {
        const auto rows = ewsd::decomposition_table(
            code, n, params.fixed_epsilon() ? a.dump_mu : params.mu,
            params.fixed_epsilon() ? params.epsilon : a.dump_epsilon);
        write_text(a.dump_decomposition, ewsd::decomposition_csv(rows));
    }

    json config{{"command", "analyze"}, {"metric", a.metric},   {"method", a.method},
                {"n", n},               {"parallel", a.parallel}};
    if (params.fixed_epsilon())
        config["epsilon"] = params.epsilon;
    else
        config["mu"] = params.mu;
    if (a.trials > 0) config["trials"] = a.trials;
    if (a.seed_set) config["seed"] = a.seed;

    if (a.format == "csv") {
        std::cerr << config.dump() << '\n';
        std::cout << "metric,method,value,n,param,runtime_ms\n";
        for (const auto& r : results)
            std::cout << to_string(r.metric) << ',' << to_string(r.method) << ',' << r.value << ','
                      << r.params.n << ','
                      << (r.params.fixed_epsilon() ? r.params.epsilon : static_cast<double>(r.params.mu))
                      << ',' << r.runtime_ms << '\n';
    } else {
        json out{{"config", config}};
        out["results"] = json::array();
        for (const auto& r : results) out["results"].push_back(ewsd::to_json(r));
        if (results.size() > 1) {
            json deltas = json::object();
            for (std::size_t i = 0; i < results.size(); ++i)
                for (std::size_t j = i + 1; j < results.size(); ++j)
                    deltas[to_string(results[i].method) + "_vs_" + to_string(results[j].method)] =
                        std::abs(results[i].value - results[j].value);
            out["deltas"] = deltas;
        }
        std::cout << out.dump(2) << '\n';
    }
    return 0;
}

int run_construct(int kappa, const std::string& type, int u, bool emit_generator,
                  const std::optional<std::string>& output) {
    if (type == "sec" && (u < 0 || u > kappa - 1))
        throw ewsd::validation_error("sec construction needs 0 <= u <= kappa - 1");
    const ewsd::CodeDefinition code =
        type == "uniform" ? ewsd::uniform_fraction(kappa) : ewsd::subspace_exclusion(kappa, u);
    if (emit_generator) {
        write_text(output, ewsd::emit_generator(ewsd::to_generator(code, *code.natural_n)));
    } else {
        json j = ewsd::to_json(code);
        j["natural_n"] = *code.natural_n;
        write_text(output, j.dump(2) + "\n");
    }
    return 0;
}

int run_probe(const std::string& mode, const std::string& construction, int kappa, int u, int n,
              double epsilon, const std::string& metric, int samples, int directions,
              std::uint64_t seed, bool no_min_dist, int parallel) {
    ewsd::Construction cons =
        construction == "uniform" ? ewsd::Construction::uniform() : ewsd::Construction::sec(u);
    const ewsd::CodeDefinition code = construction == "uniform" ? ewsd::uniform_fraction(kappa)
                                                                : ewsd::subspace_exclusion(kappa, u);
    if (n < 1) n = *code.natural_n;

    if (mode == "stationarity") {
        if (metric != "equivocation")
            throw ewsd::validation_error("stationarity probe covers the equivocation metric");
        ewsd::ConstraintSet cs = construction == "uniform" ? ewsd::ConstraintSet::simplex()
                                                           : ewsd::ConstraintSet::sphere(kappa, u);
        const auto rep = ewsd::stationarity_probe(code, n, epsilon, cs, directions, seed);
        json out{{"config",
                  json{{"command", "probe"}, {"mode", mode}, {"construction", cons.label()},
                       {"kappa", kappa}, {"n", n}, {"epsilon", epsilon}, {"directions", directions},
                       {"seed", seed}}},
                 {"report", ewsd::to_json(rep)},
                 {"constraints", cs.describe()}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    if (mode == "sphere-sample") {
        if (metric != "chi2")
            throw ewsd::validation_error("sphere-sample probe covers the chi2 metric");
        const auto rep =
            ewsd::chi2_global_probe(kappa, n, epsilon, cons, samples, seed, !no_min_dist, parallel);
        json out{{"config",
                  json{{"command", "probe"}, {"mode", mode}, {"construction", cons.label()},
                       {"kappa", kappa}, {"n", n}, {"epsilon", epsilon}, {"samples", samples},
                       {"seed", seed}, {"min_dist_enforced", !no_min_dist}}},
                 {"report", ewsd::to_json(rep)}};
        std::cout << out.dump(2) << '\n';
        return rep.violations == 0 ? 0 : 1;
    }
    throw ewsd::validation_error("unknown probe mode: " + mode);
}

int run_simulate(const std::string& generator_path, double epsilon, long trials, std::uint64_t seed,
                 const std::string& metric, int parallel) {
    const auto g = load_generator(generator_path);
    const bool chi = metric == "chi2";
    const auto est = chi ? ewsd::estimate_chi2(g, epsilon, trials, seed, parallel)
                         : ewsd::estimate_equivocation(g, epsilon, trials, seed, parallel);
    json out{{"config", json{{"command", "simulate"}, {"generator", generator_path},
                             {"epsilon", epsilon}, {"trials", trials}, {"seed", seed},
                             {"metric", metric}, {"parallel", parallel}}}};
    out.update(ewsd::to_json(est, chi ? ewsd::Metric::chi2 : ewsd::Metric::equivocation_loss, epsilon));
    std::cout << out.dump(2) << '\n';
    return 0;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw ewsd::validation_error("range must look like A..B, got: " + text);
    try {
        std::size_t lo_used = 0, hi_used = 0;
        const std::string lo_text = text.substr(0, dots), hi_text = text.substr(dots + 2);
        const int lo = std::stoi(lo_text, &lo_used);
        const int hi = std::stoi(hi_text, &hi_used);
        if (lo_used != lo_text.size() || hi_used != hi_text.size())
            throw ewsd::validation_error("range must look like A..B, got: " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ewsd::validation_error("range must look like A..B, got: " + text);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact secrecy metrics for coset codes over the binary erasure wiretap channel"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    an.parallel = default_parallelism();
    auto* analyze = app.add_subcommand("analyze", "compute a metric by one or all methods");
    analyze->add_option("--generator", an.generator_path, "generator matrix text file");
    analyze->add_option("--q", an.q_path, "q-vector JSON file");
    analyze->add_option("--n", an.n, "blocklength (required with --q)");
    analyze->add_option("--epsilon", an.epsilon, "erasure probability in [0, 1]");
    analyze->add_option("--mu", an.mu, "fixed revealed-bit count");
    analyze->add_option("--metric", an.metric, "equivocation | chi2 | tv")
        ->check(CLI::IsMember({"equivocation", "chi2", "tv"}));
    analyze->add_option("--method", an.method, "oracle | subspace | montecarlo | all")
        ->check(CLI::IsMember({"oracle", "subspace", "montecarlo", "all"}));
    analyze->add_option("--trials", an.trials, "Monte Carlo trials");
    analyze->add_option("--seed", an.seed, "Monte Carlo seed")->each([&](const std::string&) {
        an.seed_set = true;
    });
    analyze->add_option("--format", an.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    analyze->add_option("--parallel", an.parallel, "worker count (default EWSD_PARALLEL or 1)");
    analyze->add_option("--dump-patterns", an.dump_patterns, "write the erasure-pattern table CSV here");
    analyze->add_option("--dump-decomposition", an.dump_decomposition,
                        "write the subspace-decomposition table CSV here");
    analyze->add_option("--dump-mu", an.dump_mu,
                        "mu for the decomposition dump's Phi/Psi columns (epsilon mode)");
    analyze->add_option("--dump-epsilon", an.dump_epsilon,
                        "epsilon for the decomposition dump's phi/psi columns (mu mode)");

    int c_kappa = 3, c_u = -1;
    std::string c_type = "uniform";
    bool c_emit_generator = false;
    std::string c_output;
    auto* construct = app.add_subcommand("construct", "emit a named code construction");
    construct->add_option("--kappa", c_kappa, "code dimension")->required();
    construct->add_option("--type", c_type, "uniform | sec")
        ->check(CLI::IsMember({"uniform", "sec"}));
    construct->add_option("--u", c_u, "excluded-subspace dimension (sec)");
    construct->add_flag("--emit-generator", c_emit_generator,
                        "emit a generator at the natural blocklength instead of a q vector");
    construct->add_option("--output", c_output, "output path (default stdout)");

    ewsd::VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run the oracle-equivalence and lemma suites");
    verify->add_option("--kappa-max", vo.kappa_max, "largest code dimension sampled");
    verify->add_option("--n-max", vo.n_max, "largest blocklength sampled");
    verify->add_option("--samples", vo.samples, "random cases per suite");
    verify->add_option("--seed", vo.seed, "master seed");
    verify->add_flag("--mutate-k3", vo.mutate_k3,
                     "negative control: corrupt K_3 and expect the suites to fail");

    std::string p_mode = "stationarity", p_construction = "uniform", p_metric;
    int p_kappa = 3, p_u = -1, p_n = -1, p_samples = 10000, p_directions = 64;
    int p_parallel = default_parallelism();
    double p_epsilon = 0.5;
    std::uint64_t p_seed = 20240001ULL;
    bool p_no_min_dist = false;
    auto* probe = app.add_subcommand("probe", "optimality probes for the named constructions");
    probe->add_option("--mode", p_mode, "stationarity | sphere-sample")
        ->check(CLI::IsMember({"stationarity", "sphere-sample"}));
    probe->add_option("--construction", p_construction, "uniform | sec")
        ->check(CLI::IsMember({"uniform", "sec"}));
    probe->add_option("--kappa", p_kappa, "code dimension")->required();
    probe->add_option("--u", p_u, "excluded-subspace dimension (sec)");
    probe->add_option("--n", p_n, "blocklength (default: construction's natural blocklength)");
    probe->add_option("--epsilon", p_epsilon, "erasure probability");
    probe->add_option("--metric", p_metric, "equivocation (stationarity) | chi2 (sphere-sample)");
    probe->add_option("--samples", p_samples, "sphere/simplex samples");
    probe->add_option("--directions", p_directions, "curvature directions (stationarity)");
    probe->add_option("--seed", p_seed, "master seed");
    probe->add_option("--parallel", p_parallel, "worker count for sampling");
    probe->add_flag("--no-min-dist", p_no_min_dist,
                    "drop the first-SEC minimum-distance constraint (negative control)");

    std::string s_generator;
    double s_epsilon = 0.2;
    long s_trials = 0;
    std::uint64_t s_seed = 0;
    bool s_seed_set = false;
    std::string s_metric = "equivocation";
    int s_parallel = default_parallelism();
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimation over the erasure channel");
    simulate->add_option("--generator", s_generator, "generator matrix text file")->required();
    simulate->add_option("--epsilon", s_epsilon, "erasure probability")->required();
    simulate->add_option("--trials", s_trials, "number of trials")->required();
    simulate->add_option("--seed", s_seed, "master seed (mandatory)")->each([&](const std::string&) {
        s_seed_set = true;
    });
    simulate->add_option("--metric", s_metric, "equivocation | chi2")
        ->check(CLI::IsMember({"equivocation", "chi2"}));
    simulate->add_option("--parallel", s_parallel, "worker count");

    std::string b_kappa_range = "3..4", b_n_range = "8..16";
    ewsd::BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "oracle vs subspace runtime grid (CSV)");
    bench->add_option("--kappa-range", b_kappa_range, "A..B");
    bench->add_option("--n-range", b_n_range, "C..D");
    bench->add_option("--epsilon", bo.epsilon, "erasure probability");
    bench->add_option("--repeats", bo.repeats, "timing repeats per cell");
    bench->add_option("--seed", bo.seed, "code-sampling seed");

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return run_analyze(an);
        if (construct->parsed())
            return run_construct(c_kappa, c_type, c_type == "sec" ? c_u : 0, c_emit_generator,
                                 c_output.empty() ? std::nullopt : std::make_optional(c_output));
        if (verify->parsed()) {
            const auto report = ewsd::run_verify(vo);
            json out{{"config", json{{"command", "verify"}, {"kappa_max", vo.kappa_max},
                                     {"n_max", vo.n_max}, {"samples", vo.samples}, {"seed", vo.seed},
                                     {"mutate_k3", vo.mutate_k3}}}};
            out.update(ewsd::to_json(report));
            std::cout << out.dump(2) << '\n';
            return report.passed() ? 0 : 1;
        }
        if (probe->parsed()) {
            if (p_metric.empty()) p_metric = p_mode == "stationarity" ? "equivocation" : "chi2";
            return run_probe(p_mode, p_construction, p_kappa, p_construction == "sec" ? p_u : 0, p_n,
                             p_epsilon, p_metric, p_samples, p_directions, p_seed, p_no_min_dist,
                             p_parallel);
        }
        if (simulate->parsed()) {
            if (!s_seed_set) throw ewsd::validation_error("simulate requires --seed");
            return run_simulate(s_generator, s_epsilon, s_trials, s_seed, s_metric, s_parallel);
        }
        if (bench->parsed()) {
            std::tie(bo.kappa_lo, bo.kappa_hi) = parse_range(b_kappa_range);
            std::tie(bo.n_lo, bo.n_hi) = parse_range(b_n_range);
            std::cerr << json{{"command", "bench"}, {"kappa_range", b_kappa_range},
                              {"n_range", b_n_range}, {"epsilon", bo.epsilon},
                              {"repeats", bo.repeats}, {"seed", bo.seed}}
                             .dump()
                      << '\n';
            std::cout << ewsd::bench_csv(ewsd::run_bench(bo));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ewsd::resource_error& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const ewsd::validation_error& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal failure: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
