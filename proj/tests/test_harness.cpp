#include "orr/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "orr/io.hpp"
#include "test_helpers.hpp"

using namespace orr;
namespace fs = std::filesystem;

namespace {

NetworkConfig small_network(double v = 0.8) {
    std::vector<ServerSpec> servers;
    servers.push_back(
        {2, CostFn::power(0.5, 2), CostFn::power(0.6, 1), CostFn::log_affine(1, 1)});
    servers.push_back(
        {2, CostFn::power(0.3, 1), CostFn::power(0.4, 2), CostFn::log_affine(1, 2)});
    return NetworkConfig(std::move(servers), v);
}

ExperimentConfig small_experiment() {
    ExperimentConfig cfg(small_network());
    cfg.workload.kind = "iid-uniform";
    cfg.workload.seed = 3;
    cfg.horizon = 40;
    cfg.ks = {1, 40};
    cfg.seeds = {0, 1};

    PolicyConfig saddle;
    saddle.name = "saddle";
    saddle.kind = "saddle";
    saddle.params.alpha = 0.01;
    saddle.params.mu = 0.1;
    cfg.policies.push_back(saddle);

    PolicyConfig lazy;
    lazy.name = "lazy";
    lazy.kind = "lazy";
    cfg.policies.push_back(lazy);

    PolicyConfig naive;
    naive.name = "naive";
    naive.kind = "naive";
    cfg.policies.push_back(naive);

    PolicyConfig lagrangian;
    lagrangian.name = "lagrangian";
    lagrangian.kind = "lagrangian";
    cfg.policies.push_back(lagrangian);
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& stem)
        : path(fs::temp_directory_path() / ("orr_test_" + stem)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("policy config json round-trips") {
    PolicyConfig pc;
    pc.name = "saddle_fast";
    pc.kind = "saddle";
    pc.params.alpha = 0.01;
    pc.params.mu = 0.2;
    pc.params.lambda1 = 0.5;
    pc.params.p0_index = 3;
    const auto back = PolicyConfig::from_json(pc.to_json());
    CHECK(back.name == pc.name);
    CHECK(back.kind == pc.kind);
    CHECK(back.params.alpha == pc.params.alpha);
    CHECK(back.params.mu == pc.params.mu);
    CHECK(back.params.lambda1 == pc.params.lambda1);
    CHECK(back.params.p0_index == pc.params.p0_index);

    PolicyConfig lag;
    lag.name = "lagrangian";
    lag.kind = "lagrangian";
    lag.params.lagrangian_mu = 0.25;
    CHECK(PolicyConfig::from_json(lag.to_json()).params.lagrangian_mu == 0.25);

    // name defaults to kind.
    CHECK(PolicyConfig::from_json(nlohmann::json{{"kind", "lazy"}}).name == "lazy");
}

TEST_CASE("experiment config json round-trips and validates") {
    const auto cfg = small_experiment();
    const auto j = cfg.to_json();
    const auto back = ExperimentConfig::from_json(j);
    CHECK(back.horizon == cfg.horizon);
    CHECK(back.ks == cfg.ks);
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.policies.size() == cfg.policies.size());
    CHECK(back.workload.kind == cfg.workload.kind);
    CHECK(back.network.space_size() == cfg.network.space_size());
    CHECK(back.initial_request() == JobRequest{1, 1});

    auto bad = cfg;
    bad.horizon = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.ks = {0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.ks = {41};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.policies.push_back(bad.policies.front());
    CHECK_THROWS_WITH_AS(bad.validate(), "config: duplicate policy name saddle",
                         std::invalid_argument);

    bad = cfg;
    bad.policies.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.seeds.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.b0 = {3, 1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.b0 = {2, 1};
    bad.validate();
    CHECK(bad.initial_request() == JobRequest{2, 1});
}

TEST_CASE("single run fills every ledger column") {
    const auto config = small_network();
    const CostOracle oracle(config);
    const auto cfg = small_experiment();

    WorkloadSpec ws = cfg.workload;
    ws.seed = mix_seed(cfg.workload.seed, 0);
    const auto requests = generate(ws, config, cfg.horizon);
    const auto cr = config.reservation_cost_vector();

    for (const auto& policy : cfg.policies) {
        const auto led = run_policy(config, oracle, policy, requests, 0, {1, 1});
        CHECK(led.policy == policy.name);
        CHECK(led.horizon() == cfg.horizon);
        const auto T = static_cast<std::size_t>(cfg.horizon);
        REQUIRE(led.distributions.size() == T);
        REQUIRE(led.sampled.size() == T);
        REQUIRE(led.request.size() == T);
        REQUIRE(led.realized_reserve.size() == T);
        REQUIRE(led.expected_reserve.size() == T);
        REQUIRE(led.expected_cost_curr.size() == T);
        REQUIRE(led.expected_cost_prev.size() == T);
        REQUIRE(led.step_distance.size() == T);

        CHECK(led.lambda.front() == policy.params.lambda1);
        for (std::size_t t = 0; t < T; ++t) {
            CHECK(led.request[t] == config.index_of(requests[t]));
            CHECK(led.realized_reserve[t] ==
                  cr[static_cast<std::size_t>(led.sampled[t])]);
            const bool deterministic = policy.kind != "saddle";
            if (deterministic) {
                CHECK(led.expected_reserve[t] == led.realized_reserve[t]);
                CHECK(led.distributions[t][static_cast<std::size_t>(led.sampled[t])] == 1.0);
            }
            if (policy.kind == "lazy" || policy.kind == "naive")
                CHECK(led.lambda[t] == 0.0);
        }
        if (policy.kind == "lazy") {
            // A^1 = b^0 = (1,1); afterwards A^t = b^{t-1}.
            CHECK(led.sampled.front() == config.index_of({1, 1}));
            for (std::size_t t = 1; t < T; ++t)
                CHECK(led.sampled[t] == led.request[t - 1]);
        }
    }
}

TEST_CASE("saddle run matches a manual stepping loop") {
    const auto config = small_network();
    const CostOracle oracle(config);
    const auto cfg = small_experiment();
    const auto& policy = cfg.policies.front();
    REQUIRE(policy.kind == "saddle");

    WorkloadSpec ws = cfg.workload;
    ws.seed = mix_seed(cfg.workload.seed, 1);
    const auto requests = generate(ws, config, cfg.horizon);
    const auto led = run_policy(config, oracle, policy, requests, 1, {1, 1});

    std::mt19937_64 rng(mix_seed(1, fnv1a_hash(policy.name)));
    SaddleState state{Distribution::uniform(static_cast<std::size_t>(config.space_size())),
                      policy.params.lambda1, JobRequest{1, 1}, policy.params.alpha,
                      policy.params.mu};
    for (int t = 1; t <= cfg.horizon; ++t) {
        const JobRequest& b_prev =
            t == 1 ? JobRequest{1, 1} : requests[static_cast<std::size_t>(t) - 2];
        CHECK(led.lambda[static_cast<std::size_t>(t) - 1] == state.lambda);
        const auto [decision, next] = saddle_step(state, b_prev, rng, oracle);
        state = next;
        CHECK(led.sampled[static_cast<std::size_t>(t) - 1] == decision.sampled_index);
        CHECK(led.expected_cost_prev[static_cast<std::size_t>(t) - 1] ==
              decision.expected_cost_vs_prev_request);
        for (std::size_t a = 0; a < decision.distribution.size(); ++a)
            CHECK(led.distributions[static_cast<std::size_t>(t) - 1][a] ==
                  decision.distribution[a]);
    }
    CHECK(led.final_lambda == state.lambda);
}

TEST_CASE("regret series recompute from the ledger's sampled column") {
    const auto config = small_network();
    const CostOracle oracle(config);
    const auto cfg = small_experiment();

    WorkloadSpec ws = cfg.workload;
    ws.seed = mix_seed(cfg.workload.seed, 0);
    const auto requests = generate(ws, config, cfg.horizon);
    const auto led = run_policy(config, oracle, cfg.policies.front(), requests, 0, {1, 1});

    const auto bench = solve_static_K(config, oracle, requests, 1);
    REQUIRE(bench.feasible);
    const auto series = realized_regret_K(led, bench);
    const auto cr = config.reservation_cost_vector();
    double cum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        cum += cr[static_cast<std::size_t>(led.sampled[t])] - bench.reserve_cost;
        CHECK(series[t] == doctest::Approx(cum).epsilon(1e-12));
    }
}

TEST_CASE("experiment writes the full output tree deterministically") {
    auto cfg = small_experiment();
    cfg.emit_svg = true;
    TempDir first("exp_a"), second("exp_b");
    run_experiment(cfg, first.path.string());
    run_experiment(cfg, second.path.string());

    const std::set<std::string> expected{
        "summary.json",       "timings.csv",        "fig_violations.csv",
        "fig_violations.svg", "fig_regret_k1.csv",  "fig_regret_k1.svg",
        "fig_regret_kT.csv",  "fig_regret_kT.svg",  "fig_step_distance.csv",
        "fig_step_distance.svg"};
    std::set<std::string> found;
    for (const auto& entry : fs::directory_iterator(first.path))
        found.insert(entry.path().filename().string());
    for (const auto& name : expected) {
        CAPTURE(name);
        CHECK(found.count(name) == 1);
    }
    for (const auto& policy : cfg.policies)
        for (auto seed : cfg.seeds) {
            const std::string ledger =
                "ledger_" + policy.name + "_" + std::to_string(seed) + ".csv";
            CHECK(found.count(ledger) == 1);
        }

    // Byte-identical reruns, modulo wall-clock timings.
    std::set<std::string> other;
    for (const auto& entry : fs::directory_iterator(second.path))
        other.insert(entry.path().filename().string());
    CHECK(found == other);
    for (const auto& name : found) {
        if (name == "timings.csv") continue;
        CAPTURE(name);
        CHECK(fnv1a_hash_file(first.path / name) == fnv1a_hash_file(second.path / name));
    }

    const auto summary = nlohmann::json::parse(read_file(first.path / "summary.json"));
    CHECK(summary.at("runs").size() == cfg.policies.size() * cfg.seeds.size());
    CHECK(summary.at("benchmarks").size() == cfg.seeds.size() * cfg.ks.size());
    CHECK(!summary.at("bounds").is_null());
    CHECK(summary.at("constants").at("theta_bound").get<double>() > 0.0);

    // Ledger CSV has one header plus one row per slot.
    const auto ledger = read_file(first.path / "ledger_saddle_0.csv");
    const auto rows = static_cast<int>(std::count(ledger.begin(), ledger.end(), '\n'));
    CHECK(rows == cfg.horizon + 1);

    std::ostringstream table;
    compare_policies(first.path.string(), table);
    CHECK(fs::exists(first.path / "compare.csv"));
    CHECK(fs::exists(first.path / "compare.txt"));
    CHECK(table.str().find("saddle") != std::string::npos);
    CHECK(table.str().find("violation_avg") != std::string::npos);

    const auto compare_csv = read_file(first.path / "compare.csv");
    CHECK(static_cast<std::size_t>(std::count(compare_csv.begin(), compare_csv.end(), '\n')) ==
          cfg.policies.size() * cfg.seeds.size() + 1);
}

TEST_CASE("single-slot horizon produces a one-row ledger") {
    auto cfg = small_experiment();
    cfg.horizon = 1;
    cfg.ks = {1};
    cfg.seeds = {0};
    TempDir dir("exp_t1");
    run_experiment(cfg, dir.path.string());
    const auto ledger = read_file(dir.path / "ledger_lazy_0.csv");
    CHECK(std::count(ledger.begin(), ledger.end(), '\n') == 2);
}

TEST_CASE("compare requires a finished experiment directory") {
    std::ostringstream sink;
    CHECK_THROWS_AS(compare_policies("definitely_missing_dir", sink), std::runtime_error);
}

TEST_CASE("bounds report carries the full theta table") {
    const auto cfg = small_experiment();
    const auto j = bounds_report_json(cfg, 50, 0.1);
    CHECK(j.at("theta_table").size() == 50);
    CHECK(j.at("alpha").get<double>() == 0.01);
    CHECK(j.at("mu").get<double>() == 0.1);
    const double tight = j.at("tightest").at("lambda_cap").get<double>();
    CHECK(tight <= j.at("theta_table").at(0).at("lambda_cap").get<double>() + 1e-12);
    CHECK(j.at("hp_slack").at("value").get<double>() > 0.0);
    CHECK(j.at("regret_caps").size() == cfg.ks.size());
}
