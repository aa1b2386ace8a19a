#include "orr/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace orr;

namespace {

NetworkConfig tiny_network(double v) {
    std::vector<ServerSpec> servers;
    servers.push_back(
        {2, CostFn::power(0.5, 2), CostFn::power(0.6, 1), CostFn::log_affine(1, 1)});
    servers.push_back(
        {2, CostFn::power(0.3, 1), CostFn::power(0.4, 2), CostFn::log_affine(1, 2)});
    return NetworkConfig(std::move(servers), v);
}

std::vector<JobRequest> random_requests(const NetworkConfig& config, int T,
                                        std::mt19937_64& rng) {
    std::vector<JobRequest> seq;
    for (int t = 0; t < T; ++t) {
        JobRequest b(static_cast<std::size_t>(config.server_count()));
        for (int n = 0; n < config.server_count(); ++n)
            b[static_cast<std::size_t>(n)] =
                1 + static_cast<int>(test_uniform(rng) * config.capacity(n)) %
                        config.capacity(n);
        seq.push_back(std::move(b));
    }
    return seq;
}

}  // namespace

TEST_CASE("cost magnitude cap on the reference two-server instance") {
    const auto config = two_server_network();
    const CostOracle oracle(config);
    CHECK(compute_theta(config, oracle) == doctest::Approx(65.9).epsilon(1e-9));

    // The cap is attained by the reserve cost; the violation part peaks at
    // C_V((1,1),(7,8)) = 0.1*36 + 0.2*49.
    double max_cv = 0.0, max_cr = 0.0;
    for (std::int64_t a = 0; a < config.space_size(); ++a) {
        max_cr = std::max(max_cr, config.reservation_cost_at(a));
        for (std::int64_t b = 0; b < config.space_size(); ++b)
            max_cv = std::max(max_cv, std::abs(oracle.cost_parts(a, b).first));
    }
    CHECK(max_cv == doctest::Approx(13.4).epsilon(1e-9));
    CHECK(max_cr == doctest::Approx(65.9).epsilon(1e-9));
}

TEST_CASE("cost magnitude cap on degenerate instances") {
    std::vector<ServerSpec> servers;
    servers.push_back({3, CostFn::power(1, 2), CostFn::power(1, 1), CostFn::power(0, 1)});
    const NetworkConfig single(std::move(servers), 1.0);
    const CostOracle oracle(single);
    CHECK(compute_theta(single, oracle) == doctest::Approx(9.0).epsilon(1e-12));

    std::vector<ServerSpec> zero_servers;
    zero_servers.push_back({2, CostFn::power(0, 1), CostFn::power(0, 1), CostFn::power(0, 1)});
    const NetworkConfig zero(std::move(zero_servers), 1.0);
    const CostOracle zero_oracle(zero);
    CHECK(compute_theta(zero, zero_oracle) == 0.0);

    const auto big = two_server_network();
    const CostOracle big_oracle(big);
    CHECK_THROWS_AS(compute_theta(big, big_oracle, 100), std::runtime_error);
}

TEST_CASE("slater margin is exact on the reference instance") {
    const auto config = two_server_network(2.0);
    const CostOracle oracle(config);
    const auto [P, eta] = compute_slater(config, oracle);
    // The full reservation (7,8) dominates every request, so its row is
    // identically zero and the margin equals v itself.
    CHECK(eta == 2.0);
    CHECK(P[static_cast<std::size_t>(config.index_of({7, 8}))] == 1.0);

    const auto constants = compute_constants(config, oracle);
    CHECK(constants.theta_bound == doctest::Approx(65.9).epsilon(1e-9));
    CHECK(constants.eta == 2.0);
    CHECK(constants.v == 2.0);
    CHECK(constants.has_slater());
}

TEST_CASE("slater margin vanishes at v = 0 and tracks v on zero-cost spaces") {
    const auto config = two_server_network(0.0);
    const CostOracle oracle(config);
    const auto [P, eta] = compute_slater(config, oracle);
    CHECK(eta == 0.0);
    InstanceConstants c;
    c.eta = eta;
    CHECK(!c.has_slater());

    // Singleton space with all-zero costs: C is identically 0, so the margin
    // equals v for the only distribution.
    std::vector<ServerSpec> servers;
    servers.push_back({1, CostFn::power(0, 1), CostFn::power(0, 1), CostFn::power(0, 1)});
    const NetworkConfig singleton(std::move(servers), 3.0);
    const CostOracle singleton_oracle(singleton);
    const auto [Ps, eta_s] = compute_slater(singleton, singleton_oracle);
    CHECK(eta_s == 3.0);
    CHECK(Ps[0] == 1.0);
}

TEST_CASE("static hindsight benchmark on frozen cases") {
    SUBCASE("loose budget picks the reserve-cost argmin") {
        const auto config = two_server_network(1000.0);
        const CostOracle oracle(config);
        const auto best = solve_static_K(config, oracle, {{1, 1}, {1, 1}}, 1);
        REQUIRE(best.feasible);
        CHECK(best.a == Reservation{1, 1});
        CHECK(best.reserve_cost == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("negative budget is infeasible for nonnegative costs") {
        const auto config = two_server_network(-1.0);
        const CostOracle oracle(config);
        CHECK(!solve_static_K(config, oracle, {{1, 1}}, 1).feasible);
    }
    SUBCASE("zero budget forces the dominant reservation") {
        const auto config = two_server_network(0.0);
        const CostOracle oracle(config);
        const auto best = solve_static_K(config, oracle, {{1, 1}, {7, 8}}, 1);
        REQUIRE(best.feasible);
        CHECK(best.a == Reservation{7, 8});
        CHECK(best.reserve_cost == doctest::Approx(65.9).epsilon(1e-12));
    }
    SUBCASE("window bounds are validated") {
        const auto config = two_server_network();
        const CostOracle oracle(config);
        CHECK_THROWS_AS(solve_static_K(config, oracle, {{1, 1}}, 0), std::invalid_argument);
        CHECK_THROWS_AS(solve_static_K(config, oracle, {{1, 1}}, 2), std::invalid_argument);
        CHECK_THROWS_AS(solve_static_K(config, oracle, {}, 1), std::invalid_argument);
    }
}

TEST_CASE("static benchmark matches a direct window recomputation") {
    const auto config = three_server_network(0.37);
    const CostOracle oracle(config);
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        const auto requests = random_requests(config, 30, rng);
        std::vector<std::int64_t> idx;
        for (const auto& b : requests) idx.push_back(config.index_of(b));
        for (int K : {1, 7, 30}) {
            const auto got = solve_static_K(config, oracle, requests, K);

            std::int64_t ref = -1;
            for (std::int64_t a = 0; a < config.space_size(); ++a) {
                bool ok = true;
                for (std::size_t t = 0; t + K <= idx.size() && ok; ++t) {
                    double w = 0.0;
                    for (int k = 0; k < K; ++k) w += oracle.total_cost(a, idx[t + k]);
                    ok = w <= K * config.budget();
                }
                if (ok && (ref < 0 || config.reservation_cost_at(a) <
                                          config.reservation_cost_at(ref)))
                    ref = a;
            }
            CHECK(got.feasible == (ref >= 0));
            if (ref >= 0) CHECK(got.index == ref);
        }
    }
}

TEST_CASE("distribution benchmark solves the windowed LP") {
    SUBCASE("unconstrained optimum is the cheapest point mass") {
        const auto config = two_server_network(1.0e9);
        const CostOracle oracle(config);
        const auto best = solve_distribution_K(config, oracle, {{3, 4}, {7, 8}}, 1);
        REQUIRE(best.feasible);
        CHECK(best.objective == doctest::Approx(0.4).epsilon(1e-9));
        CHECK((*best.p)[static_cast<std::size_t>(config.index_of({1, 1}))] ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("zero budget with a zero-cost transfer row") {
        const auto config = two_server_network(0.0);
        const CostOracle oracle(config);
        const std::vector<JobRequest> requests(3, JobRequest{1, 3});
        const auto best = solve_distribution_K(config, oracle, requests, 1);
        REQUIRE(best.feasible);
        CHECK(best.objective == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("negative budget is infeasible") {
        const auto config = two_server_network(-1.0);
        const CostOracle oracle(config);
        CHECK(!solve_distribution_K(config, oracle, {{1, 1}}, 1).feasible);
    }
}

TEST_CASE("distribution benchmark never loses to the static one") {
    const auto config = three_server_network(0.8);
    const CostOracle oracle(config);
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 5; ++rep) {
        const auto requests = random_requests(config, 20, rng);
        for (int K : {1, 4, 20}) {
            const auto fixed = solve_static_K(config, oracle, requests, K);
            const auto mixed = solve_distribution_K(config, oracle, requests, K);
            if (!fixed.feasible) continue;
            REQUIRE(mixed.feasible);
            CHECK(mixed.objective <= fixed.reserve_cost + 1e-7);

            // The returned mixture must itself satisfy every window.
            std::vector<std::int64_t> idx;
            for (const auto& b : requests) idx.push_back(config.index_of(b));
            for (std::size_t t = 0; t + K <= idx.size(); ++t) {
                double w = 0.0;
                for (int k = 0; k < K; ++k)
                    w += expectation(*mixed.p, oracle.cost_column(idx[t + k]));
                CHECK(w <= K * config.budget() + 1e-6);
            }
        }
    }
}

TEST_CASE("distribution benchmark matches a dense simplex grid") {
    const auto config = tiny_network(0.8);
    const CostOracle oracle(config);
    std::mt19937_64 rng(5150);
    const auto requests = random_requests(config, 6, rng);
    const auto best = solve_distribution_K(config, oracle, requests, 1);
    REQUIRE(best.feasible);

    std::vector<std::vector<double>> rows;
    for (const auto& b : requests) rows.push_back(oracle.cost_column(config.index_of(b)));
    const auto cr = config.reservation_cost_vector();
    const double cap = config.budget();

    const int steps = 100;
    double grid_best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j)
            for (int k = 0; i + j + k <= steps; ++k) {
                const double p[4] = {static_cast<double>(i) / steps,
                                     static_cast<double>(j) / steps,
                                     static_cast<double>(k) / steps,
                                     static_cast<double>(steps - i - j - k) / steps};
                bool ok = true;
                for (const auto& row : rows) {
                    double w = 0.0;
                    for (int a = 0; a < 4; ++a) w += p[a] * row[static_cast<std::size_t>(a)];
                    if (w > cap) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                double obj = 0.0;
                for (int a = 0; a < 4; ++a) obj += p[a] * cr[static_cast<std::size_t>(a)];
                grid_best = std::min(grid_best, obj);
            }

    REQUIRE(std::isfinite(grid_best));
    CHECK(best.objective <= grid_best + 1e-7);
    CHECK(grid_best <= best.objective + 0.05);
}

TEST_CASE("regret and violation series over a synthetic ledger") {
    RunLedger ledger;
    ledger.realized_reserve = {3.0, 1.0, 2.0};
    ledger.expected_reserve = {3.0, 1.0, 2.0};
    ledger.expected_cost_curr = {2.0, 2.0, 2.0};

    StaticBenchmark fixed;
    fixed.feasible = true;
    fixed.reserve_cost = 1.0;
    const auto realized = realized_regret_K(ledger, fixed);
    CHECK(realized == std::vector<double>{2.0, 2.0, 3.0});

    DistributionBenchmark mixed;
    mixed.feasible = true;
    mixed.objective = 1.0;
    CHECK(deterministic_regret_K(ledger, mixed) == realized);

    // Always playing the benchmark gives identically zero regret.
    RunLedger flat;
    flat.realized_reserve = {1.0, 1.0};
    const auto zero = realized_regret_K(flat, fixed);
    CHECK(zero == std::vector<double>{0.0, 0.0});

    CHECK(cumulative_violation(ledger, 2.0) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(cumulative_violation(ledger, 1.0) == std::vector<double>{1.0, 2.0, 3.0});

    StaticBenchmark none;
    CHECK_THROWS_AS(realized_regret_K(ledger, none), std::runtime_error);
    DistributionBenchmark none_mixed;
    CHECK_THROWS_AS(deterministic_regret_K(ledger, none_mixed), std::runtime_error);
}

TEST_CASE("bound calculator reproduces the closed forms") {
    InstanceConstants c;
    c.theta_bound = 65.9;
    c.eta = 2.0;
    c.v = 2.0;
    const double alpha = 0.001, mu = 0.1;
    const int T = 500;
    const BoundCalculator bounds(c, alpha, mu, T);

    CHECK(bounds.drift_B() == doctest::Approx(86.8762).epsilon(1e-12));
    CHECK(bounds.varrho() == doctest::Approx(0.1 * (2 * 65.9 - 2)).epsilon(1e-12));

    const double th = c.theta_bound;
    for (int aleph : {1, 10, 50, 100}) {
        const double al = aleph;
        const double chi = (bounds.drift_B() / mu + alpha * th * th / 4 +
                            1 / (2 * alpha * (al + 1)) + th) /
                               (c.eta * al) +
                           bounds.varrho() * (al + 2) / (2 * al);
        CHECK(bounds.chi_of_aleph(aleph) == doctest::Approx(chi).epsilon(1e-12));
        CHECK(bounds.theta_of_aleph(aleph) ==
              doctest::Approx(std::max(bounds.varrho(), chi)).epsilon(1e-12));
        CHECK(bounds.lambda_cap(aleph) ==
              doctest::Approx(bounds.theta_of_aleph(aleph) * al).epsilon(1e-12));
        CHECK(bounds.violation_cap(aleph) ==
              doctest::Approx(bounds.lambda_cap(aleph) / mu).epsilon(1e-12));
    }

    // K = 1 collapses the window-overlap terms.
    const double collapsed =
        (T - 1) * (0.5 * (4 * th * th + c.v * c.v) * mu + th * th * alpha / 4) + 1 / alpha;
    CHECK(bounds.regret_cap(1) == doctest::Approx(collapsed).epsilon(1e-12));
    CHECK(bounds.regret_cap(2) > 0.0);

    CHECK(bounds.hp_slack(0.1) ==
          doctest::Approx(std::sqrt(2 * std::log(10.0) * T * th * th)).epsilon(1e-12));
    CHECK(bounds.hp_slack(0.999999) < 0.1 * bounds.hp_slack(0.1));
    CHECK(bounds.hp_slack(0.01) > bounds.hp_slack(0.1));

    const auto [best_aleph, best_cap] = bounds.tightest_lambda_cap();
    CHECK(best_aleph >= 1);
    CHECK(best_aleph <= 200);
    CHECK(best_cap == doctest::Approx(bounds.lambda_cap(best_aleph)).epsilon(1e-12));
    CHECK(best_cap <= bounds.lambda_cap(1));
    CHECK(best_cap <= bounds.lambda_cap(200));

    const auto report = bounds.report(1, best_aleph, 0.1);
    CHECK(report.regret_cap_K == doctest::Approx(collapsed).epsilon(1e-12));
    CHECK(report.lambda_cap == doctest::Approx(best_cap).epsilon(1e-12));
    CHECK(report.to_json().at("aleph").get<int>() == best_aleph);
}

TEST_CASE("bound calculator rejects unusable inputs") {
    InstanceConstants ok;
    ok.theta_bound = 10.0;
    ok.eta = 1.0;
    ok.v = 2.0;
    CHECK_THROWS_AS(BoundCalculator(ok, 0.0, 0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(BoundCalculator(ok, 0.001, 0.1, 0), std::invalid_argument);

    InstanceConstants no_slater = ok;
    no_slater.eta = 0.0;
    CHECK_THROWS_AS(BoundCalculator(no_slater, 0.001, 0.1, 10), std::invalid_argument);

    const BoundCalculator bounds(ok, 0.001, 0.1, 10);
    CHECK_THROWS_AS(bounds.regret_cap(0), std::invalid_argument);
    CHECK_THROWS_AS(bounds.regret_cap(11), std::invalid_argument);
    CHECK_THROWS_AS(bounds.chi_of_aleph(0), std::invalid_argument);
    CHECK_THROWS_AS(bounds.hp_slack(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bounds.hp_slack(1.0), std::invalid_argument);
}
