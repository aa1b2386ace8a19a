#include "orr/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "orr/lp.hpp"

namespace orr {

nlohmann::json InstanceConstants::to_json() const {
    return {{"theta_bound", theta_bound},
            {"eta", eta},
            {"v", v},
            {"slater", slater.probs()},
            {"has_slater", has_slater()}};
}

double compute_theta(const NetworkConfig& config, const CostOracle& oracle,
                     std::int64_t pair_ceiling) {
    const std::int64_t size = config.space_size();
    if (size > pair_ceiling / size)
        throw std::runtime_error("theta: pair sweep exceeds ceiling");

    double theta = 0.0;
    const auto cr = config.reservation_cost_vector();
    for (double x : cr) theta = std::max(theta, std::abs(x));
    for (std::int64_t b = 0; b < size; ++b)
        for (std::int64_t a = 0; a < size; ++a) {
            const auto [cv, ct] = oracle.cost_parts(a, b);
            theta = std::max({theta, std::abs(cv), std::abs(ct)});
        }
    return theta;
}

std::pair<Distribution, double> compute_slater(const NetworkConfig& config,
                                               const CostOracle& oracle) {
    const std::size_t n = static_cast<std::size_t>(config.space_size());
    const double v = config.budget();

    std::vector<std::vector<double>> cols(n);
    for (std::size_t b = 0; b < n; ++b)
        cols[b] = oracle.cost_column(static_cast<std::int64_t>(b));

    auto exact_margin = [&](const Distribution& P) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < n; ++b) worst = std::max(worst, expectation(P, cols[b]));
        return v - worst;
    };

    // Best single reservation: margin v - max_b C(a, b).
    std::size_t best_a = 0;
    double best_point_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
        double row_max = 0.0;
        for (std::size_t b = 0; b < n; ++b) row_max = std::max(row_max, cols[b][a]);
        const double margin = v - row_max;
        if (margin > best_point_margin) {
            best_point_margin = margin;
            best_a = a;
        }
    }
    Distribution point = Distribution::point_mass(n, best_a);

    // Max-min LP: maximize eta s.t. E_P[C(., b)] + eta <= v for every b. The
    // free eta splits into eta_pos - eta_neg.
    LinearProgram lp(n + 2);
    std::vector<double> obj(n + 2, 0.0);
    obj[n] = -1.0;
    obj[n + 1] = 1.0;
    lp.set_objective(obj);
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<double> row(n + 2, 0.0);
        for (std::size_t a = 0; a < n; ++a) row[a] = cols[b][a];
        row[n] = 1.0;
        row[n + 1] = -1.0;
        lp.add_constraint(std::move(row), '<', v);
    }
    std::vector<double> norm(n + 2, 0.0);
    for (std::size_t a = 0; a < n; ++a) norm[a] = 1.0;
    lp.add_constraint(std::move(norm), '=', 1.0);

    const auto res = lp.solve();
    if (res.status == LpStatus::Optimal) {
        std::vector<double> p(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
        double sum = 0.0;
        for (double& x : p) {
            if (x < 0.0) x = 0.0;
            sum += x;
        }
        if (sum > 0.0) {
            for (double& x : p) x /= sum;
            Distribution mixture{std::move(p)};
            const double lp_margin = exact_margin(mixture);
            if (lp_margin > best_point_margin) return {std::move(mixture), lp_margin};
        }
    }
    return {std::move(point), best_point_margin};
}

InstanceConstants compute_constants(const NetworkConfig& config, const CostOracle& oracle,
                                    std::int64_t pair_ceiling) {
    InstanceConstants c;
    c.theta_bound = compute_theta(config, oracle, pair_ceiling);
    auto [slater, eta] = compute_slater(config, oracle);
    c.slater = std::move(slater);
    c.eta = eta;
    c.v = config.budget();
    return c;
}

namespace {

std::vector<std::int64_t> request_indices(const NetworkConfig& config,
                                          const std::vector<JobRequest>& requests) {
    std::vector<std::int64_t> idx;
    idx.reserve(requests.size());
    for (const auto& b : requests) idx.push_back(config.index_of(b));
    return idx;
}

void check_window(const std::vector<JobRequest>& requests, int K) {
    const int T = static_cast<int>(requests.size());
    if (T < 1) throw std::invalid_argument("benchmark: empty request sequence");
    if (K < 1 || K > T) throw std::invalid_argument("benchmark: K must satisfy 1 <= K <= T");
}

}  // namespace

StaticBenchmark solve_static_K(const NetworkConfig& config, const CostOracle& oracle,
                               const std::vector<JobRequest>& requests, int K) {
    check_window(requests, K);
    const int T = static_cast<int>(requests.size());
    const auto idx = request_indices(config, requests);
    const auto cr = config.reservation_cost_vector();
    const double cap = static_cast<double>(K) * config.budget();

    StaticBenchmark best;
    for (std::int64_t a = 0; a < config.space_size(); ++a) {
        // prefix[t] = sum of C(a, b^1..b^t); windows read off two entries.
        std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
        for (int t = 0; t < T; ++t)
            prefix[static_cast<std::size_t>(t) + 1] =
                prefix[static_cast<std::size_t>(t)] +
                oracle.total_cost(a, idx[static_cast<std::size_t>(t)]);
        bool feasible = true;
        for (int t = 0; t + K <= T && feasible; ++t)
            feasible = prefix[static_cast<std::size_t>(t + K)] -
                           prefix[static_cast<std::size_t>(t)] <=
                       cap;
        if (!feasible) continue;
        if (!best.feasible || cr[static_cast<std::size_t>(a)] < best.reserve_cost) {
            best.feasible = true;
            best.index = a;
            best.reserve_cost = cr[static_cast<std::size_t>(a)];
        }
    }
    if (best.feasible) best.a = config.reservation_at(best.index);
    return best;
}

DistributionBenchmark solve_distribution_K(const NetworkConfig& config,
                                           const CostOracle& oracle,
                                           const std::vector<JobRequest>& requests, int K) {
    check_window(requests, K);
    const int T = static_cast<int>(requests.size());
    const std::size_t n = static_cast<std::size_t>(config.space_size());
    const auto idx = request_indices(config, requests);
    const auto cr = config.reservation_cost_vector();

    // Window constraints depend only on the multiset of requests inside the
    // window, so identical windows collapse to one LP row.
    std::map<std::vector<std::int64_t>, int> windows;
    for (int t = 0; t + K <= T; ++t) {
        std::vector<std::int64_t> key(idx.begin() + t, idx.begin() + t + K);
        std::sort(key.begin(), key.end());
        windows.emplace(std::move(key), t);
    }

    LinearProgram lp(n);
    lp.set_objective(cr);
    const double cap = static_cast<double>(K) * config.budget();
    for (const auto& [key, first_t] : windows) {
        (void)first_t;
        std::vector<double> row(n, 0.0);
        for (std::int64_t b : key) {
            const auto col = oracle.cost_column(b);
            for (std::size_t a = 0; a < n; ++a) row[a] += col[a];
        }
        lp.add_constraint(std::move(row), '<', cap);
    }
    std::vector<double> norm(n, 1.0);
    lp.add_constraint(std::move(norm), '=', 1.0);

    const auto res = lp.solve();
    DistributionBenchmark out;
    if (res.status != LpStatus::Optimal) return out;

    std::vector<double> p = res.x;
    double sum = 0.0;
    for (double& x : p) {
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (sum <= 0.0) return out;
    for (double& x : p) x /= sum;
    out.feasible = true;
    out.p = Distribution{std::move(p)};
    out.objective = expectation(*out.p, cr);
    return out;
}

std::vector<double> realized_regret_K(const RunLedger& ledger,
                                      const StaticBenchmark& benchmark) {
    if (!benchmark.feasible)
        throw std::runtime_error("regret: static benchmark infeasible for this trace");
    std::vector<double> series(ledger.realized_reserve.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        cum += ledger.realized_reserve[t] - benchmark.reserve_cost;
        series[t] = cum;
    }
    return series;
}

std::vector<double> deterministic_regret_K(const RunLedger& ledger,
                                           const DistributionBenchmark& benchmark) {
    if (!benchmark.feasible)
        throw std::runtime_error("regret: distribution benchmark infeasible for this trace");
    std::vector<double> series(ledger.expected_reserve.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        cum += ledger.expected_reserve[t] - benchmark.objective;
        series[t] = cum;
    }
    return series;
}

std::vector<double> cumulative_violation(const RunLedger& ledger, double v) {
    std::vector<double> series(ledger.expected_cost_curr.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        cum += ledger.expected_cost_curr[t] - v;
        series[t] = cum;
    }
    return series;
}

nlohmann::json BoundReport::to_json() const {
    return {{"drift_B", drift_B},
            {"varrho", varrho},
            {"aleph", aleph},
            {"theta", theta},
            {"lambda_cap", lambda_cap},
            {"violation_cap", violation_cap},
            {"K", K},
            {"regret_cap_K", regret_cap_K},
            {"delta", delta},
            {"hp_slack", hp_slack}};
}

BoundCalculator::BoundCalculator(const InstanceConstants& constants, double alpha, double mu,
                                 int T)
    : constants_(constants), alpha_(alpha), mu_(mu), T_(T) {
    if (!constants.has_slater())
        throw std::invalid_argument("bounds: require a positive Slater margin");
    if (alpha <= 0.0 || mu <= 0.0) throw std::invalid_argument("bounds: steps must be positive");
    if (T < 1) throw std::invalid_argument("bounds: horizon must be >= 1");
}

double BoundCalculator::drift_B() const {
    const double th = constants_.theta_bound, v = constants_.v;
    return 0.5 * mu_ * mu_ * (4.0 * th * th + v * v);
}

double BoundCalculator::varrho() const {
    return mu_ * (2.0 * constants_.theta_bound - constants_.v);
}

double BoundCalculator::chi_of_aleph(int aleph) const {
    if (aleph < 1) throw std::invalid_argument("bounds: aleph must be >= 1");
    const double th = constants_.theta_bound;
    const double al = static_cast<double>(aleph);
    const double inner = drift_B() / mu_ + alpha_ * th * th / 4.0 +
                         1.0 / (2.0 * alpha_ * (al + 1.0)) + th;
    return inner / (constants_.eta * al) + varrho() * (al + 2.0) / (2.0 * al);
}

double BoundCalculator::theta_of_aleph(int aleph) const {
    return std::max(varrho(), chi_of_aleph(aleph));
}

double BoundCalculator::regret_cap(int K) const {
    if (K < 1 || K > T_) throw std::invalid_argument("bounds: K must satisfy 1 <= K <= T");
    const double th = constants_.theta_bound, v = constants_.v;
    const double Kd = static_cast<double>(K), Td = static_cast<double>(T_);
    const double sum_sq = (Kd - 1.0) * (2.0 * Kd - 1.0) / 6.0;
    return mu_ * (2.0 * th + v) * (2.0 * th + v) * sum_sq +
           (Td - Kd) * (0.5 * Kd * (4.0 * th * th + v * v) * mu_ + th * th * alpha_ / 4.0) +
           Kd * (Kd - 1.0) * th + 1.0 / alpha_;
}

double BoundCalculator::hp_slack(double delta) const {
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("bounds: delta must lie in (0, 1)");
    const double th = constants_.theta_bound;
    return std::sqrt(2.0 * std::log(1.0 / delta) * static_cast<double>(T_) * th * th);
}

std::pair<int, double> BoundCalculator::tightest_lambda_cap(int aleph_max) const {
    if (aleph_max < 1) throw std::invalid_argument("bounds: aleph_max must be >= 1");
    int best_aleph = 1;
    double best = lambda_cap(1);
    for (int al = 2; al <= aleph_max; ++al) {
        const double cap = lambda_cap(al);
        if (cap < best) {
            best = cap;
            best_aleph = al;
        }
    }
    return {best_aleph, best};
}

BoundReport BoundCalculator::report(int K, int aleph, double delta) const {
    BoundReport r;
    r.drift_B = drift_B();
    r.varrho = varrho();
    r.aleph = aleph;
    r.theta = theta_of_aleph(aleph);
    r.lambda_cap = lambda_cap(aleph);
    r.violation_cap = violation_cap(aleph);
    r.K = K;
    r.regret_cap_K = regret_cap(K);
    r.delta = delta;
    r.hp_slack = hp_slack(delta);
    return r;
}

}  // namespace orr
