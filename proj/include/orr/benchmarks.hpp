#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "orr/model.hpp"
#include "orr/simplex.hpp"
#include "orr/transfer.hpp"

namespace orr {

// Instance-level constants behind every bound: the cost magnitude cap, the
// best Slater margin, and its witness distribution.
struct InstanceConstants {
    double theta_bound = 0.0;  // max |C_R|, |C_V|, |C_T| over the space
    double eta = 0.0;          // best achievable v - max_b E_P[C(.,b)]
    Distribution slater;       // witness achieving eta
    double v = 0.0;

    bool has_slater() const { return eta > 0.0; }
    nlohmann::json to_json() const;
};

// Per-run trajectory record; all arrays have length T.
struct RunLedger {
    std::string policy;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double mu = 0.0;

    std::vector<Distribution> distributions;     // P^t (point mass if deterministic)
    std::vector<double> lambda;                  // lambda_t entering slot t
    std::vector<std::int64_t> sampled;           // a_t flat index
    std::vector<std::int64_t> request;           // b_t flat index
    std::vector<double> realized_reserve;        // C_R(a_t)
    std::vector<double> expected_reserve;        // E_{P^t}[C_R]
    std::vector<double> expected_cost_curr;      // E_{P^t}[C(., b^t)]
    std::vector<double> expected_cost_prev;      // E_{P^t}[C(., b^{t-1})]
    std::vector<double> step_distance;           // ||P^t - P^{t-1}||_2
    double final_lambda = 0.0;                   // lambda_{T+1}

    int horizon() const { return static_cast<int>(lambda.size()); }
};

// Exact per-instance cost magnitude cap. Sweeps all |R|^2 pairs; throws when
// that count exceeds pair_ceiling.
double compute_theta(const NetworkConfig& config, const CostOracle& oracle,
                     std::int64_t pair_ceiling = 10'000'000);

// Best Slater margin: maximizes eta = v - max_b E_P[C(A,b)] over the simplex
// (an LP), then keeps the better of the LP mixture and the best single
// reservation under exact re-evaluation. eta <= 0 means no Slater point.
std::pair<Distribution, double> compute_slater(const NetworkConfig& config,
                                               const CostOracle& oracle);

InstanceConstants compute_constants(const NetworkConfig& config, const CostOracle& oracle,
                                    std::int64_t pair_ceiling = 10'000'000);

// Best fixed reservation in hindsight for window length K.
struct StaticBenchmark {
    bool feasible = false;
    std::int64_t index = -1;
    Reservation a;
    double reserve_cost = 0.0;
};

// Best fixed distribution in hindsight; objective is E_P[C_R] per slot.
struct DistributionBenchmark {
    bool feasible = false;
    std::optional<Distribution> p;
    double objective = 0.0;
};

// Exhaustive search over reservations: feasible iff every length-K window of
// C(a, b^t) sums to at most Kv; minimizes C_R with flat-index ties.
StaticBenchmark solve_static_K(const NetworkConfig& config, const CostOracle& oracle,
                               const std::vector<JobRequest>& requests, int K);

// LP over the simplex with one constraint per distinct window cost profile.
DistributionBenchmark solve_distribution_K(const NetworkConfig& config,
                                           const CostOracle& oracle,
                                           const std::vector<JobRequest>& requests, int K);

// Cumulative sum_t (C_R(a_t) - C_R(A*_K)). Throws when the benchmark is
// infeasible.
std::vector<double> realized_regret_K(const RunLedger& ledger,
                                      const StaticBenchmark& benchmark);

// Cumulative sum_t (E_{P^t}[C_R] - E_{P*_K}[C_R]).
std::vector<double> deterministic_regret_K(const RunLedger& ledger,
                                           const DistributionBenchmark& benchmark);

// Cumulative sum_t (E_{P^t}[C(., b^t)] - v).
std::vector<double> cumulative_violation(const RunLedger& ledger, double v);

// Everything the theory caps, by direct substitution.
struct BoundReport {
    double drift_B = 0.0;       // (mu^2/2)(4 Theta^2 + v^2)
    double varrho = 0.0;        // mu (2 Theta - v)
    int aleph = 1;
    double theta = 0.0;         // max{varrho, chi(aleph)}
    double lambda_cap = 0.0;    // theta * aleph
    double violation_cap = 0.0; // theta * aleph / mu
    int K = 1;
    double regret_cap_K = 0.0;
    double delta = 0.1;
    double hp_slack = 0.0;      // sqrt(2 ln(1/delta) T Theta^2)

    nlohmann::json to_json() const;
};

class BoundCalculator {
  public:
    // Requires a valid Slater margin (eta > 0).
    BoundCalculator(const InstanceConstants& constants, double alpha, double mu, int T);

    double drift_B() const;
    double varrho() const;
    double chi_of_aleph(int aleph) const;
    double theta_of_aleph(int aleph) const;
    double lambda_cap(int aleph) const { return theta_of_aleph(aleph) * aleph; }
    double violation_cap(int aleph) const { return lambda_cap(aleph) / mu_; }
    double regret_cap(int K) const;
    double hp_slack(double delta) const;

    // argmin over aleph in 1..aleph_max of theta(aleph) * aleph.
    std::pair<int, double> tightest_lambda_cap(int aleph_max = 200) const;

    BoundReport report(int K, int aleph, double delta) const;

  private:
    InstanceConstants constants_;
    double alpha_, mu_;
    int T_;
};

}  // namespace orr
