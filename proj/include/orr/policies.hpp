#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orr/model.hpp"
#include "orr/simplex.hpp"
#include "orr/transfer.hpp"

namespace orr {

// State of the randomized saddle-point policy entering slot t.
struct SaddleState {
    Distribution P_prev;   // P^{t-1}
    double lambda = 0.0;   // lambda_t, always >= 0
    JobRequest b_prev;     // b^{t-1}
    double alpha = 0.0;    // primal step
    double mu = 0.0;       // dual step
};

// State of the Lagrangian combinatorial policy. The printed update has unit
// dual step; mu is exposed for experimentation and defaults to 1.
struct DualState {
    double lambda = 0.0;
    JobRequest b_prev;
    double mu = 1.0;
};

// One slot's outcome under any policy. Deterministic policies report a point
// mass; expected_cost_vs_prev_request is E_{P^t}[C(A, b^{t-1})], which for a
// point mass is the realized constraint cost.
struct PolicyDecision {
    Distribution distribution;
    std::int64_t sampled_index = 0;
    double expected_cost_vs_prev_request = 0.0;
};

// P^t = project(P_prev - alpha * g), g_a = C_R(a) + lambda * C(a, b_prev).
Distribution saddle_primal_step(const SaddleState& state, const CostOracle& oracle);

// max(0, lambda + mu * (expected_cost - v)).
double dual_step(double lambda, double expected_cost, double v, double mu);

// Full slot of the saddle-point policy: observe b^{t-1}, primal step, sample
// A^t, dual step with E_{P^t}[C(A, b^{t-1})].
std::pair<PolicyDecision, SaddleState> saddle_step(const SaddleState& state,
                                                   const JobRequest& b_observed,
                                                   std::mt19937_64& rng,
                                                   const CostOracle& oracle);

// A^t = b^{t-1}.
Reservation lazy_step(const JobRequest& b_prev);

// argmin C_R(A) over reservations with C(A, b_prev) <= v, ties by flat index.
// If nothing is feasible, falls back to min C(A, b_prev), ties by C_R then
// flat index.
Reservation naive_step(const NetworkConfig& config, const JobRequest& b_prev,
                       const CostOracle& oracle);

// A^t = argmin_A [C_R(A) + lambda_t * (C(A, b^{t-1}) - v)], ties by flat
// index; dual update with the realized cost of A^t.
std::pair<Reservation, DualState> lagrangian_combinatorial_step(
    const DualState& state, const NetworkConfig& config, const JobRequest& b_observed,
    const CostOracle& oracle);

// Uniform stepping interface over the four policies. lambda() reports the
// multiplier entering the next step (0 for policies without one).
class Policy {
  public:
    virtual ~Policy() = default;
    virtual const std::string& name() const = 0;
    virtual double lambda() const { return 0.0; }
    virtual const Distribution* distribution() const { return nullptr; }
    virtual PolicyDecision step(const JobRequest& b_prev, std::mt19937_64& rng) = 0;
};

struct PolicyParams {
    double alpha = 0.001;
    double mu = 0.1;
    double lambda1 = 0.0;
    double lagrangian_mu = 1.0;
    std::int64_t p0_index = -1;  // >= 0 selects a point-mass P^0; default uniform
};

// kind is one of "saddle", "lazy", "naive", "lagrangian". The returned policy
// keeps references to config and oracle; both must outlive it.
std::unique_ptr<Policy> make_policy(const std::string& kind, const NetworkConfig& config,
                                    const CostOracle& oracle, const PolicyParams& params);

}  // namespace orr
