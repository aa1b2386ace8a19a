#include "orr/policies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace orr {

Distribution saddle_primal_step(const SaddleState& state, const CostOracle& oracle) {
    const auto& config = oracle.config();
    const auto cr = config.reservation_cost_vector();
    const auto col = oracle.cost_column(config.index_of(state.b_prev));
    std::vector<double> y(cr.size());
    for (std::size_t a = 0; a < cr.size(); ++a) {
        const double g = cr[a] + state.lambda * col[a];
        y[a] = state.P_prev[a] - state.alpha * g;
    }
    return project_simplex(y);
}

double dual_step(double lambda, double expected_cost, double v, double mu) {
    return std::max(0.0, lambda + mu * (expected_cost - v));
}

std::pair<PolicyDecision, SaddleState> saddle_step(const SaddleState& state,
                                                   const JobRequest& b_observed,
                                                   std::mt19937_64& rng,
                                                   const CostOracle& oracle) {
    const auto& config = oracle.config();
    SaddleState next = state;
    next.b_prev = b_observed;

    Distribution P = saddle_primal_step(next, oracle);
    const std::int64_t sampled = sample(P, rng);
    const auto col = oracle.cost_column(config.index_of(b_observed));
    const double expected = expectation(P, col);
    next.lambda = dual_step(state.lambda, expected, config.budget(), state.mu);
    next.P_prev = P;

    PolicyDecision decision{std::move(P), sampled, expected};
    return {std::move(decision), std::move(next)};
}

Reservation lazy_step(const JobRequest& b_prev) { return b_prev; }

Reservation naive_step(const NetworkConfig& config, const JobRequest& b_prev,
                       const CostOracle& oracle) {
    const std::int64_t b_index = config.index_of(b_prev);
    const auto col = oracle.cost_column(b_index);
    const auto cr = config.reservation_cost_vector();

    std::int64_t best = -1;
    for (std::int64_t a = 0; a < config.space_size(); ++a) {
        if (col[static_cast<std::size_t>(a)] > config.budget()) continue;
        if (best < 0 || cr[static_cast<std::size_t>(a)] < cr[static_cast<std::size_t>(best)])
            best = a;
    }
    if (best < 0) {
        for (std::int64_t a = 0; a < config.space_size(); ++a) {
            if (best < 0) {
                best = a;
                continue;
            }
            const double ca = col[static_cast<std::size_t>(a)];
            const double cb = col[static_cast<std::size_t>(best)];
            if (ca < cb ||
                (ca == cb && cr[static_cast<std::size_t>(a)] < cr[static_cast<std::size_t>(best)]))
                best = a;
        }
    }
    return config.reservation_at(best);
}

std::pair<Reservation, DualState> lagrangian_combinatorial_step(
    const DualState& state, const NetworkConfig& config, const JobRequest& b_observed,
    const CostOracle& oracle) {
    const std::int64_t b_index = config.index_of(b_observed);
    const auto col = oracle.cost_column(b_index);
    const auto cr = config.reservation_cost_vector();

    std::int64_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::int64_t a = 0; a < config.space_size(); ++a) {
        const double score = cr[static_cast<std::size_t>(a)] +
                             state.lambda * (col[static_cast<std::size_t>(a)] - config.budget());
        if (score < best_score) {
            best_score = score;
            best = a;
        }
    }

    DualState next = state;
    next.b_prev = b_observed;
    next.lambda = dual_step(state.lambda, col[static_cast<std::size_t>(best)], config.budget(),
                            state.mu);
    return {config.reservation_at(best), std::move(next)};
}

namespace {

PolicyDecision point_decision(const NetworkConfig& config, const CostOracle& oracle,
                              const Reservation& a, const JobRequest& b_prev) {
    const std::int64_t idx = config.index_of(a);
    PolicyDecision d{Distribution::point_mass(static_cast<std::size_t>(config.space_size()),
                                              static_cast<std::size_t>(idx)),
                     idx, oracle.total_cost(idx, config.index_of(b_prev))};
    return d;
}

class SaddlePolicy final : public Policy {
  public:
    SaddlePolicy(const NetworkConfig& config, const CostOracle& oracle,
                 const PolicyParams& params)
        : name_("saddle"), oracle_(oracle),
          state_{params.p0_index >= 0
                     ? Distribution::point_mass(static_cast<std::size_t>(config.space_size()),
                                                static_cast<std::size_t>(params.p0_index))
                     : Distribution::uniform(static_cast<std::size_t>(config.space_size())),
                 params.lambda1, JobRequest(static_cast<std::size_t>(config.server_count()), 1),
                 params.alpha, params.mu} {}

    const std::string& name() const override { return name_; }
    double lambda() const override { return state_.lambda; }
    const Distribution* distribution() const override { return &state_.P_prev; }

    PolicyDecision step(const JobRequest& b_prev, std::mt19937_64& rng) override {
        auto [decision, next] = saddle_step(state_, b_prev, rng, oracle_);
        state_ = std::move(next);
        return decision;
    }

  private:
    std::string name_;
    const CostOracle& oracle_;
    SaddleState state_;
};

class LazyPolicy final : public Policy {
  public:
    LazyPolicy(const NetworkConfig& config, const CostOracle& oracle)
        : name_("lazy"), config_(config), oracle_(oracle) {}

    const std::string& name() const override { return name_; }

    PolicyDecision step(const JobRequest& b_prev, std::mt19937_64&) override {
        return point_decision(config_, oracle_, lazy_step(b_prev), b_prev);
    }

  private:
    std::string name_;
    const NetworkConfig& config_;
    const CostOracle& oracle_;
};

class NaivePolicy final : public Policy {
  public:
    NaivePolicy(const NetworkConfig& config, const CostOracle& oracle)
        : name_("naive"), config_(config), oracle_(oracle) {}

    const std::string& name() const override { return name_; }

    PolicyDecision step(const JobRequest& b_prev, std::mt19937_64&) override {
        return point_decision(config_, oracle_, naive_step(config_, b_prev, oracle_), b_prev);
    }

  private:
    std::string name_;
    const NetworkConfig& config_;
    const CostOracle& oracle_;
};

class LagrangianPolicy final : public Policy {
  public:
    LagrangianPolicy(const NetworkConfig& config, const CostOracle& oracle,
                     const PolicyParams& params)
        : name_("lagrangian"), config_(config), oracle_(oracle) {
        state_.lambda = params.lambda1;
        state_.b_prev = JobRequest(static_cast<std::size_t>(config.server_count()), 1);
        state_.mu = params.lagrangian_mu;
    }

    const std::string& name() const override { return name_; }
    double lambda() const override { return state_.lambda; }

    PolicyDecision step(const JobRequest& b_prev, std::mt19937_64&) override {
        auto [a, next] = lagrangian_combinatorial_step(state_, config_, b_prev, oracle_);
        state_ = std::move(next);
        return point_decision(config_, oracle_, a, b_prev);
    }

  private:
    std::string name_;
    const NetworkConfig& config_;
    const CostOracle& oracle_;
    DualState state_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& kind, const NetworkConfig& config,
                                    const CostOracle& oracle, const PolicyParams& params) {
    if (params.lambda1 < 0.0) throw std::invalid_argument("policy: lambda1 must be >= 0");
    if (kind == "saddle" && (params.alpha <= 0.0 || params.mu <= 0.0))
        throw std::invalid_argument("policy: alpha and mu must be positive");
    if (kind == "lagrangian" && params.lagrangian_mu <= 0.0)
        throw std::invalid_argument("policy: dual step must be positive");
    if (kind == "saddle") return std::make_unique<SaddlePolicy>(config, oracle, params);
    if (kind == "lazy") return std::make_unique<LazyPolicy>(config, oracle);
    if (kind == "naive") return std::make_unique<NaivePolicy>(config, oracle);
    if (kind == "lagrangian") return std::make_unique<LagrangianPolicy>(config, oracle, params);
    throw std::invalid_argument("unknown policy kind: " + kind);
}

}  // namespace orr
