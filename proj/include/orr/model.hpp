#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace orr {

// Integer reservation vector; component n lives in {1,...,m_n}. Job
// requests use the same shape, so they share the type.
using Reservation = std::vector<int>;
using JobRequest = Reservation;

enum class CostKind { Power, LogAffine, Table };

// Per-server cost curve. Evaluation at any x <= 0 returns exactly 0;
// the positive branch is c*x^p (power), ln((x+a)/b) (log-affine), or a
// lookup of integer grid values starting at x=1 (table).
class CostFn {
  public:
    static CostFn power(double c, double p);
    static CostFn log_affine(double a, double b);
    static CostFn table(std::vector<double> values);

    double operator()(double x) const;
    CostKind kind() const { return kind_; }

    // True when f(x) <= f(x+1) for all x in {0,...,grid_max-1}.
    bool nondecreasing_on_grid(int grid_max) const;
    // True when f(x) >= 0 for all x in {0,...,grid_max}.
    bool nonnegative_on_grid(int grid_max) const;

    static CostFn from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

  private:
    CostFn() = default;
    CostKind kind_ = CostKind::Power;
    double c_ = 0.0, p_ = 1.0;  // power
    double a_ = 0.0, b_ = 1.0;  // log-affine
    std::vector<double> values_;
};

struct ServerSpec {
    int capacity = 1;          // m_n
    CostFn reserve_cost;       // f^R_n
    CostFn violation_cost;     // f^V_n
    CostFn transfer_cost;      // f^T_n
};

// A network instance: servers with capacities and cost triples, plus the
// per-slot budget threshold v. Immutable after construction; the
// reservation space R = prod {1..m_n} is addressed through mixed-radix
// flat indices (last coordinate fastest).
class NetworkConfig {
  public:
    static constexpr std::int64_t kDefaultSpaceCeiling = 1'000'000;

    NetworkConfig(std::vector<ServerSpec> servers, double budget,
                  std::int64_t space_ceiling = kDefaultSpaceCeiling);

    int server_count() const { return static_cast<int>(servers_.size()); }
    int capacity(int n) const { return servers_[n].capacity; }
    double budget() const { return budget_; }
    const CostFn& reserve_fn(int n) const { return servers_[n].reserve_cost; }
    const CostFn& violation_fn(int n) const { return servers_[n].violation_cost; }
    const CostFn& transfer_fn(int n) const { return servers_[n].transfer_cost; }
    int max_capacity() const;

    std::int64_t space_size() const { return space_size_; }

    bool valid_reservation(const Reservation& a) const;
    std::int64_t index_of(const Reservation& a) const;
    Reservation reservation_at(std::int64_t index) const;
    std::vector<Reservation> enumerate_reservations() const;

    double reservation_cost(const Reservation& a) const;
    double reservation_cost_at(std::int64_t index) const;
    // C_R over the whole space, indexed by flat index.
    std::vector<double> reservation_cost_vector() const;

    // True when every f^V and f^T is >= 0 on the integer grid; lets
    // search code prune on partial sums.
    bool nonnegative_costs() const { return nonnegative_costs_; }

    static NetworkConfig from_json(const nlohmann::json& j,
                                   std::int64_t space_ceiling = kDefaultSpaceCeiling);
    nlohmann::json to_json() const;

  private:
    std::vector<ServerSpec> servers_;
    double budget_ = 0.0;
    std::int64_t space_size_ = 0;
    std::vector<std::int64_t> strides_;
    bool nonnegative_costs_ = false;
};

}  // namespace orr
