#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orr/model.hpp"

namespace orr {

// Result of the per-slot transfer subproblem: delta[n][m] jobs moved from
// deficit server n to surplus server m (zero diagonal), with the resulting
// violation and transfer costs.
struct TransferPlan {
    std::vector<std::vector<int>> delta;
    double violation_cost = 0.0;  // C_V
    double transfer_cost = 0.0;   // C_T
    double total() const { return violation_cost + transfer_cost; }
};

// Violation/transfer cost of a fixed delta matrix, accumulated in canonical
// server order. Both solvers below score candidates through this function so
// their objective values are bit-identical wherever they agree on delta.
std::pair<double, double> transfer_plan_cost(const NetworkConfig& config,
                                             const Reservation& a, const JobRequest& b,
                                             const std::vector<std::vector<int>>& delta);

// Exact minimizer of the transfer objective over integer delta matrices
// subject to delta[n][m] <= min{(b_n-a_n)^+, (a_m-b_m)^+} and, per receiver,
// sum_n delta[n][m] <= (a_m-b_m)^+. Ties resolved toward the
// lexicographically smallest flattened matrix.
TransferPlan solve_transfer(const NetworkConfig& config, const Reservation& a,
                            const JobRequest& b);

// Independent verification oracle: flat enumeration of every feasible delta
// matrix. Throws when the candidate count exceeds the ceiling.
TransferPlan brute_force_transfer(const NetworkConfig& config, const Reservation& a,
                                  const JobRequest& b,
                                  std::int64_t candidate_ceiling = 10'000'000);

// Memoized C(a,b) = C_V(a,b) + C_T(a,b) over flat indices. Entries are
// computed once and returned bit-identically afterwards. For spaces up to
// kDenseLimit the table is dense (call precompute_all() for a single-writer
// fill followed by lock-free reads); larger spaces fall back to a
// mutex-guarded hash map.
class CostOracle {
  public:
    static constexpr std::int64_t kDenseLimit = 4096;

    explicit CostOracle(const NetworkConfig& config);

    const NetworkConfig& config() const { return config_; }

    double total_cost(std::int64_t a_index, std::int64_t b_index) const;
    double total_cost(const Reservation& a, const JobRequest& b) const;
    // (C_V, C_T) for the optimal plan of the pair.
    std::pair<double, double> cost_parts(std::int64_t a_index, std::int64_t b_index) const;

    // C(a, b) over all reservations a for a fixed request b.
    std::vector<double> cost_column(std::int64_t b_index) const;

    bool dense() const { return dense_; }
    // Fills the whole dense table (no-op when sparse or already filled).
    void precompute_all() const;

    // Full cost matrix as CSV: row = reservation index, column = request
    // index. Requires the dense representation.
    void dump_cost_matrix_csv(std::ostream& os) const;

  private:
    std::pair<double, double> compute(std::int64_t a_index, std::int64_t b_index) const;

    const NetworkConfig& config_;
    std::int64_t size_;
    bool dense_;
    // Dense tables are request-major so a cost column is contiguous; NaN in
    // cv_ marks a slot not yet computed.
    mutable std::vector<double> cv_, ct_;
    mutable std::unordered_map<std::uint64_t, std::pair<double, double>> sparse_;
    mutable std::mutex mutex_;
};

}  // namespace orr
