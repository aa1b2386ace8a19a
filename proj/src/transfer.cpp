#include "orr/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "orr/io.hpp"

namespace orr {

namespace {

std::vector<int> deficits(const Reservation& a, const JobRequest& b) {
    std::vector<int> d(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) d[n] = std::max(0, b[n] - a[n]);
    return d;
}

std::vector<int> surpluses(const Reservation& a, const JobRequest& b) {
    std::vector<int> s(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) s[n] = std::max(0, a[n] - b[n]);
    return s;
}

// Depth-first search over transfer matrices: senders (deficit servers) in
// ascending order, row entries in ascending receiver order, values ascending.
// Visiting candidates in lexicographic order of the flattened matrix means
// keeping only strict improvements realizes the canonical tie-break.
struct TransferSearch {
    TransferSearch(const NetworkConfig& c, const Reservation& av, const JobRequest& bv)
        : config(c), a(av), b(bv) {}

    const NetworkConfig& config;
    const Reservation& a;
    const JobRequest& b;
    std::vector<int> senders;     // deficit server ids
    std::vector<int> receivers;   // surplus server ids
    std::vector<int> deficit;     // by server
    std::vector<int> remaining;   // by receiver position
    std::vector<std::vector<int>> delta;
    bool prune = false;
    bool have_best = false;
    double best_total = std::numeric_limits<double>::infinity();
    TransferPlan best;

    void run() {
        descend_sender(0, 0.0);
    }

    void descend_sender(std::size_t si, double partial) {
        if (si == senders.size()) {
            auto [cv, ct] = transfer_plan_cost(config, a, b, delta);
            const double total = cv + ct;
            if (!have_best || total < best_total) {
                have_best = true;
                best_total = total;
                best.delta = delta;
                best.violation_cost = cv;
                best.transfer_cost = ct;
            }
            return;
        }
        descend_entry(si, 0, 0, partial);
    }

    void descend_entry(std::size_t si, std::size_t ri, int sent, double partial) {
        const int n = senders[si];
        if (ri == receivers.size()) {
            double row = 0.0;
            for (int r : receivers) row += config.transfer_fn(n)(delta[n][r]);
            row += config.violation_fn(n)(b[n] - a[n] - sent);
            const double next = partial + row;
            if (prune && have_best &&
                next > best_total + 1e-9 + 1e-12 * std::abs(best_total))
                return;
            descend_sender(si + 1, next);
            return;
        }
        const int m = receivers[ri];
        const int cap = std::min(deficit[n], remaining[ri]);
        for (int x = 0; x <= cap; ++x) {
            delta[n][m] = x;
            remaining[ri] -= x;
            descend_entry(si, ri + 1, sent + x, partial);
            remaining[ri] += x;
        }
        delta[n][m] = 0;
    }
};

}  // namespace

std::pair<double, double> transfer_plan_cost(const NetworkConfig& config,
                                             const Reservation& a, const JobRequest& b,
                                             const std::vector<std::vector<int>>& delta) {
    const int N = config.server_count();
    double ct = 0.0;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            if (m != n) ct += config.transfer_fn(n)(delta[n][m]);
    double cv = 0.0;
    for (int n = 0; n < N; ++n) {
        int sent = 0;
        for (int m = 0; m < N; ++m)
            if (m != n) sent += delta[n][m];
        cv += config.violation_fn(n)(b[n] - a[n] - sent);
    }
    return {cv, ct};
}

TransferPlan solve_transfer(const NetworkConfig& config, const Reservation& a,
                            const JobRequest& b) {
    if (!config.valid_reservation(a) || !config.valid_reservation(b))
        throw std::out_of_range("transfer: vectors outside the configured space");
    const int N = config.server_count();

    TransferSearch search{config, a, b};
    search.deficit = deficits(a, b);
    const auto surplus = surpluses(a, b);
    for (int n = 0; n < N; ++n) {
        if (search.deficit[n] > 0) search.senders.push_back(n);
        if (surplus[n] > 0) {
            search.receivers.push_back(n);
            search.remaining.push_back(surplus[n]);
        }
    }
    search.delta.assign(N, std::vector<int>(N, 0));
    search.prune = config.nonnegative_costs();
    search.run();
    return search.best;
}

TransferPlan brute_force_transfer(const NetworkConfig& config, const Reservation& a,
                                  const JobRequest& b, std::int64_t candidate_ceiling) {
    if (!config.valid_reservation(a) || !config.valid_reservation(b))
        throw std::out_of_range("transfer: vectors outside the configured space");
    const int N = config.server_count();
    const auto d = deficits(a, b);
    const auto s = surpluses(a, b);

    // Off-diagonal entries in row-major order with their pairwise caps.
    struct Entry {
        int n, m, cap;
    };
    std::vector<Entry> entries;
    std::int64_t candidates = 1;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            const int cap = std::min(d[n], s[m]);
            entries.push_back({n, m, cap});
            if (candidates > candidate_ceiling / (cap + 1))
                throw std::runtime_error("brute_force_transfer: candidate ceiling exceeded");
            candidates *= cap + 1;
        }

    std::vector<std::vector<int>> delta(N, std::vector<int>(N, 0));
    std::vector<int> received(N, 0);
    TransferPlan best;
    double best_total = std::numeric_limits<double>::infinity();
    bool have_best = false;

    std::vector<int> value(entries.size(), 0);
    while (true) {
        bool feasible = true;
        for (int m = 0; m < N && feasible; ++m) feasible = received[m] <= s[m];
        if (feasible) {
            auto [cv, ct] = transfer_plan_cost(config, a, b, delta);
            const double total = cv + ct;
            if (!have_best || total < best_total) {
                have_best = true;
                best_total = total;
                best.delta = delta;
                best.violation_cost = cv;
                best.transfer_cost = ct;
            }
        }
        // Odometer: last entry fastest, so candidates arrive in lexicographic
        // order of the flattened matrix.
        std::size_t i = entries.size();
        while (i > 0) {
            --i;
            const auto& e = entries[i];
            if (value[i] < e.cap) {
                ++value[i];
                delta[e.n][e.m] = value[i];
                ++received[e.m];
                break;
            }
            received[e.m] -= value[i];
            value[i] = 0;
            delta[e.n][e.m] = 0;
            if (i == 0) return best;
        }
        if (entries.empty()) return best;
    }
}

CostOracle::CostOracle(const NetworkConfig& config)
    : config_(config), size_(config.space_size()), dense_(size_ <= kDenseLimit) {
    if (dense_) {
        const auto cells = static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_);
        cv_.assign(cells, std::numeric_limits<double>::quiet_NaN());
        ct_.assign(cells, 0.0);
    }
}

std::pair<double, double> CostOracle::compute(std::int64_t a_index,
                                              std::int64_t b_index) const {
    const auto plan = solve_transfer(config_, config_.reservation_at(a_index),
                                     config_.reservation_at(b_index));
    return {plan.violation_cost, plan.transfer_cost};
}

std::pair<double, double> CostOracle::cost_parts(std::int64_t a_index,
                                                 std::int64_t b_index) const {
    if (a_index < 0 || a_index >= size_ || b_index < 0 || b_index >= size_)
        throw std::out_of_range("cost oracle: index outside the reservation space");
    if (dense_) {
        const auto slot =
            static_cast<std::size_t>(b_index) * static_cast<std::size_t>(size_) +
            static_cast<std::size_t>(a_index);
        if (std::isnan(cv_[slot])) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (std::isnan(cv_[slot])) {
                auto parts = compute(a_index, b_index);
                ct_[slot] = parts.second;
                cv_[slot] = parts.first;
            }
        }
        return {cv_[slot], ct_[slot]};
    }
    const auto key = static_cast<std::uint64_t>(a_index) * static_cast<std::uint64_t>(size_) +
                     static_cast<std::uint64_t>(b_index);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sparse_.find(key);
    if (it == sparse_.end()) it = sparse_.emplace(key, compute(a_index, b_index)).first;
    return it->second;
}

double CostOracle::total_cost(std::int64_t a_index, std::int64_t b_index) const {
    auto parts = cost_parts(a_index, b_index);
    return parts.first + parts.second;
}

double CostOracle::total_cost(const Reservation& a, const JobRequest& b) const {
    return total_cost(config_.index_of(a), config_.index_of(b));
}

std::vector<double> CostOracle::cost_column(std::int64_t b_index) const {
    std::vector<double> col(static_cast<std::size_t>(size_));
    for (std::int64_t a = 0; a < size_; ++a)
        col[static_cast<std::size_t>(a)] = total_cost(a, b_index);
    return col;
}

void CostOracle::precompute_all() const {
    if (!dense_) return;
    for (std::int64_t b = 0; b < size_; ++b)
        for (std::int64_t a = 0; a < size_; ++a) cost_parts(a, b);
}

void CostOracle::dump_cost_matrix_csv(std::ostream& os) const {
    if (!dense_)
        throw std::runtime_error("cost matrix dump requires the dense representation");
    precompute_all();
    for (std::int64_t a = 0; a < size_; ++a) {
        for (std::int64_t b = 0; b < size_; ++b) {
            if (b > 0) os << ',';
            os << format_double(total_cost(a, b));
        }
        os << '\n';
    }
}

}  // namespace orr
