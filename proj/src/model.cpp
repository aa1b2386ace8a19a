#include "orr/model.hpp"

#include <cmath>
#include <stdexcept>

namespace orr {

CostFn CostFn::power(double c, double p) {
    CostFn f;
    f.kind_ = CostKind::Power;
    f.c_ = c;
    f.p_ = p;
    return f;
}

CostFn CostFn::log_affine(double a, double b) {
    if (b == 0.0) throw std::invalid_argument("log-affine cost: b must be nonzero");
    CostFn f;
    f.kind_ = CostKind::LogAffine;
    f.a_ = a;
    f.b_ = b;
    return f;
}

CostFn CostFn::table(std::vector<double> values) {
    CostFn f;
    f.kind_ = CostKind::Table;
    f.values_ = std::move(values);
    return f;
}

double CostFn::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    switch (kind_) {
        case CostKind::Power:
            return c_ * std::pow(x, p_);
        case CostKind::LogAffine: {
            double arg = (x + a_) / b_;
            if (arg <= 0.0)
                throw std::domain_error("log-affine cost: nonpositive argument to log");
            return std::log(arg);
        }
        case CostKind::Table: {
            auto i = static_cast<std::size_t>(x);  // grid point x -> values_[x-1]
            if (static_cast<double>(i) != x || i < 1 || i > values_.size())
                throw std::out_of_range("table cost: argument outside table grid");
            return values_[i - 1];
        }
    }
    return 0.0;
}

bool CostFn::nondecreasing_on_grid(int grid_max) const {
    double prev = (*this)(0);
    for (int x = 1; x <= grid_max; ++x) {
        double cur = (*this)(x);
        if (cur < prev) return false;
        prev = cur;
    }
    return true;
}

bool CostFn::nonnegative_on_grid(int grid_max) const {
    for (int x = 0; x <= grid_max; ++x)
        if ((*this)(x) < 0.0) return false;
    return true;
}

CostFn CostFn::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& params = j.at("params");
    if (kind == "power")
        return power(params.at("c").get<double>(), params.at("p").get<double>());
    if (kind == "log-affine")
        return log_affine(params.at("a").get<double>(), params.at("b").get<double>());
    if (kind == "table")
        return table(params.at("values").get<std::vector<double>>());
    throw std::invalid_argument("unknown cost function kind: " + kind);
}

nlohmann::json CostFn::to_json() const {
    switch (kind_) {
        case CostKind::Power:
            return {{"kind", "power"}, {"params", {{"c", c_}, {"p", p_}}}};
        case CostKind::LogAffine:
            return {{"kind", "log-affine"}, {"params", {{"a", a_}, {"b", b_}}}};
        case CostKind::Table:
            return {{"kind", "table"}, {"params", {{"values", values_}}}};
    }
    return {};
}

NetworkConfig::NetworkConfig(std::vector<ServerSpec> servers, double budget,
                             std::int64_t space_ceiling)
    : servers_(std::move(servers)), budget_(budget) {
    if (servers_.empty()) throw std::invalid_argument("network needs at least one server");
    if (!std::isfinite(budget_)) throw std::invalid_argument("budget threshold v must be finite");
    space_size_ = 1;
    for (const auto& s : servers_) {
        if (s.capacity < 1) throw std::invalid_argument("server capacity must be >= 1");
        if (space_size_ > space_ceiling / s.capacity)
            throw std::invalid_argument("reservation space exceeds ceiling of " +
                                        std::to_string(space_ceiling));
        space_size_ *= s.capacity;
    }
    strides_.assign(servers_.size(), 1);
    for (int n = static_cast<int>(servers_.size()) - 2; n >= 0; --n)
        strides_[n] = strides_[n + 1] * servers_[n + 1].capacity;

    nonnegative_costs_ = true;
    for (const auto& s : servers_) {
        // Table curves must cover every argument the transfer problem can
        // produce: x in {1,...,m_n} for f^R, {1,...,m_n-1} for f^V and f^T.
        if (s.reserve_cost.kind() == CostKind::Table) s.reserve_cost(s.capacity);
        if (s.capacity > 1) {
            if (s.violation_cost.kind() == CostKind::Table) s.violation_cost(s.capacity - 1);
            if (s.transfer_cost.kind() == CostKind::Table) s.transfer_cost(s.capacity - 1);
        }
        const int grid = s.capacity > 1 ? s.capacity - 1 : 0;
        if (!s.violation_cost.nonnegative_on_grid(grid) ||
            !s.transfer_cost.nonnegative_on_grid(grid))
            nonnegative_costs_ = false;
    }
}

int NetworkConfig::max_capacity() const {
    int m = 1;
    for (const auto& s : servers_) m = std::max(m, s.capacity);
    return m;
}

bool NetworkConfig::valid_reservation(const Reservation& a) const {
    if (a.size() != servers_.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n] < 1 || a[n] > servers_[n].capacity) return false;
    return true;
}

std::int64_t NetworkConfig::index_of(const Reservation& a) const {
    if (!valid_reservation(a))
        throw std::out_of_range("reservation outside the configured space");
    std::int64_t idx = 0;
    for (std::size_t n = 0; n < a.size(); ++n) idx += (a[n] - 1) * strides_[n];
    return idx;
}

Reservation NetworkConfig::reservation_at(std::int64_t index) const {
    if (index < 0 || index >= space_size_)
        throw std::out_of_range("flat index outside the reservation space");
    Reservation a(servers_.size());
    for (std::size_t n = 0; n < servers_.size(); ++n) {
        a[n] = static_cast<int>(index / strides_[n]) + 1;
        index %= strides_[n];
    }
    return a;
}

std::vector<Reservation> NetworkConfig::enumerate_reservations() const {
    std::vector<Reservation> all;
    all.reserve(static_cast<std::size_t>(space_size_));
    for (std::int64_t i = 0; i < space_size_; ++i) all.push_back(reservation_at(i));
    return all;
}

double NetworkConfig::reservation_cost(const Reservation& a) const {
    if (!valid_reservation(a))
        throw std::out_of_range("reservation outside the configured space");
    double total = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) total += servers_[n].reserve_cost(a[n]);
    return total;
}

double NetworkConfig::reservation_cost_at(std::int64_t index) const {
    return reservation_cost(reservation_at(index));
}

std::vector<double> NetworkConfig::reservation_cost_vector() const {
    std::vector<double> out(static_cast<std::size_t>(space_size_));
    for (std::int64_t i = 0; i < space_size_; ++i)
        out[static_cast<std::size_t>(i)] = reservation_cost_at(i);
    return out;
}

NetworkConfig NetworkConfig::from_json(const nlohmann::json& j, std::int64_t space_ceiling) {
    std::vector<ServerSpec> servers;
    for (const auto& sj : j.at("servers")) {
        servers.push_back(ServerSpec{sj.at("capacity").get<int>(),
                                     CostFn::from_json(sj.at("f_R")),
                                     CostFn::from_json(sj.at("f_V")),
                                     CostFn::from_json(sj.at("f_T"))});
    }
    return NetworkConfig(std::move(servers), j.at("v").get<double>(), space_ceiling);
}

nlohmann::json NetworkConfig::to_json() const {
    nlohmann::json servers = nlohmann::json::array();
    for (const auto& s : servers_) {
        servers.push_back({{"capacity", s.capacity},
                           {"f_R", s.reserve_cost.to_json()},
                           {"f_V", s.violation_cost.to_json()},
                           {"f_T", s.transfer_cost.to_json()}});
    }
    return {{"servers", servers}, {"v", budget_}};
}

}  // namespace orr
