#include "orr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace orr {

Distribution Distribution::uniform(std::size_t size) {
    if (size == 0) throw std::invalid_argument("distribution: empty support");
    return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)), Exact{});
}

Distribution Distribution::point_mass(std::size_t size, std::size_t index) {
    if (index >= size) throw std::out_of_range("distribution: point mass outside support");
    std::vector<double> p(size, 0.0);
    p[index] = 1.0;
    return Distribution(std::move(p), Exact{});
}

Distribution::Distribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("distribution: empty support");
    double sum = 0.0;
    for (double& x : p_) {
        if (!std::isfinite(x) || x < -kTolerance)
            throw std::invalid_argument("distribution: negative or non-finite entry");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::abs(sum - 1.0) > kTolerance)
        throw std::invalid_argument("distribution: probabilities do not sum to one");
    for (double& x : p_) x /= sum;
}

Distribution project_simplex(const std::vector<double>& y) {
    if (y.empty()) throw std::invalid_argument("projection: empty input");
    for (double x : y)
        if (!std::isfinite(x)) throw std::invalid_argument("projection: non-finite input");

    std::vector<double> u(y);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        css += u[j];
        const double t = (css - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) tau = t;
    }
    std::vector<double> p(y.size());
    double sum = 0.0;
    for (std::size_t a = 0; a < y.size(); ++a) {
        p[a] = std::max(y[a] - tau, 0.0);
        sum += p[a];
    }
    for (double& x : p) x /= sum;
    return Distribution(std::move(p), Distribution::Exact{});
}

double expectation(const Distribution& P, const std::vector<double>& f) {
    if (P.size() != f.size()) throw std::invalid_argument("expectation: length mismatch");
    double s = 0.0;
    for (std::size_t a = 0; a < f.size(); ++a) s += P[a] * f[a];
    return s;
}

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t sample(const Distribution& P, std::mt19937_64& rng) {
    const double u = uniform_unit(rng);
    double cum = 0.0;
    for (std::size_t a = 0; a < P.size(); ++a) {
        cum += P[a];
        if (u < cum) return static_cast<std::int64_t>(a);
    }
    return static_cast<std::int64_t>(P.size()) - 1;
}

double l2_distance(const Distribution& P, const Distribution& Q) {
    if (P.size() != Q.size()) throw std::invalid_argument("distance: length mismatch");
    double s = 0.0;
    for (std::size_t a = 0; a < P.size(); ++a) {
        const double d = P[a] - Q[a];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace orr
