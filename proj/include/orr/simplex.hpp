#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace orr {

// Probability distribution over flat reservation indices. Immutable after
// construction; construction clamps negative dust and renormalizes sums
// within 1e-9 of one, and rejects anything further off.
class Distribution {
  public:
    static constexpr double kTolerance = 1e-9;

    static Distribution uniform(std::size_t size);
    static Distribution point_mass(std::size_t size, std::size_t index);
    // Degenerate single-atom distribution, so the type is default usable in
    // aggregates; still satisfies the invariants.
    Distribution() : p_{1.0} {}
    explicit Distribution(std::vector<double> p);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

  private:
    struct Exact {};
    Distribution(std::vector<double> p, Exact) : p_(std::move(p)) {}

    std::vector<double> p_;

    friend Distribution project_simplex(const std::vector<double>& y);
};

// Euclidean projection onto the probability simplex via sort and threshold:
// p_a = max(y_a - tau, 0) with tau chosen so the result sums to one.
Distribution project_simplex(const std::vector<double>& y);

// sum_a p_a f_a, accumulated in index order.
double expectation(const Distribution& P, const std::vector<double>& f);

// Uniform double in [0, 1) from the top 53 bits of the generator output,
// identical across platforms for a given stream.
double uniform_unit(std::mt19937_64& rng);

// Inverse-CDF draw in canonical index order.
std::int64_t sample(const Distribution& P, std::mt19937_64& rng);

double l2_distance(const Distribution& P, const Distribution& Q);

}  // namespace orr
