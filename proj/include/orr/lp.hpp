#pragma once

#include <cstddef>
#include <vector>

namespace orr {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;  // structural variables, empty unless Optimal
};

// Small dense LP in the form: minimize c.x subject to rows (<=, =, >=) and
// x >= 0. Solved by two-phase primal simplex with Bland's rule, which cannot
// cycle. Intended scale: tens of variables, hundreds of rows.
class LinearProgram {
  public:
    explicit LinearProgram(std::size_t num_vars);

    std::size_t num_vars() const { return num_vars_; }

    // Objective defaults to all zeros.
    void set_objective(std::vector<double> c);

    // sense is '<' for <=, '=' for equality, '>' for >=.
    void add_constraint(std::vector<double> row, char sense, double rhs);

    LpResult solve(double eps = 1e-9) const;

  private:
    std::size_t num_vars_;
    std::vector<double> c_;
    std::vector<std::vector<double>> rows_;
    std::vector<char> senses_;
    std::vector<double> rhs_;
};

}  // namespace orr
