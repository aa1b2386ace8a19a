#include "orr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orr {

LinearProgram::LinearProgram(std::size_t num_vars)
    : num_vars_(num_vars), c_(num_vars, 0.0) {
    if (num_vars == 0) throw std::invalid_argument("lp: no variables");
}

void LinearProgram::set_objective(std::vector<double> c) {
    if (c.size() != num_vars_) throw std::invalid_argument("lp: objective length mismatch");
    c_ = std::move(c);
}

void LinearProgram::add_constraint(std::vector<double> row, char sense, double rhs) {
    if (row.size() != num_vars_) throw std::invalid_argument("lp: row length mismatch");
    if (sense != '<' && sense != '=' && sense != '>')
        throw std::invalid_argument("lp: sense must be one of <, =, >");
    rows_.push_back(std::move(row));
    senses_.push_back(sense);
    rhs_.push_back(rhs);
}

namespace {

// Full-tableau simplex state. Columns: structural, then slack/surplus, then
// artificial, then rhs. Bland's rule on both the entering and leaving choices.
struct Tableau {
    std::size_t rows, cols;  // constraint rows, total variable columns
    std::vector<std::vector<double>> t;  // rows x (cols + 1)
    std::vector<std::size_t> basis;      // basic variable per row
    std::vector<double> obj;             // reduced costs, length cols + 1
    double eps;

    void pivot(std::size_t pr, std::size_t pc) {
        auto& prow = t[pr];
        const double pv = prow[pc];
        for (auto& x : prow) x /= pv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pr) continue;
            const double f = t[i][pc];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * prow[j];
        }
        const double f = obj[pc];
        if (f != 0.0)
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * prow[j];
        basis[pr] = pc;
    }

    // Rebuilds the reduced-cost row for costs c (length cols).
    void set_costs(const std::vector<double>& c) {
        obj.assign(cols + 1, 0.0);
        for (std::size_t j = 0; j < cols; ++j) obj[j] = c[j];
        for (std::size_t i = 0; i < rows; ++i) {
            const double cb = c[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t[i][j];
        }
    }

    // Minimizes the current cost row over columns j < col_limit. Returns
    // false when unbounded.
    bool iterate(std::size_t col_limit) {
        while (true) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < col_limit; ++j)
                if (obj[j] < -eps) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;

            std::size_t leave = rows;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                if (t[i][enter] <= eps) continue;
                const double ratio = t[i][cols] / t[i][enter];
                if (leave == rows || ratio < best_ratio - eps ||
                    (std::abs(ratio - best_ratio) <= eps && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult LinearProgram::solve(double eps) const {
    const std::size_t m = rows_.size();
    const std::size_t n = num_vars_;

    // Normalize to nonnegative rhs, counting extra columns.
    std::vector<std::vector<double>> a(m);
    std::vector<char> senses(senses_);
    std::vector<double> b(rhs_);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = rows_[i];
        if (b[i] < 0.0) {
            for (auto& x : a[i]) x = -x;
            b[i] = -b[i];
            if (senses[i] == '<')
                senses[i] = '>';
            else if (senses[i] == '>')
                senses[i] = '<';
        }
    }

    std::size_t num_slack = 0, num_art = 0;
    for (char s : senses) {
        if (s != '=') ++num_slack;
        if (s != '<') ++num_art;
    }

    Tableau tab;
    tab.rows = m;
    tab.cols = n + num_slack + num_art;
    tab.eps = eps;
    tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
    tab.basis.assign(m, 0);

    std::size_t slack_at = n, art_at = n + num_slack;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = a[i][j];
        tab.t[i][tab.cols] = b[i];
        if (senses[i] == '<') {
            tab.t[i][slack_at] = 1.0;
            tab.basis[i] = slack_at++;
        } else if (senses[i] == '>') {
            tab.t[i][slack_at] = -1.0;
            ++slack_at;
            tab.t[i][art_at] = 1.0;
            tab.basis[i] = art_at++;
        } else {
            tab.t[i][art_at] = 1.0;
            tab.basis[i] = art_at++;
        }
    }

    const std::size_t first_art = n + num_slack;
    if (num_art > 0) {
        std::vector<double> phase1(tab.cols, 0.0);
        for (std::size_t j = first_art; j < tab.cols; ++j) phase1[j] = 1.0;
        tab.set_costs(phase1);
        if (!tab.iterate(tab.cols))
            throw std::logic_error("lp: phase 1 cannot be unbounded");
        if (-tab.obj[tab.cols] > 1e-7) return {LpStatus::Infeasible, 0.0, {}};

        // Pivot any artificial still in the basis out on a real column.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < first_art) continue;
            for (std::size_t j = 0; j < first_art; ++j)
                if (std::abs(tab.t[i][j]) > eps) {
                    tab.pivot(i, j);
                    break;
                }
        }
    }

    std::vector<double> phase2(tab.cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = c_[j];
    tab.set_costs(phase2);
    if (!tab.iterate(first_art)) return {LpStatus::Unbounded, 0.0, {}};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.t[i][tab.cols];
    for (double& x : res.x)
        if (x < 0.0 && x > -1e-9) x = 0.0;
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.objective += c_[j] * res.x[j];
    return res;
}

}  // namespace orr
