#include "robscore/simplex.hpp"

#include <cmath>
#include <limits>

#include "robscore/errors.hpp"

namespace robscore {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0), cost_(cols + 1, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::vector<double>& cost() { return cost_; }  // reduced costs; cost_[n_] = -objective

  void pivot(std::size_t r, std::size_t e) {
    const double p = at(r, e);
    double* row = &a_[r * (n_ + 1)];
    for (std::size_t c = 0; c <= n_; ++c) row[c] /= p;
    row[e] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* other = &a_[i * (n_ + 1)];
      const double f = other[e];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) other[c] -= f * row[c];
      other[e] = 0.0;
    }
    const double f = cost_[e];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= n_; ++c) cost_[c] -= f * row[c];
      cost_[e] = 0.0;
    }
    basis_[r] = e;
  }

  /// Runs Bland-rule pivots over columns [0, allowed). Returns the status.
  LpStatus optimize(std::size_t allowed, const SimplexOptions& opt, std::size_t& pivots) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (cost_[j] > opt.tolerance) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return LpStatus::kOptimal;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double coef = at(i, enter);
        if (coef <= opt.tolerance) continue;
        const double ratio = rhs(i) / coef;
        if (leave == m_ || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m_) return LpStatus::kUnbounded;
      if (++pivots > opt.max_pivots) return LpStatus::kIterationLimit;
      pivot(leave, enter);
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
  const std::size_t m = lp.rows.size();
  const std::size_t nv = lp.num_vars;
  if (lp.objective.size() != nv || lp.senses.size() != m || lp.rhs.size() != m) {
    throw SolverError("linear program dimensions are inconsistent");
  }

  // Normalize to rhs >= 0 and count auxiliary columns.
  std::vector<double> sign(m, 1.0);
  std::vector<ConstraintSense> sense(lp.senses);
  std::size_t num_slack = 0, num_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].size() != nv) throw SolverError("constraint row has wrong width");
    if (!std::isfinite(lp.rhs[i])) throw SolverError("constraint bound is not finite");
    if (lp.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == ConstraintSense::kLessEqual) sense[i] = ConstraintSense::kGreaterEqual;
      else if (sense[i] == ConstraintSense::kGreaterEqual) sense[i] = ConstraintSense::kLessEqual;
    }
    if (sense[i] != ConstraintSense::kEqual) ++num_slack;
    if (sense[i] != ConstraintSense::kLessEqual) ++num_art;
  }
  const std::size_t art_begin = nv + num_slack;
  const std::size_t ncols = art_begin + num_art;
  Tableau tab(m, ncols);

  std::size_t slack = nv, art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nv; ++j) tab.at(i, j) = sign[i] * lp.rows[i][j];
    tab.rhs(i) = sign[i] * lp.rhs[i];
    if (sense[i] == ConstraintSense::kLessEqual) {
      tab.at(i, slack) = 1.0;
      tab.basis(i) = slack++;
    } else {
      if (sense[i] == ConstraintSense::kGreaterEqual) tab.at(i, slack++) = -1.0;
      tab.at(i, art) = 1.0;
      tab.basis(i) = art++;
    }
  }

  LpSolution sol;
  // Phase I: maximize -sum(artificials).
  if (num_art > 0) {
    auto& cost = tab.cost();
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t j = art_begin; j < ncols; ++j) cost[j] = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis(i) < art_begin) continue;
      for (std::size_t c = 0; c <= ncols; ++c) cost[c] += tab.at(i, c);
    }
    const LpStatus st = tab.optimize(ncols, opt, sol.pivots);
    if (st == LpStatus::kIterationLimit) {
      sol.status = st;
      return sol;
    }
    // cost[ncols] holds the negated phase-I objective, i.e. the artificial sum.
    if (cost[ncols] > 1e-7 * std::max(1.0, static_cast<double>(m))) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis(i) < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > opt.tolerance) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase II on the original objective; artificial columns may not re-enter.
  auto& cost = tab.cost();
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < nv; ++j) cost[j] = lp.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = tab.basis(i);
    const double cb = b < nv ? lp.objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= ncols; ++c) cost[c] -= cb * tab.at(i, c);
  }
  const LpStatus st = tab.optimize(art_begin, opt, sol.pivots);
  sol.status = st;
  if (st != LpStatus::kOptimal) return sol;

  sol.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < nv) sol.x[tab.basis(i)] = tab.rhs(i);
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.objective += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace robscore
