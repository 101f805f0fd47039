#pragma once

#include <cstddef>
#include <vector>

namespace robscore {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

/// maximize c.x subject to rows[k].x (sense_k) rhs_k and x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<ConstraintSense> senses;
  std::vector<double> rhs;

  void add_constraint(std::vector<double> row, ConstraintSense sense, double b) {
    rows.push_back(std::move(row));
    senses.push_back(sense);
    rhs.push_back(b);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_pivots = 1000000;
};

/// Two-phase dense tableau simplex with Bland's rule (lowest-index entering
/// column, lowest-index leaving basic variable on ratio ties), which cannot
/// cycle on degenerate problems.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace robscore
