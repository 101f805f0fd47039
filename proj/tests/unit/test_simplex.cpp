#include <gtest/gtest.h>

#include "robscore/random.hpp"
#include "robscore/simplex.hpp"

using namespace robscore;

namespace {

LinearProgram make(std::size_t n, std::vector<double> c) {
  LinearProgram lp;
  lp.num_vars = n;
  lp.objective = std::move(c);
  return lp;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool feasible(const LinearProgram& lp, const std::vector<double>& x, double tol) {
  for (double v : x) {
    if (v < -tol) return false;
  }
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    const double lhs = dot(lp.rows[k], x);
    switch (lp.senses[k]) {
      case ConstraintSense::kLessEqual:
        if (lhs > lp.rhs[k] + tol) return false;
        break;
      case ConstraintSense::kGreaterEqual:
        if (lhs < lp.rhs[k] - tol) return false;
        break;
      case ConstraintSense::kEqual:
        if (std::abs(lhs - lp.rhs[k]) > tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

TEST(Simplex, TextbookMaximum) {
  auto lp = make(2, {3, 5});
  lp.add_constraint({1, 0}, ConstraintSense::kLessEqual, 4);
  lp.add_constraint({0, 2}, ConstraintSense::kLessEqual, 12);
  lp.add_constraint({3, 2}, ConstraintSense::kLessEqual, 18);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 36.0, 1e-9);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-9);
  EXPECT_NEAR(sol.x[1], 6.0, 1e-9);
}

TEST(Simplex, EqualityAndGreaterEqual) {
  // min x + y s.t. x + 2y >= 4, x - y = 1  ->  x = 2, y = 1.
  auto lp = make(2, {-1, -1});
  lp.add_constraint({1, 2}, ConstraintSense::kGreaterEqual, 4);
  lp.add_constraint({1, -1}, ConstraintSense::kEqual, 1);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -3.0, 1e-9);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-9);
  EXPECT_NEAR(sol.x[1], 1.0, 1e-9);
}

TEST(Simplex, NegativeRightHandSide) {
  // -x <= -2 means x >= 2; minimize x.
  auto lp = make(1, {-1});
  lp.add_constraint({-1}, ConstraintSense::kLessEqual, -2);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-12);
}

TEST(Simplex, Infeasible) {
  auto lp = make(1, {1});
  lp.add_constraint({1}, ConstraintSense::kLessEqual, 1);
  lp.add_constraint({1}, ConstraintSense::kGreaterEqual, 2);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  auto lp = make(2, {1, 1});
  lp.add_constraint({1, -1}, ConstraintSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, NoConstraints) {
  auto lp = make(2, {-1, -2});
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
}

// Beale's example cycles under the textbook largest-coefficient rule.
TEST(Simplex, BealeDegenerateExampleTerminates) {
  auto lp = make(4, {0.75, -150, 0.02, -6});
  lp.add_constraint({0.25, -60, -0.04, 9}, ConstraintSense::kLessEqual, 0);
  lp.add_constraint({0.5, -90, -0.02, 3}, ConstraintSense::kLessEqual, 0);
  lp.add_constraint({0, 0, 1, 0}, ConstraintSense::kLessEqual, 1);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 0.05, 1e-9);
  EXPECT_LT(sol.pivots, 100u);
}

TEST(Simplex, RedundantEqualities) {
  auto lp = make(2, {1, 1});
  lp.add_constraint({1, 1}, ConstraintSense::kEqual, 1);
  lp.add_constraint({2, 2}, ConstraintSense::kEqual, 2);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
}

TEST(Simplex, IterationLimit) {
  auto lp = make(2, {3, 5});
  lp.add_constraint({1, 0}, ConstraintSense::kLessEqual, 4);
  lp.add_constraint({0, 2}, ConstraintSense::kLessEqual, 12);
  lp.add_constraint({3, 2}, ConstraintSense::kLessEqual, 18);
  SimplexOptions opts;
  opts.max_pivots = 1;
  EXPECT_EQ(solve_lp(lp, opts).status, LpStatus::kIterationLimit);
}

// Random bounded LPs: the optimum is feasible and no random feasible point
// beats it. Weak duality against a dual certificate would need the dual
// solution, so the check is by sampling.
TEST(SimplexProperty, OptimumIsFeasibleAndNotBeaten) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 5);
    const std::size_t m = 1 + uniform_index(rng, 6);
    std::vector<double> c(n);
    for (auto& v : c) v = uniform(rng, -1.0, 1.0);
    auto lp = make(n, c);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double> row(n);
      for (auto& v : row) v = uniform(rng, -1.0, 1.0);
      lp.add_constraint(row, ConstraintSense::kLessEqual, uniform(rng, 0.0, 2.0));
    }
    lp.add_constraint(std::vector<double>(n, 1.0), ConstraintSense::kLessEqual, 3.0);
    const auto sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::kOptimal) << "trial " << trial;
    ASSERT_TRUE(feasible(lp, sol.x, 1e-9));
    ASSERT_NEAR(sol.objective, dot(c, sol.x), 1e-9);
    for (int s = 0; s < 300; ++s) {
      std::vector<double> x(n);
      for (auto& v : x) v = uniform(rng, 0.0, 3.0);
      if (feasible(lp, x, 0.0)) {
        ASSERT_LE(dot(c, x), sol.objective + 1e-9);
      }
    }
  }
}
