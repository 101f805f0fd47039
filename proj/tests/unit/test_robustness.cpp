#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "robscore/bbm_rs.hpp"
#include "robscore/cart.hpp"
#include "robscore/errors.hpp"
#include "robscore/robustness.hpp"
#include "robscore/stumps.hpp"

using namespace robscore;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RiskScore single_condition() { return RiskScore({{0, 0.5, 1}}, -1); }

DecisionTree stump_tree() {
  return DecisionTree(1, {TreeNode::split(0, 0.5, 1, 2), TreeNode::leaf(-1), TreeNode::leaf(1)});
}

DecisionTree xor_tree() {
  return DecisionTree(2, {TreeNode::split(0, 0.5, 1, 2), TreeNode::split(1, 0.5, 3, 4),
                          TreeNode::split(1, 0.5, 5, 6), TreeNode::leaf(-1), TreeNode::leaf(1),
                          TreeNode::leaf(1), TreeNode::leaf(-1)});
}

RiskScore random_score(Rng& rng, std::size_t d) {
  std::vector<Condition> conds;
  const std::size_t m = 1 + uniform_index(rng, 6);
  std::int64_t total = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const auto w = static_cast<std::int64_t>(1 + uniform_index(rng, 3));
    conds.push_back({uniform_index(rng, d), std::round(uniform01(rng) * 100.0) / 100.0, w});
    total += w;
  }
  const auto bias = -static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(2 * total + 1)));
  return RiskScore(conds, bias);
}

std::vector<double> random_point(Rng& rng, std::size_t d) {
  std::vector<double> x(d);
  for (auto& v : x) v = std::round(uniform01(rng) * 1000.0) / 1000.0 + 0.0005;
  return x;
}

std::vector<double> shifted(std::span<const double> x, double by) {
  std::vector<double> p(x.begin(), x.end());
  for (auto& v : p) v += by;
  return p;
}

}  // namespace

TEST(EmpiricalRobustness, RiskScoreExamples) {
  const auto rs = single_condition();
  const double hi[] = {0.8}, lo[] = {0.2};
  EXPECT_NEAR(er_risk_score(rs, hi), 0.3, 1e-15);
  EXPECT_NEAR(er_risk_score(rs, lo), 0.3, 1e-15);
}

TEST(EmpiricalRobustness, TreeExamples) {
  const double hi[] = {0.8}, lo[] = {0.2};
  EXPECT_NEAR(er_tree(stump_tree(), hi), 0.3, 1e-15);
  EXPECT_NEAR(er_tree(stump_tree(), lo), 0.3, 1e-15);
  const double q[] = {0.25, 0.25};
  EXPECT_DOUBLE_EQ(er_tree(xor_tree(), q), 0.25);
}

TEST(EmpiricalRobustness, ConstantModelsNeverFlip) {
  const double x[] = {0.4, 0.6};
  EXPECT_EQ(er_tree(DecisionTree::single_leaf(2, 1), x), kInf);
  EXPECT_EQ(er_risk_score(RiskScore({}, 1), x), kInf);
  // Weights too small to overcome the bias.
  EXPECT_EQ(er_risk_score(RiskScore({{0, 0.5, 1}}, -4), x), kInf);
}

TEST(EmpiricalRobustness, NonMonotoneScoreIsRejected) {
  const RiskScore rs({{0, 0.5, 2}, {1, 0.3, -1}}, -1);
  EXPECT_FALSE(is_monotone_structure(rs));
  const double x[] = {0.6, 0.6};
  EXPECT_THROW(er_risk_score(rs, x), ContractError);
  const LabeledDataset ds(2, {0.6, 0.6}, {1});
  EXPECT_THROW(empirical_robustness(Model{rs}, ds, 1, 0), ContractError);
  EXPECT_THROW(certified_radius_check(rs, ds, 0.1), ContractError);
}

TEST(EmpiricalRobustnessProperty, RiskScoreMatchesCornerAttack) {
  Rng rng(77);
  const double step = 1e-3;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 4);
    const auto rs = random_score(rng, d);
    const auto x = random_point(rng, d);
    const double exact = er_risk_score(rs, x);
    const double attack = oracle::corner_attack(rs, x, step, 1.5);
    if (std::isinf(exact)) {
      ASSERT_TRUE(std::isinf(attack)) << "trial " << trial;
      continue;
    }
    ASSERT_GE(attack + 1e-12, exact) << "trial " << trial;
    ASSERT_LE(attack, exact + step + 1e-12) << "trial " << trial;
  }
}

TEST(EmpiricalRobustnessProperty, RiskScoreBoundaryProbes) {
  Rng rng(78);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 5);
    const auto rs = random_score(rng, d);
    const auto x = random_point(rng, d);
    const double e = er_risk_score(rs, x);
    if (std::isinf(e)) continue;
    const int base = rs.predict(x);
    const double dir = base == 1 ? -1.0 : 1.0;
    if (e > 1e-6) {
      ASSERT_EQ(rs.predict(shifted(x, dir * (e - 1e-6))), base);
    }
    ASSERT_NE(rs.predict(shifted(x, dir * (e + 1e-6))), base);
  }
}

TEST(EmpiricalRobustnessProperty, TreeMatchesGridAttack) {
  Rng rng(91);
  const double step = 1e-3;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const auto ds = oracle::random_dataset(40, d, seed);
    TreeTrainConfig cfg;
    cfg.max_depth = 1 + seed % 4;
    const auto tree = train_cart(ds, cfg);
    for (int q = 0; q < 10; ++q) {
      const auto x = random_point(rng, d);
      const double exact = er_tree(tree, x);
      const double attack = oracle::tree_grid_attack(tree, x, step, 1.5);
      if (std::isinf(exact)) {
        ASSERT_TRUE(std::isinf(attack));
        continue;
      }
      ASSERT_GE(attack + 1e-12, exact) << "seed " << seed;
      ASSERT_LE(attack, exact + step + 1e-12) << "seed " << seed;
    }
  }
}

TEST(EmpiricalRobustnessProperty, TreeBallProbes) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t d = 1 + seed % 4;
    const auto ds = oracle::random_dataset(50, d, seed + 100);
    TreeTrainConfig cfg;
    cfg.max_depth = 2 + seed % 3;
    const auto tree = train_cart(ds, cfg);
    for (int q = 0; q < 10; ++q) {
      const auto x = random_point(rng, d);
      const double e = er_tree(tree, x);
      if (std::isinf(e)) continue;
      if (e > 1e-6) {
        ASSERT_FALSE(oracle::tree_ball_flips(tree, x, e - 1e-6));
      }
      ASSERT_TRUE(oracle::tree_ball_flips(tree, x, e + 1e-6));
    }
  }
}

TEST(EmpiricalRobustness, ClipConfinesPerturbations) {
  ErOptions clip;
  clip.clip = true;
  // Only reachable by leaving the unit cube.
  const RiskScore above({{0, 1.2, 1}}, -1);
  const double x[] = {0.9};
  EXPECT_NEAR(er_risk_score(above, x), 0.3, 1e-12);
  EXPECT_EQ(er_risk_score(above, x, clip), kInf);
  const RiskScore below({{0, 0.0, 1}}, -1);
  EXPECT_DOUBLE_EQ(er_risk_score(below, x), 0.9);
  EXPECT_EQ(er_risk_score(below, x, clip), kInf);
  const DecisionTree tree(1, {TreeNode::split(0, 1.1, 1, 2), TreeNode::leaf(-1), TreeNode::leaf(1)});
  EXPECT_NEAR(er_tree(tree, x), 0.2, 1e-12);
  EXPECT_EQ(er_tree(tree, x, clip), kInf);
  // Inside the cube the answers agree.
  EXPECT_NEAR(er_risk_score(single_condition(), x, clip), 0.4, 1e-12);
  EXPECT_NEAR(er_tree(stump_tree(), x, clip), 0.4, 1e-12);
}

TEST(EmpiricalRobustnessReport, BinaryDataWithTree) {
  const LabeledDataset test(1, {0, 1, 0, 1, 1}, {-1, 1, -1, 1, -1});
  const auto rep = empirical_robustness(Model{stump_tree()}, test, 100, 3, 0.4);
  EXPECT_EQ(rep.correct, 4u);
  EXPECT_EQ(rep.indices, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(rep.mean_er, 0.5);
  EXPECT_DOUBLE_EQ(rep.astuteness, 0.8);
  EXPECT_FALSE(rep.non_flippable);
  const auto strict = empirical_robustness(Model{stump_tree()}, test, 100, 3, 0.5);
  EXPECT_DOUBLE_EQ(strict.astuteness, 0.0);
}

TEST(EmpiricalRobustnessReport, SampleSizeIsClamped) {
  const auto ds = oracle::random_dataset(200, 1, 4);
  const auto rep = empirical_robustness(Model{stump_tree()}, ds, 10, 9);
  EXPECT_EQ(rep.indices.size(), 10u);
  EXPECT_TRUE(std::is_sorted(rep.indices.begin(), rep.indices.end()));
  for (auto i : rep.indices) EXPECT_EQ(stump_tree().predict(ds.row(i)), ds.label(i));
  const auto again = empirical_robustness(Model{stump_tree()}, ds, 10, 9);
  EXPECT_EQ(rep.indices, again.indices);
  const auto all = empirical_robustness(Model{stump_tree()}, ds, 100000, 9);
  EXPECT_EQ(all.indices.size(), all.correct);
}

TEST(EmpiricalRobustnessReport, ConstantModel) {
  const LabeledDataset test(1, {0.2, 0.7}, {1, -1});
  const auto rep = empirical_robustness(Model{DecisionTree::single_leaf(1, 1)}, test, 5, 0);
  EXPECT_TRUE(rep.non_flippable);
  EXPECT_EQ(rep.mean_er, kInf);
}

TEST(EmpiricalRobustnessReport, Errors) {
  const LabeledDataset test(1, {0.2, 0.7}, {1, 1});
  EXPECT_THROW(empirical_robustness(Model{DecisionTree::single_leaf(1, -1)}, test, 5, 0), EvalError);
  EXPECT_THROW(empirical_robustness(Model{DecisionTree::single_leaf(1, 1)}, test, 0, 0), EvalError);
}

TEST(CertifiedRadius, ZeroTauIsTrivial) {
  const LabeledDataset ds(1, {0.2, 0.7}, {-1, 1});
  EXPECT_EQ(certified_radius_check(single_condition(), ds, 0.0), 0.0);
}

TEST(CertifiedRadius, DetectsViolations) {
  // 0.42 is misclassified and skipped; 0.65 maps back to 0.75 with ER 0.25.
  const LabeledDataset noisy(1, {0.42, 0.65}, {1, 1});
  EXPECT_EQ(certified_radius_check(single_condition(), noisy, 0.1), 0.0);
  // 0.55 sits only 0.05 above the threshold.
  const LabeledDataset original(1, {0.55, 0.9}, {1, 1});
  const LabeledDataset shifted_rows(1, {0.52, 0.8}, {1, 1});
  EXPECT_DOUBLE_EQ(certified_radius_check(single_condition(), original, shifted_rows, 0.1), 0.5);
}

TEST(CertifiedRadius, BbmRsModelsAreCertified) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = gen_linear_dataset(5, 0.1, 400, seed, SampleDomain::kUnit).data;
    BbmRsConfig cfg;
    cfg.rounds = 30;
    cfg.tau = 0.05;
    const auto rep = train_bbm_rs(ds, cfg);
    EXPECT_EQ(certified_radius_check(rep.model, ds, inject_noise(ds, 0.05), 0.05), 0.0) << seed;
    EXPECT_EQ(certified_radius_check(rep.model, inject_noise(ds, 0.05), 0.05), 0.0) << seed;
  }
}

TEST(Monotonicity, ViolationsDetected) {
  EXPECT_EQ(monotone_pair_violations(single_condition(), 1, 1000, 1), 0u);
  const RiskScore bad({{0, 0.5, -1}}, 1);
  EXPECT_GT(monotone_pair_violations(bad, 1, 1000, 1), 0u);
}
