#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "robscore/dataset.hpp"

namespace robscore {

/// One-sided threshold hypothesis: +1 iff x[feature] >= theta.
struct Stump {
  std::size_t feature = 0;
  double theta = 0.0;

  int predict(std::span<const double> x) const { return x[feature] >= theta ? 1 : -1; }

  friend bool operator==(const Stump&, const Stump&) = default;
};

/// Risk-score row "x[feature] >= theta" contributing `weight` points.
struct Condition {
  std::size_t feature = 0;
  double theta = 0.0;
  std::int64_t weight = 1;

  bool holds(std::span<const double> x) const { return x[feature] >= theta; }

  friend bool operator==(const Condition&, const Condition&) = default;
};

/// score(x) = bias + sum of weights of satisfied conditions; predicts +1 iff
/// score(x) > 0.
///
/// The bias is stored in half units so that the -T/2 bias of an odd number of
/// boosting rounds stays an exact integer; every score comparison is done on
/// the doubled score. Conditions are kept merged (one entry per (feature,
/// theta)) and sorted by (feature, theta). Weights are nonzero integers;
/// models produced by boosting only carry positive ones, but negative weights
/// are representable so that external scorecards can be loaded and rejected by
/// the monotonicity check.
class RiskScore {
 public:
  RiskScore() = default;
  RiskScore(std::vector<Condition> conditions, std::int64_t bias_half_units);

  /// Unit-weight condition per stump and bias -rounds/2.
  static RiskScore from_rounds(std::span<const Stump> rounds);

  const std::vector<Condition>& conditions() const { return conditions_; }
  std::int64_t bias_half_units() const { return bias_half_; }
  double bias() const { return static_cast<double>(bias_half_) / 2.0; }

  std::int64_t doubled_score(std::span<const double> x) const;
  double score(std::span<const double> x) const {
    return static_cast<double>(doubled_score(x)) / 2.0;
  }
  int predict(std::span<const double> x) const { return doubled_score(x) > 0 ? 1 : -1; }

  friend bool operator==(const RiskScore&, const RiskScore&) = default;

 private:
  std::vector<Condition> conditions_;
  std::int64_t bias_half_ = 0;
};

struct TreeNode {
  static constexpr std::int32_t kNone = -1;

  bool is_leaf = true;
  int label = -1;            // leaves only
  std::size_t feature = 0;   // internal nodes only
  double theta = 0.0;        // x[feature] <= theta goes left
  std::int32_t left = kNone;
  std::int32_t right = kNone;

  static TreeNode leaf(int label) { return TreeNode{true, label, 0, 0.0, kNone, kNone}; }
  static TreeNode split(std::size_t feature, double theta, std::int32_t left,
                        std::int32_t right) {
    return TreeNode{false, -1, feature, theta, left, right};
  }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Axis-aligned region of one leaf: lo < x[j] <= hi for every j.
struct LeafBox {
  int label = -1;
  std::vector<double> lo;  // exclusive
  std::vector<double> hi;  // inclusive
};

/// Binary tree stored as a node array with the root at index 0. The
/// constructor validates the topology (every non-root node has exactly one
/// parent, no cycles) and that every path carves a nonempty box.
class DecisionTree {
 public:
  DecisionTree() : DecisionTree(0, {TreeNode::leaf(-1)}) {}
  DecisionTree(std::size_t num_features, std::vector<TreeNode> nodes);

  static DecisionTree single_leaf(std::size_t num_features, int label) {
    return DecisionTree(num_features, {TreeNode::leaf(label)});
  }

  std::size_t num_features() const { return num_features_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  int predict(std::span<const double> x) const;
  /// Number of internal nodes.
  std::size_t size() const;
  /// Longest root-to-leaf edge count.
  std::size_t depth() const;
  std::vector<LeafBox> leaf_boxes() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::size_t num_features_ = 0;
  std::vector<TreeNode> nodes_;
};

using Model = std::variant<RiskScore, DecisionTree>;

int predict(const Model& model, std::span<const double> x);

/// Fraction of examples of `ds` the model labels correctly.
template <class M>
double accuracy(const M& model, const LabeledDataset& ds) {
  if (ds.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (model.predict(ds.row(i)) == ds.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double accuracy(const Model& model, const LabeledDataset& ds);

/// Internal nodes for trees; nonzero-weight conditions for risk scores.
std::size_t interpretation_complexity(const RiskScore& model);
std::size_t interpretation_complexity(const DecisionTree& model);
std::size_t interpretation_complexity(const Model& model);

/// Conditions plus one for a nonzero bias term.
std::size_t interpretation_complexity_with_bias(const RiskScore& model);

}  // namespace robscore
