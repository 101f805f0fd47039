#include "robscore/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "robscore/errors.hpp"

namespace robscore {

RiskScore::RiskScore(std::vector<Condition> conditions, std::int64_t bias_half_units)
    : bias_half_(bias_half_units) {
  std::map<std::pair<std::size_t, double>, std::int64_t> merged;
  for (const auto& c : conditions) {
    if (!std::isfinite(c.theta)) throw DomainError("condition threshold must be finite");
    merged[{c.feature, c.theta}] += c.weight;
  }
  for (const auto& [key, weight] : merged) {
    if (weight != 0) conditions_.push_back(Condition{key.first, key.second, weight});
  }
}

RiskScore RiskScore::from_rounds(std::span<const Stump> rounds) {
  std::vector<Condition> conditions;
  conditions.reserve(rounds.size());
  for (const auto& s : rounds) conditions.push_back(Condition{s.feature, s.theta, 1});
  return RiskScore(std::move(conditions), -static_cast<std::int64_t>(rounds.size()));
}

std::int64_t RiskScore::doubled_score(std::span<const double> x) const {
  std::int64_t s = bias_half_;
  for (const auto& c : conditions_) {
    if (c.holds(x)) s += 2 * c.weight;
  }
  return s;
}

DecisionTree::DecisionTree(std::size_t num_features, std::vector<TreeNode> nodes)
    : num_features_(num_features), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DomainError("tree needs at least one node");
  const auto count = static_cast<std::int32_t>(nodes_.size());
  std::vector<int> parents(nodes_.size(), 0);
  for (const auto& node : nodes_) {
    if (node.is_leaf) {
      if (node.label != 1 && node.label != -1) throw DomainError("leaf label must be -1 or +1");
      continue;
    }
    if (node.feature >= num_features_) throw DomainError("split feature out of range");
    if (!std::isfinite(node.theta)) throw DomainError("split threshold must be finite");
    for (std::int32_t child : {node.left, node.right}) {
      if (child <= 0 || child >= count) throw DomainError("child index out of range");
      ++parents[static_cast<std::size_t>(child)];
    }
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (parents[i] != 1) throw DomainError("node " + std::to_string(i) + " is not a tree child");
  }
  // Reachability plus box consistency; with unique parents this also rules
  // out cycles.
  const double inf = std::numeric_limits<double>::infinity();
  struct Frame {
    std::int32_t node;
    std::vector<double> lo, hi;
  };
  std::vector<Frame> stack{{0, std::vector<double>(num_features_, -inf),
                            std::vector<double>(num_features_, inf)}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    ++visited;
    const auto& node = nodes_[static_cast<std::size_t>(f.node)];
    if (node.is_leaf) continue;
    const std::size_t j = node.feature;
    if (!(f.lo[j] < node.theta && node.theta < f.hi[j])) {
      throw DomainError("split at node " + std::to_string(f.node) +
                        " contradicts an ancestor constraint");
    }
    Frame left{node.left, f.lo, f.hi};
    left.hi[j] = node.theta;
    Frame right{node.right, std::move(f.lo), std::move(f.hi)};
    right.lo[j] = node.theta;
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
  if (visited != nodes_.size()) throw DomainError("tree has unreachable nodes");
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[n.feature] <= n.theta ? n.left : n.right);
  }
  return nodes_[i].label;
}

std::size_t DecisionTree::size() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf; }));
}

std::size_t DecisionTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, dep] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.is_leaf) {
      best = std::max(best, dep);
    } else {
      stack.push_back({n.left, dep + 1});
      stack.push_back({n.right, dep + 1});
    }
  }
  return best;
}

std::vector<LeafBox> DecisionTree::leaf_boxes() const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<LeafBox> out;
  struct Frame {
    std::int32_t node;
    LeafBox box;
  };
  std::vector<Frame> stack{{0, LeafBox{-1, std::vector<double>(num_features_, -inf),
                                       std::vector<double>(num_features_, inf)}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(f.node)];
    if (n.is_leaf) {
      f.box.label = n.label;
      out.push_back(std::move(f.box));
      continue;
    }
    Frame right{n.right, f.box};
    right.box.lo[n.feature] = std::max(right.box.lo[n.feature], n.theta);
    f.box.hi[n.feature] = std::min(f.box.hi[n.feature], n.theta);
    stack.push_back(std::move(right));
    stack.push_back(Frame{n.left, std::move(f.box)});
  }
  return out;
}

int predict(const Model& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

double accuracy(const Model& model, const LabeledDataset& ds) {
  return std::visit([&](const auto& m) { return accuracy(m, ds); }, model);
}

std::size_t interpretation_complexity(const RiskScore& model) {
  return static_cast<std::size_t>(std::count_if(model.conditions().begin(),
                                                model.conditions().end(),
                                                [](const Condition& c) { return c.weight != 0; }));
}

std::size_t interpretation_complexity(const DecisionTree& model) { return model.size(); }

std::size_t interpretation_complexity(const Model& model) {
  return std::visit([](const auto& m) { return interpretation_complexity(m); }, model);
}

std::size_t interpretation_complexity_with_bias(const RiskScore& model) {
  return interpretation_complexity(model) + (model.bias_half_units() != 0 ? 1 : 0);
}

}  // namespace robscore
