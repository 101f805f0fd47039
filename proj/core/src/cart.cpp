#include "robscore/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>

#include "robscore/errors.hpp"
#include "robscore/stumps.hpp"

namespace robscore {

double binary_entropy(double pos, double total) {
  if (total <= 0.0 || pos <= 0.0 || pos >= total) return 0.0;
  const double p = pos / total;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

namespace {

constexpr double kGainTieTolerance = 1e-12;

struct Split {
  std::size_t feature = 0;
  double theta = 0.0;
  double gain = 0.0;
};

struct Growing {
  std::vector<std::size_t> rows;
  std::size_t depth = 0;
  std::optional<Split> split;
  int label = -1;
  std::int32_t left = TreeNode::kNone;
  std::int32_t right = TreeNode::kNone;
};

int majority(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
  std::size_t pos = 0;
  for (auto i : rows) pos += ds.label(i) == 1;
  return 2 * pos > rows.size() ? 1 : -1;
}

std::optional<Split> find_split(const LabeledDataset& ds, const std::vector<std::size_t>& rows,
                                std::size_t min_leaf) {
  const std::size_t n = rows.size();
  std::size_t total_pos = 0;
  for (auto i : rows) total_pos += ds.label(i) == 1;
  const double parent = binary_entropy(static_cast<double>(total_pos), static_cast<double>(n));

  std::vector<Split> candidates;
  std::vector<std::size_t> order(rows);
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ds.value(a, j) < ds.value(b, j); });
    std::size_t left_n = 0, left_pos = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      ++left_n;
      left_pos += ds.label(order[k]) == 1;
      const double a = ds.value(order[k], j);
      const double b = ds.value(order[k + 1], j);
      if (a == b || left_n < min_leaf || n - left_n < min_leaf) continue;
      const double nl = static_cast<double>(left_n), nr = static_cast<double>(n - left_n);
      const double child = (nl * binary_entropy(static_cast<double>(left_pos), nl) +
                            nr * binary_entropy(static_cast<double>(total_pos - left_pos), nr)) /
                           static_cast<double>(n);
      candidates.push_back({j, split_midpoint(a, b), parent - child});
    }
  }
  if (candidates.empty()) return std::nullopt;
  double top = candidates.front().gain;
  for (const auto& c : candidates) top = std::max(top, c.gain);
  for (const auto& c : candidates) {
    if (c.gain >= top - kGainTieTolerance) return c;  // already in (feature, theta) order
  }
  return std::nullopt;
}

}  // namespace

DecisionTree train_cart(const LabeledDataset& ds, const TreeTrainConfig& config) {
  if (ds.empty()) throw DomainError("cannot grow a tree on an empty dataset");
  if (config.max_depth < 1) throw DomainError("max_depth must be at least 1");
  const std::size_t min_leaf = std::max<std::size_t>(config.min_leaf, 1);

  std::vector<Growing> grown;
  auto make_node = [&](std::vector<std::size_t> rows, std::size_t depth) {
    Growing g;
    g.label = majority(ds, rows);
    g.depth = depth;
    std::size_t pos = 0;
    for (auto i : rows) pos += ds.label(i) == 1;
    const bool pure = pos == 0 || pos == rows.size();
    if (!pure && depth < config.max_depth) g.split = find_split(ds, rows, min_leaf);
    g.rows = std::move(rows);
    grown.push_back(std::move(g));
    return static_cast<std::int32_t>(grown.size() - 1);
  };

  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  make_node(std::move(all), 0);

  // Frontier ordered by gain, then creation order.
  auto cmp = [&](std::int32_t a, std::int32_t b) {
    const double ga = grown[static_cast<std::size_t>(a)].split->gain;
    const double gb = grown[static_cast<std::size_t>(b)].split->gain;
    if (std::abs(ga - gb) > kGainTieTolerance) return ga < gb;
    return a > b;
  };
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, decltype(cmp)> frontier(cmp);
  if (grown[0].split) frontier.push(0);

  std::size_t internal = 0;
  while (!frontier.empty()) {
    if (config.max_internal_nodes != 0 && internal >= config.max_internal_nodes) break;
    const std::int32_t id = frontier.top();
    frontier.pop();
    const Split split = *grown[static_cast<std::size_t>(id)].split;
    std::vector<std::size_t> left_rows, right_rows;
    for (auto i : grown[static_cast<std::size_t>(id)].rows) {
      (ds.value(i, split.feature) <= split.theta ? left_rows : right_rows).push_back(i);
    }
    const std::size_t depth = grown[static_cast<std::size_t>(id)].depth + 1;
    const auto l = make_node(std::move(left_rows), depth);
    const auto r = make_node(std::move(right_rows), depth);
    grown[static_cast<std::size_t>(id)].left = l;
    grown[static_cast<std::size_t>(id)].right = r;
    ++internal;
    for (auto c : {l, r}) {
      if (grown[static_cast<std::size_t>(c)].split) frontier.push(c);
    }
  }

  // Emit in preorder; unexpanded nodes become leaves.
  std::vector<TreeNode> nodes;
  auto emit = [&](auto&& self, std::int32_t id) -> std::int32_t {
    const auto& g = grown[static_cast<std::size_t>(id)];
    const auto index = static_cast<std::int32_t>(nodes.size());
    if (g.left == TreeNode::kNone) {
      nodes.push_back(TreeNode::leaf(g.label));
      return index;
    }
    nodes.push_back(TreeNode::split(g.split->feature, g.split->theta, 0, 0));
    const auto l = self(self, g.left);
    const auto r = self(self, g.right);
    nodes[static_cast<std::size_t>(index)].left = l;
    nodes[static_cast<std::size_t>(index)].right = r;
    return index;
  };
  emit(emit, 0);
  return DecisionTree(ds.dim(), std::move(nodes));
}

}  // namespace robscore
