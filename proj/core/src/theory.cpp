#include "robscore/theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "robscore/errors.hpp"

namespace robscore {

std::vector<std::vector<double>> grid_thresholds(const LabeledDataset& ds, double r) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  const double delta = std::min(r, 1.0);
  std::vector<std::vector<double>> grid(ds.dim());
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    const auto& dom = ds.domain()[j];
    const auto first = static_cast<long long>(std::floor(dom.lo / delta));
    const auto last = static_cast<long long>(std::ceil(dom.hi / delta));
    for (long long k = first; k <= last; ++k) grid[j].push_back(static_cast<double>(k) * delta);
  }
  return grid;
}

namespace {

struct GridBuilder {
  const LabeledDataset& ds;
  const std::vector<std::vector<double>>& grid;
  std::vector<TreeNode> nodes;

  // Builds the subtree for `rows`, splitting feature `f` with grid indices in
  // [a, b); returns the node index.
  std::int32_t build(const std::vector<std::size_t>& rows, std::size_t f, std::size_t a,
                     std::size_t b) {
    const int first = ds.label(rows.front());
    const bool pure = std::all_of(rows.begin(), rows.end(),
                                  [&](std::size_t i) { return ds.label(i) == first; });
    const auto index = static_cast<std::int32_t>(nodes.size());
    if (pure) {
      nodes.push_back(TreeNode::leaf(first));
      return index;
    }
    while (f < ds.dim()) {
      double lo = ds.value(rows.front(), f), hi = lo;
      for (auto i : rows) {
        lo = std::min(lo, ds.value(i, f));
        hi = std::max(hi, ds.value(i, f));
      }
      // Grid thresholds theta with lo <= theta < hi send rows both ways.
      const auto& g = grid[f];
      const auto begin = std::lower_bound(g.begin() + a, g.begin() + b, lo) - g.begin();
      const auto end = std::lower_bound(g.begin() + a, g.begin() + b, hi) - g.begin();
      if (begin < end) {
        const auto mid = static_cast<std::size_t>(begin + (end - begin) / 2);
        const double theta = g[mid];
        std::vector<std::size_t> left, right;
        for (auto i : rows) (ds.value(i, f) <= theta ? left : right).push_back(i);
        nodes.push_back(TreeNode::split(f, theta, 0, 0));
        const auto l = build(left, f, a, mid);
        const auto r = build(right, f, mid + 1, b);
        nodes[static_cast<std::size_t>(index)].left = l;
        nodes[static_cast<std::size_t>(index)].right = r;
        return index;
      }
      ++f;
      a = 0;
      b = f < ds.dim() ? grid[f].size() : 0;
    }
    throw InternalError("grid tree ran out of features on an impure cell");
  }
};

}  // namespace

DecisionTree grid_tree(const LabeledDataset& ds, double r) {
  if (ds.empty()) throw DomainError("grid tree needs at least one example");
  const auto grid = grid_thresholds(ds, r);

  // Cell of x along feature j: number of grid thresholds strictly below x_j.
  std::map<std::vector<std::size_t>, std::size_t> first_in_cell;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::vector<std::size_t> cell(ds.dim());
    for (std::size_t j = 0; j < ds.dim(); ++j) {
      cell[j] = static_cast<std::size_t>(
          std::lower_bound(grid[j].begin(), grid[j].end(), ds.value(i, j)) - grid[j].begin());
    }
    auto [it, inserted] = first_in_cell.emplace(std::move(cell), i);
    if (!inserted && ds.label(it->second) != ds.label(i)) {
      throw ConstructionError("examples " + std::to_string(it->second) + " and " +
                              std::to_string(i) +
                              " have opposite labels in one grid cell; data is not r-separated");
    }
  }

  std::vector<std::size_t> rows(ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  GridBuilder builder{ds, grid, {}};
  builder.build(rows, 0, 0, ds.dim() ? grid[0].size() : 0);
  return DecisionTree(ds.dim(), std::move(builder.nodes));
}

double grid_tree_depth_bound(std::size_t d, double r, SampleDomain domain) {
  const double rr = std::min(r, 1.0);
  return (domain == SampleDomain::kSymmetric ? 6.0 : 3.0) * static_cast<double>(d) / rr;
}

LabeledDataset gen_parity(std::size_t d) {
  if (d < 1 || d > 20) throw DomainError("parity dimension must lie in [1, 20]");
  const std::size_t n = std::size_t{1} << d;
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(n * d);
  for (std::size_t code = 0; code < n; ++code) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const bool bit = (code >> (d - 1 - j)) & 1U;
      features.push_back(bit ? 1.0 : -1.0);
      ones += bit;
    }
    labels.push_back(ones % 2 == 1 ? 1 : -1);
  }
  return LabeledDataset(d, std::move(features), std::move(labels), {},
                        std::vector<Interval>(d, Interval{-1.0, 1.0}));
}

LabeledDataset gen_staircase(std::size_t n, double eps) {
  if (n == 0 || n % 4 != 0) throw DomainError("staircase size must be a positive multiple of 4");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
  std::vector<double> features;
  std::vector<int> labels;
  for (std::size_t g = 1; g <= n / 4; ++g) {
    const double i = static_cast<double>(g);
    features.insert(features.end(), {i, -i + eps, i + eps, -i, i, -i - eps, i - eps, -i});
    labels.insert(labels.end(), {1, 1, -1, -1});
  }
  return LabeledDataset(2, std::move(features), std::move(labels));
}

ParityBoundCheck parity_size_bound_check(const DecisionTree& tree, std::size_t d) {
  if (tree.num_features() != d) {
    throw DomainError("tree has " + std::to_string(tree.num_features()) +
                      " features, parity check needs " + std::to_string(d));
  }
  const LabeledDataset parity = gen_parity(d);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < parity.size(); ++i) {
    correct += tree.predict(parity.row(i)) == parity.label(i);
  }
  ParityBoundCheck out;
  out.size = tree.size();
  out.leaves = out.size + 1;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(parity.size());
  // Only leaves reached by a single point can beat a coin flip.
  // accuracy - 1/2 <= leaves / 2^(d+1)  <=>  2 * correct - 2^d <= leaves
  out.bound_ok = static_cast<long long>(2 * correct) - static_cast<long long>(parity.size()) <=
                 static_cast<long long>(out.leaves);
  return out;
}

}  // namespace robscore
