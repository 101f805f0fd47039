#pragma once

#include <cstddef>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"

namespace robscore {

struct TreeTrainConfig {
  std::size_t max_depth = 5;
  std::size_t min_leaf = 1;
  std::size_t max_internal_nodes = 0;  // 0: unlimited
};

/// Greedy entropy-gain tree with midpoint thresholds ("x <= theta" left).
/// A node is split while it is impure, above max_depth and some threshold
/// leaves at least min_leaf examples on each side, even when the best gain is
/// zero. Ties in gain go to the lower feature index, then the smaller theta;
/// leaves take the majority label with ties going to -1.
///
/// With a node cap the frontier is expanded best-gain first; without one the
/// result is the usual fully grown tree. Nodes are numbered in preorder.
DecisionTree train_cart(const LabeledDataset& ds, const TreeTrainConfig& config);

/// Binary entropy (bits) of a node with `pos` positives out of `total`.
double binary_entropy(double pos, double total);

}  // namespace robscore
