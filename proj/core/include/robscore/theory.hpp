#pragma once

// Constructive counterparts of the separation-vs-tree-size results: the grid
// tree for r-separated data, the parity dataset and its size lower bound, and
// the unbounded staircase dataset. These live on [-1, 1]^d (or unbounded R^2
// for the staircase), separately from the [0, 1]^d experiment pipeline.

#include <cstddef>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"
#include "robscore/stumps.hpp"

namespace robscore {

/// Threshold grid {j * r} covering each feature's domain, with r clamped to
/// at most 1. Tree paths test at most sum_j |grid_j| (feature, threshold) pairs.
std::vector<std::vector<double>> grid_thresholds(const LabeledDataset& ds, double r);

/// Zero-training-error tree whose splits all come from grid_thresholds.
/// Each branch keeps only thresholds that separate the examples reaching it,
/// bisecting one feature's grid before moving to the next; pure nodes become
/// leaves. Throws ConstructionError naming an opposite-label pair that shares
/// a grid cell (the data is not r-separated).
DecisionTree grid_tree(const LabeledDataset& ds, double r);

/// Depth guarantee for grid_tree: 6d/r on [-1, 1]^d, 3d/r on [0, 1]^d.
double grid_tree_depth_bound(std::size_t d, double r, SampleDomain domain);

/// All 2^d vertices of {-1, 1}^d (coordinate 0 most significant), labelled +1
/// iff an odd number of coordinates equal +1. Throws DomainError unless
/// 1 <= d <= 20.
LabeledDataset gen_parity(std::size_t d);

/// n/4 groups of four points around (i, -i); linearly separable by
/// w = (1/2, 1/2) with margin eps/2. Requires n % 4 == 0 and 0 < eps < 1/2.
LabeledDataset gen_staircase(std::size_t n, double eps);

struct ParityBoundCheck {
  double accuracy = 0.0;
  std::size_t size = 0;    // internal nodes
  std::size_t leaves = 0;  // size + 1
  bool bound_ok = false;   // accuracy - 1/2 <= leaves / 2^(d+1), exactly
};

/// Evaluates `tree` on the full d-dimensional parity dataset. Throws
/// DomainError if the tree was built for a different dimension.
ParityBoundCheck parity_size_bound_check(const DecisionTree& tree, std::size_t d);

}  // namespace robscore
