#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/matching.hpp"

namespace robscore {

/// Positives on the left, negatives on the right; edge iff the l-inf
/// distance is strictly below 2r.
struct ConflictGraph {
  BipartiteGraph graph;
  std::vector<std::size_t> positives;  // left vertex -> dataset row
  std::vector<std::size_t> negatives;  // right vertex -> dataset row
};

ConflictGraph conflict_graph(const LabeledDataset& ds, double r);

struct SeparatenessResult {
  double separateness = 1.0;
  std::vector<std::size_t> removed;  // sorted dataset rows
};

/// Exact: the removal set is a minimum vertex cover of the conflict graph.
SeparatenessResult r_separateness(const LabeledDataset& ds, double r);

/// Smallest l-inf distance between opposite-label examples. Throws
/// DomainError if one class is missing.
double min_opposite_distance(const LabeledDataset& ds);

/// C = 1e-10, 1e-8, ..., 1e10.
std::vector<double> default_c_grid();

struct HingeOptions {
  std::size_t sweeps = 200;  // full coordinate cycles per C
  double tolerance = 1e-10;  // stop early once a cycle improves less than this (relative)
  // Widths of the smoothed-hinge warm-up stages run before the exact hinge.
  std::vector<double> smoothing{1.0, 0.1, 0.01, 0.001};
};

struct LinearModel {
  std::vector<double> w;
  double b = 0.0;

  int predict(std::span<const double> x) const;
};

/// Minimizes (1/C) |w|_1 + sum_i max(0, 1 - y_i (w.x_i + b)) by cyclic exact
/// coordinate minimization (w_0, ..., w_{d-1}, then b) starting from zero.
/// Plain coordinate descent can stall at a kink of the hinge, so the exact
/// stage is warm-started from a sequence of smoothed-hinge stages.
LinearModel fit_l1_hinge(const LabeledDataset& ds, double C, const HingeOptions& options = {});

/// 1 - lowest training error of fit_l1_hinge over the grid; removed = rows
/// misclassified by the best fit (first C wins ties). An upper bound on the
/// true minimum removal.
SeparatenessResult linear_separateness(const LabeledDataset& ds,
                                       const std::vector<double>& c_grid = default_c_grid(),
                                       const HingeOptions& options = {});

struct MarginResult {
  double gamma = 0.0;
  std::vector<double> w;  // |w|_1 == 1
};

/// max gamma s.t. y_i (w.x_i) >= gamma, |w|_1 = 1 (no bias), solved as a
/// linear program in w = p - m. Throws SolverError when the optimum is not
/// positive (the data is not homogeneously separable) or the solver fails.
MarginResult max_l1_margin(const LabeledDataset& ds);

struct SeparationReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t binary_features = 0;
  double positive_portion = 0.0;
  double r = 0.0;
  double r_separateness = 1.0;
  std::vector<std::size_t> removed_indices_r;
  double two_r = std::numeric_limits<double>::infinity();  // after removal
  double linear_separateness = 1.0;
  std::vector<std::size_t> removed_indices_linear;
  double gamma = 0.0;      // after removal; 0 when not homogeneously separable
  bool gamma_ok = false;   // false if the margin program reported non-separable data
  std::vector<double> w_star;
};

SeparationReport measure_separation(const LabeledDataset& ds, double r, const std::string& name,
                                    const std::vector<double>& c_grid = default_c_grid(),
                                    const HingeOptions& options = {});

/// Header plus one row: dataset, n, d, binary, positive, r, r_sep, two_r,
/// lin_sep, gamma.
std::string separation_csv(const SeparationReport& report);

}  // namespace robscore
