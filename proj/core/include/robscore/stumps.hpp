#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"

namespace robscore {

struct StumpSearchResult {
  Stump stump;
  double weighted_accuracy = 0.0;
  double advantage = 0.0;  // weighted_accuracy - 1/2
};

/// Offset of the two constant stumps from the data range: theta = min - 1
/// predicts +1 everywhere, theta = max + 1 predicts -1 everywhere.
inline constexpr double kConstantStumpOffset = 1.0;

/// Accuracies closer than this are treated as tied.
inline constexpr double kStumpTieTolerance = 1e-12;

/// Exact weighted-accuracy maximizer over the one-sided stumps
/// "+1 iff x[j] >= theta". Sorts every feature once at construction so that
/// repeated searches under changing weights (boosting) cost O(d * n) each.
///
/// Candidate thresholds per feature are the midpoints of consecutive distinct
/// values plus the two constant stumps. Among candidates whose accuracy is
/// within kStumpTieTolerance of the maximum, the one with the smallest feature
/// index, then smallest theta, wins.
class StumpSearcher {
 public:
  explicit StumpSearcher(const LabeledDataset& ds);

  StumpSearchResult best(std::span<const double> mu) const;

  const LabeledDataset& data() const { return *ds_; }

 private:
  const LabeledDataset* ds_;
  std::vector<std::vector<std::uint32_t>> order_;  // per feature, indices by value
};

/// One-shot search; throws SearchError on an empty dataset.
StumpSearchResult best_stump(const WeightedDataset& wds);

/// Sum of mu over examples the stump labels correctly.
double weighted_accuracy(const Stump& stump, const LabeledDataset& ds, std::span<const double> mu);

/// Midpoint of a < b that is strictly greater than a.
double split_midpoint(double a, double b);

enum class SampleDomain { kSymmetric, kUnit };  // [-1, 1]^d or [0, 1]^d

struct LinearDataset {
  LabeledDataset data;
  std::vector<double> w;  // w >= 0, sum(w) == 1
};

/// Draws w uniformly from the probability simplex and points uniformly from
/// [-1, 1]^d, keeping those with |w.x| >= gamma, labelled sign(w.x). For
/// kUnit the accepted points are mapped by x -> (x + 1) / 2, so the margin
/// holds for the centred point 2x - 1 (a homogeneous separator with w >= 0
/// cannot label points of the positive orthant negative).
///
/// Throws GenError when fewer than 10 of 100000 consecutive draws are
/// accepted.
LinearDataset gen_linear_dataset(std::size_t d, double gamma, std::size_t n, std::uint64_t seed,
                                 SampleDomain domain = SampleDomain::kSymmetric);

}  // namespace robscore
