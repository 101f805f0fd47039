#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"

namespace robscore {

/// Every condition has a positive weight (the bias may be anything). Such
/// scores are monotone: x <= x' coordinatewise implies f(x) <= f(x').
bool is_monotone_structure(const RiskScore& model);

/// Perturbation options. With `clip`, adversarial points are confined to
/// [0, 1]^d; by default they range over all of R^d.
struct ErOptions {
  bool clip = false;
};

/// Exact l-inf distance to the nearest point with a different prediction (an
/// infimum; +inf if the prediction never changes). For f(x) = +1 the worst
/// direction is x - eps * 1 and a condition is lost once eps > x_i - theta;
/// for f(x) = -1 it is x + eps * 1 and a condition is gained once
/// eps >= theta - x_i. Throws ContractError for non-monotone scores.
double er_risk_score(const RiskScore& model, std::span<const double> x, const ErOptions& options = {});

/// Exact l-inf distance from x to the nearest leaf box with the other label.
double er_tree(const DecisionTree& tree, std::span<const double> x, const ErOptions& options = {});

double empirical_robustness_at(const Model& model, std::span<const double> x,
                               const ErOptions& options = {});

struct RobustnessReport {
  std::vector<std::size_t> indices;  // test rows evaluated, ascending
  std::vector<double> er;            // per evaluated row
  double mean_er = 0.0;
  double radius = 0.0;
  double astuteness = 0.0;        // over the whole test set: correct and ER > radius
  std::size_t correct = 0;        // correctly predicted test rows
  bool non_flippable = false;     // every sampled ER is +inf
};

/// Samples min(k, #correct) correctly predicted test rows without
/// replacement and computes their exact ER. Throws EvalError if no test row
/// is predicted correctly.
RobustnessReport empirical_robustness(const Model& model, const LabeledDataset& test, std::size_t k,
                                      std::uint64_t seed, double radius = 0.0,
                                      const ErOptions& options = {});

/// Fraction of correctly classified noisy training rows whose original point
/// (x' + tau * y * 1) is not certified at radius tau. Throws ContractError for
/// non-monotone scores.
double certified_radius_check(const RiskScore& model, const LabeledDataset& noisy_train, double tau);

/// Same check with the original points supplied directly (row-aligned with
/// `noisy_train`), avoiding the reconstruction rounding.
double certified_radius_check(const RiskScore& model, const LabeledDataset& original_train,
                              const LabeledDataset& noisy_train, double tau);

/// Absolute slack on the certified-radius comparison, covering the rounding
/// of x - tau * y and of the breakpoints x_i - theta.
inline constexpr double kCertifiedSlack = 1e-12;

/// Draws `pairs` random pairs x <= x' in [0, 1]^d and counts those with
/// f(x) > f(x'). Half the pairs move x' by a random step in every coordinate,
/// half only across one condition threshold.
std::size_t monotone_pair_violations(const RiskScore& model, std::size_t d, std::size_t pairs,
                                     std::uint64_t seed);

}  // namespace robscore
