#include "robscore/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "robscore/errors.hpp"
#include "robscore/random.hpp"

namespace robscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_monotone(const RiskScore& model) {
  if (!is_monotone_structure(model)) {
    throw ContractError("risk score has a non-positive condition weight; it is not monotone");
  }
}

double er_boxes(const std::vector<LeafBox>& boxes, int label, std::span<const double> x,
                const ErOptions& options) {
  double best = kInf;
  for (const auto& box : boxes) {
    if (box.label == label) continue;
    double dist = 0.0;
    bool empty = false;
    for (std::size_t j = 0; j < x.size() && dist < best; ++j) {
      double lo = box.lo[j], hi = box.hi[j];
      if (options.clip) {
        if (lo >= 1.0 || hi < 0.0) {
          empty = true;
          break;
        }
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
      }
      if (x[j] < lo) dist = std::max(dist, lo - x[j]);
      else if (x[j] > hi) dist = std::max(dist, x[j] - hi);
    }
    if (!empty) best = std::min(best, dist);
  }
  return best;
}

}  // namespace

bool is_monotone_structure(const RiskScore& model) {
  return std::all_of(model.conditions().begin(), model.conditions().end(),
                     [](const Condition& c) { return c.weight > 0; });
}

double er_risk_score(const RiskScore& model, std::span<const double> x, const ErOptions& options) {
  require_monotone(model);
  std::int64_t score = model.doubled_score(x);
  std::vector<std::pair<double, std::int64_t>> events;
  if (score > 0) {
    // Moving down: satisfied conditions drop out once eps > x_i - theta.
    for (const auto& c : model.conditions()) {
      if (!c.holds(x)) continue;
      if (options.clip && c.theta <= 0.0) continue;
      events.emplace_back(x[c.feature] - c.theta, c.weight);
    }
    std::sort(events.begin(), events.end());
    for (const auto& [at, w] : events) {
      score -= 2 * w;
      if (score <= 0) return at;
    }
  } else {
    // Moving up: unsatisfied conditions switch on once eps >= theta - x_i.
    for (const auto& c : model.conditions()) {
      if (c.holds(x)) continue;
      if (options.clip && c.theta > 1.0) continue;
      events.emplace_back(c.theta - x[c.feature], c.weight);
    }
    std::sort(events.begin(), events.end());
    for (const auto& [at, w] : events) {
      score += 2 * w;
      if (score > 0) return at;
    }
  }
  return kInf;
}

double er_tree(const DecisionTree& tree, std::span<const double> x, const ErOptions& options) {
  return er_boxes(tree.leaf_boxes(), tree.predict(x), x, options);
}

double empirical_robustness_at(const Model& model, std::span<const double> x,
                               const ErOptions& options) {
  if (const auto* rs = std::get_if<RiskScore>(&model)) return er_risk_score(*rs, x, options);
  return er_tree(std::get<DecisionTree>(model), x, options);
}

RobustnessReport empirical_robustness(const Model& model, const LabeledDataset& test, std::size_t k,
                                      std::uint64_t seed, double radius,
                                      const ErOptions& options) {
  if (k == 0) throw EvalError("k must be at least 1");
  if (const auto* rs = std::get_if<RiskScore>(&model)) require_monotone(*rs);

  const auto* tree = std::get_if<DecisionTree>(&model);
  std::vector<LeafBox> boxes;
  if (tree) boxes = tree->leaf_boxes();
  auto er_of = [&](std::size_t i) {
    if (tree) return er_boxes(boxes, tree->predict(test.row(i)), test.row(i), options);
    return er_risk_score(std::get<RiskScore>(model), test.row(i), options);
  };

  RobustnessReport rep;
  rep.radius = radius;
  std::vector<std::size_t> correct;
  std::size_t astute = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (predict(model, test.row(i)) != test.label(i)) continue;
    correct.push_back(i);
    if (er_of(i) > radius) ++astute;
  }
  if (correct.empty()) throw EvalError("no test example is predicted correctly");
  rep.correct = correct.size();
  rep.astuteness = static_cast<double>(astute) / static_cast<double>(test.size());

  Rng rng(seed);
  const auto perm = permutation(correct.size(), rng);
  const std::size_t take = std::min(k, correct.size());
  for (std::size_t s = 0; s < take; ++s) rep.indices.push_back(correct[perm[s]]);
  std::sort(rep.indices.begin(), rep.indices.end());

  double sum = 0.0;
  rep.non_flippable = true;
  for (auto i : rep.indices) {
    const double e = er_of(i);
    rep.er.push_back(e);
    sum += e;
    if (std::isfinite(e)) rep.non_flippable = false;
  }
  rep.mean_er = sum / static_cast<double>(rep.indices.size());
  return rep;
}

double certified_radius_check(const RiskScore& model, const LabeledDataset& original_train,
                              const LabeledDataset& noisy_train, double tau) {
  require_monotone(model);
  if (original_train.size() != noisy_train.size() || original_train.dim() != noisy_train.dim()) {
    throw ContractError("original and noisy training sets are not row-aligned");
  }
  if (tau <= 0.0) return 0.0;
  std::size_t correct = 0, violating = 0;
  for (std::size_t i = 0; i < noisy_train.size(); ++i) {
    if (model.predict(noisy_train.row(i)) != noisy_train.label(i)) continue;
    ++correct;
    if (er_risk_score(model, original_train.row(i)) < tau - kCertifiedSlack) ++violating;
  }
  return correct ? static_cast<double>(violating) / static_cast<double>(correct) : 0.0;
}

double certified_radius_check(const RiskScore& model, const LabeledDataset& noisy_train, double tau) {
  require_monotone(model);
  std::vector<double> features(noisy_train.features().begin(), noisy_train.features().end());
  const std::size_t d = noisy_train.dim();
  for (std::size_t i = 0; i < noisy_train.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) features[i * d + j] += tau * noisy_train.label(i);
  }
  const LabeledDataset original = noisy_train.with_features(std::move(features), noisy_train.domain());
  return certified_radius_check(model, original, noisy_train, tau);
}

std::size_t monotone_pair_violations(const RiskScore& model, std::size_t d, std::size_t pairs,
                                     std::uint64_t seed) {
  Rng rng(seed);
  const auto& conds = model.conditions();
  std::vector<double> x(d), y(d);
  std::size_t violations = 0;
  for (std::size_t k = 0; k < pairs; ++k) {
    for (std::size_t j = 0; j < d; ++j) x[j] = uniform01(rng);
    y = x;
    if (k % 2 == 0 || conds.empty()) {
      for (std::size_t j = 0; j < d; ++j) y[j] = x[j] + uniform01(rng) * (1.0 - x[j]);
    } else {
      const auto& c = conds[uniform_index(rng, conds.size())];
      if (c.feature < d) y[c.feature] = std::max(x[c.feature], c.theta);
    }
    if (model.predict(x) > model.predict(y)) ++violations;
  }
  return violations;
}

}  // namespace robscore
