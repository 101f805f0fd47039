#include "robscore/stumps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robscore/errors.hpp"
#include "robscore/random.hpp"

namespace robscore {

double split_midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return m > a ? m : b;
}

StumpSearcher::StumpSearcher(const LabeledDataset& ds) : ds_(&ds), order_(ds.dim()) {
  const std::size_t n = ds.size();
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    auto& ord = order_[j];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), std::uint32_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      return ds.value(a, j) < ds.value(b, j);
    });
  }
}

StumpSearchResult StumpSearcher::best(std::span<const double> mu) const {
  const LabeledDataset& ds = *ds_;
  const std::size_t n = ds.size();
  if (n == 0 || ds.dim() == 0) throw SearchError("stump search needs a nonempty dataset");
  if (mu.size() != n) throw SearchError("weight vector does not match dataset size");

  double positive_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.label(i) == 1) positive_mass += mu[i];
  }

  // Candidates are visited in (feature, theta) order; remember all of them so
  // the tie rule can be applied against the global maximum.
  std::vector<Stump> candidates;
  std::vector<double> scores;
  candidates.reserve(ds.dim() * (n + 1));
  scores.reserve(ds.dim() * (n + 1));

  for (std::size_t j = 0; j < ds.dim(); ++j) {
    const auto& ord = order_[j];
    const double lo = ds.value(ord.front(), j);
    const double hi = ds.value(ord.back(), j);
    // theta below the minimum: every example predicted +1.
    double acc = positive_mass;
    candidates.push_back({j, lo - kConstantStumpOffset});
    scores.push_back(acc);
    std::size_t k = 0;
    while (k < n) {
      const double v = ds.value(ord[k], j);
      // Move the whole group of equal values to the "-1" side.
      while (k < n && ds.value(ord[k], j) == v) {
        const std::uint32_t i = ord[k];
        if (mu[i] != 0.0) acc += ds.label(i) == 1 ? -mu[i] : mu[i];
        ++k;
      }
      const double theta = k < n ? split_midpoint(v, ds.value(ord[k], j)) : hi + kConstantStumpOffset;
      candidates.push_back({j, theta});
      scores.push_back(acc);
    }
  }

  const double top = *std::max_element(scores.begin(), scores.end());
  std::size_t pick = 0;
  while (scores[pick] < top - kStumpTieTolerance) ++pick;

  StumpSearchResult result;
  result.stump = candidates[pick];
  result.weighted_accuracy = weighted_accuracy(result.stump, ds, mu);
  result.advantage = result.weighted_accuracy - 0.5;
  return result;
}

StumpSearchResult best_stump(const WeightedDataset& wds) {
  if (wds.base().empty()) throw SearchError("stump search needs a nonempty dataset");
  return StumpSearcher(wds.base()).best(wds.mu());
}

double weighted_accuracy(const Stump& stump, const LabeledDataset& ds, std::span<const double> mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (stump.predict(ds.row(i)) == ds.label(i)) acc += mu[i];
  }
  return acc;
}

LinearDataset gen_linear_dataset(std::size_t d, double gamma, std::size_t n, std::uint64_t seed,
                                 SampleDomain domain) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw GenError("gamma must lie in (0, 1)");
  if (n == 0) throw GenError("n must be at least 1");
  if (d == 0) throw GenError("d must be at least 1");

  Rng rng(seed);
  std::vector<double> w(d);
  double total = 0.0;
  for (auto& v : w) {
    v = exponential(rng);
    total += v;
  }
  for (auto& v : w) v /= total;

  constexpr std::size_t kWindow = 100000;
  constexpr std::size_t kMinAcceptedPerWindow = 10;

  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(n * d);
  std::vector<double> x(d);
  std::size_t trials_in_window = 0, accepted_in_window = 0;
  while (labels.size() < n) {
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = uniform(rng, -1.0, 1.0);
      dot += w[j] * x[j];
    }
    ++trials_in_window;
    if (std::abs(dot) >= gamma) {
      ++accepted_in_window;
      for (double v : x) features.push_back(domain == SampleDomain::kUnit ? (v + 1.0) / 2.0 : v);
      labels.push_back(dot > 0.0 ? 1 : -1);
    }
    if (trials_in_window == kWindow) {
      if (accepted_in_window < kMinAcceptedPerWindow) {
        throw GenError("acceptance rate below 1e-4: gamma too large for d");
      }
      trials_in_window = accepted_in_window = 0;
    }
  }

  const Interval box = domain == SampleDomain::kUnit ? Interval{0.0, 1.0} : Interval{-1.0, 1.0};
  return {LabeledDataset(d, std::move(features), std::move(labels), {},
                         std::vector<Interval>(d, box)),
          std::move(w)};
}

}  // namespace robscore
