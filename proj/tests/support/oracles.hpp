#pragma once
// Slow, direct reference implementations used as test oracles. None of these
// call into the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"
#include "robscore/random.hpp"

namespace oracle {

struct StumpChoice {
  std::size_t feature = 0;
  double theta = 0.0;
  double accuracy = 0.0;
};

inline double stump_accuracy(const robscore::LabeledDataset& ds, std::span<const double> mu,
                             std::size_t j, double theta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int pred = ds.value(i, j) >= theta ? 1 : -1;
    if (pred == ds.label(i)) acc += mu[i];
  }
  return acc;
}

/// Candidate thresholds of one feature, ascending.
inline std::vector<double> candidate_thresholds(const robscore::LabeledDataset& ds, std::size_t j) {
  std::set<double> values;
  for (std::size_t i = 0; i < ds.size(); ++i) values.insert(ds.value(i, j));
  std::vector<double> v(values.begin(), values.end());
  std::vector<double> out{v.front() - 1.0};
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    double mid = v[k] + (v[k + 1] - v[k]) / 2.0;
    if (!(mid > v[k])) mid = v[k + 1];
    out.push_back(mid);
  }
  out.push_back(v.back() + 1.0);
  return out;
}

/// Exhaustive stump search; ties within 1e-12 go to the first (feature, theta).
inline StumpChoice brute_best_stump(const robscore::LabeledDataset& ds, std::span<const double> mu) {
  std::vector<StumpChoice> all;
  double best = -1.0;
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    for (double theta : candidate_thresholds(ds, j)) {
      const double acc = stump_accuracy(ds, mu, j, theta);
      all.push_back({j, theta, acc});
      best = std::max(best, acc);
    }
  }
  for (const auto& c : all) {
    if (c.accuracy >= best - 1e-12) return c;
  }
  return {};
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// P(a walk of m steps from s, up with probability 1/2 + gamma, ends <= 0).
inline double walk_tail(int m, int s, double gamma) {
  const double p = 0.5 + gamma, q = 0.5 - gamma;
  double total = 0.0;
  for (int k = 0; k <= m; ++k) {
    if (s + k - (m - k) <= 0) total += binomial(m, k) * std::pow(p, k) * std::pow(q, m - k);
  }
  return total;
}

/// Binomial pmf at the pivotal count: the BBM weight at round t, margin s.
inline double pivotal_pmf(int T, int t, int s, double gamma) {
  const int m = T - t;
  const int diff = m - s + 1;
  const int k = diff >= 0 ? diff / 2 : -((-diff + 1) / 2);
  if (k < 0 || k > m) return 0.0;
  return binomial(m, k) * std::pow(0.5 + gamma, k) * std::pow(0.5 - gamma, m - k);
}

/// Minimum vertex cover size of a graph on `v` vertices by subset enumeration.
inline std::size_t brute_vertex_cover(std::size_t v,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::size_t best = v;
  for (std::uint32_t mask = 0; mask < (1U << v); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    bool ok = true;
    for (auto [a, b] : edges) {
      if (!((mask >> a) & 1U) && !((mask >> b) & 1U)) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

inline double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// Smallest multiple of `step` at which some corner x +- eps of the l-inf
/// ball changes the prediction; +inf if none up to `limit`.
template <class M>
double corner_attack(const M& model, std::span<const double> x, double step, double limit) {
  const int base = model.predict(x);
  const std::size_t d = x.size();
  std::vector<double> p(d);
  const auto steps = static_cast<long>(std::ceil(limit / step));
  for (long k = 0; k <= steps; ++k) {
    const double eps = static_cast<double>(k) * step;
    for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
      for (std::size_t j = 0; j < d; ++j) p[j] = x[j] + (((mask >> j) & 1U) ? eps : -eps);
      if (model.predict(p) != base) return eps;
    }
  }
  return std::numeric_limits<double>::infinity();
}

/// True if the closed ball of radius eps around x holds a point the tree
/// labels differently. Within the ball the prediction only changes at split
/// thresholds, so the ball edges plus every threshold inside the ball give a
/// representative of every cell.
inline bool tree_ball_flips(const robscore::DecisionTree& tree, std::span<const double> x, double eps) {
  const int base = tree.predict(x);
  const std::size_t d = x.size();
  std::vector<std::vector<double>> cand(d);
  for (std::size_t j = 0; j < d; ++j) cand[j] = {x[j] - eps, x[j], x[j] + eps};
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf) continue;
    const double v = x[node.feature];
    if (node.theta >= v - eps && node.theta <= v + eps) cand[node.feature].push_back(node.theta);
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> p(d);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) p[j] = cand[j][idx[j]];
    if (tree.predict(p) != base) return true;
    std::size_t j = 0;
    while (j < d && ++idx[j] == cand[j].size()) idx[j++] = 0;
    if (j == d) return false;
  }
}

/// Smallest multiple of `step` (up to `limit`) whose ball flips the tree,
/// found by bisection since flipping is monotone in the radius.
inline double tree_grid_attack(const robscore::DecisionTree& tree, std::span<const double> x,
                               double step, double limit) {
  auto hi = static_cast<long>(std::ceil(limit / step));
  if (!tree_ball_flips(tree, x, static_cast<double>(hi) * step)) {
    return std::numeric_limits<double>::infinity();
  }
  long lo = -1;  // lo never flips, hi always flips
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (tree_ball_flips(tree, x, static_cast<double>(mid) * step)) hi = mid;
    else lo = mid;
  }
  return static_cast<double>(hi) * step;
}

/// min_i y_i w.x_i.
inline double margin_of(const robscore::LabeledDataset& ds, const std::vector<double>& w) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ds.dim(); ++j) s += w[j] * ds.value(i, j);
    m = std::min(m, ds.label(i) * s);
  }
  return m;
}

/// Best margin over the lattice {w : |w|_1 = 1, w_j in Z / N}, then a finer
/// lattice (N * refine) in a window around the coarse winner.
inline double grid_l1_margin(const robscore::LabeledDataset& ds, int N, int refine) {
  const std::size_t d = ds.dim();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<long> best_k(d, 0);
  long best_scale = N;

  auto search = [&](long scale, const std::vector<long>& centre, long radius) {
    std::vector<long> k(d, 0);
    std::vector<double> w(d);
    // Enumerate integer vectors with sum |k_j| == scale near `centre`.
    std::vector<long> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::max(-scale, centre[j] - radius);
      hi[j] = std::min(scale, centre[j] + radius);
    }
    auto rec = [&](auto&& self, std::size_t j, long used) -> void {
      if (j + 1 == d) {
        const long rest = scale - used;
        for (long last : {rest, -rest}) {
          if (last < lo[j] || last > hi[j]) continue;
          k[j] = last;
          for (std::size_t t = 0; t < d; ++t) w[t] = static_cast<double>(k[t]) / static_cast<double>(scale);
          const double m = margin_of(ds, w);
          if (m > best) {
            best = m;
            best_k = k;
            best_scale = scale;
          }
          if (rest == 0) break;
        }
        return;
      }
      for (long v = lo[j]; v <= hi[j]; ++v) {
        if (used + std::abs(v) > scale) continue;
        k[j] = v;
        self(self, j + 1, used + std::abs(v));
      }
    };
    rec(rec, 0, 0);
  };

  search(N, std::vector<long>(d, 0), N);
  if (refine > 1 && d > 1) {
    std::vector<long> centre(d);
    for (std::size_t j = 0; j < d; ++j) centre[j] = best_k[j] * refine;
    search(static_cast<long>(N) * refine, centre, 2L * refine);
  }
  (void)best_scale;
  return best;
}

/// Best training accuracy of any rule sign(w.x + b) on 2-D data, by
/// enumerating directions finely and every threshold between projections.
inline double brute_linear_accuracy_2d(const robscore::LabeledDataset& ds, int directions) {
  double best = 0.0;
  const double pi = std::acos(-1.0);
  for (int a = 0; a < directions; ++a) {
    const double ang = 2.0 * pi * a / directions;
    const double w0 = std::cos(ang), w1 = std::sin(ang);
    std::vector<double> proj;
    for (std::size_t i = 0; i < ds.size(); ++i) proj.push_back(w0 * ds.value(i, 0) + w1 * ds.value(i, 1));
    std::vector<double> cuts = proj;
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> thresholds{cuts.front() - 1.0};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) thresholds.push_back((cuts[k] + cuts[k + 1]) / 2);
    thresholds.push_back(cuts.back() + 1.0);
    for (double t : thresholds) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < ds.size(); ++i) correct += ((proj[i] > t) ? 1 : -1) == ds.label(i);
      best = std::max(best, static_cast<double>(correct) / static_cast<double>(ds.size()));
    }
  }
  return best;
}

/// Rejection sampling: each candidate (uniform in [lo, hi]^d, random label)
/// is kept only if it lies at l-inf distance >= 2r from every opposite-label
/// point kept so far.
inline robscore::LabeledDataset r_separated_dataset(std::size_t n, std::size_t d, double r,
                                                    std::uint64_t seed, double lo = 0.0,
                                                    double hi = 1.0) {
  robscore::Rng rng(seed);
  std::vector<double> f;
  std::vector<int> y;
  std::vector<double> x(d);
  std::size_t attempts = 0;
  while (y.size() < n && attempts < 200 * n) {
    ++attempts;
    for (auto& v : x) v = robscore::uniform(rng, lo, hi);
    const int label = robscore::uniform01(rng) < 0.5 ? 1 : -1;
    bool ok = true;
    for (std::size_t i = 0; i < y.size() && ok; ++i) {
      if (y[i] == label) continue;
      ok = linf(std::span<const double>(f.data() + i * d, d), x) >= 2.0 * r;
    }
    if (!ok) continue;
    f.insert(f.end(), x.begin(), x.end());
    y.push_back(label);
  }
  return robscore::LabeledDataset(d, std::move(f), std::move(y), {},
                                  std::vector<robscore::Interval>(d, robscore::Interval{lo, hi}));
}

/// Random dataset in [0, 1]^d; values on a coarse grid when `coarse` so ties occur.
inline robscore::LabeledDataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed,
                                               bool coarse = false) {
  robscore::Rng rng(seed);
  std::vector<double> f(n * d);
  std::vector<int> y(n);
  for (auto& v : f) {
    v = robscore::uniform01(rng);
    if (coarse) v = std::floor(v * 5.0) / 4.0 > 1.0 ? 1.0 : std::floor(v * 5.0) / 4.0;
  }
  for (auto& l : y) l = robscore::uniform01(rng) < 0.5 ? 1 : -1;
  return robscore::LabeledDataset(d, std::move(f), std::move(y));
}

inline std::vector<double> random_distribution(std::size_t n, robscore::Rng& rng) {
  std::vector<double> mu(n);
  double total = 0.0;
  for (auto& m : mu) {
    m = robscore::exponential(rng);
    total += m;
  }
  for (auto& m : mu) m /= total;
  return mu;
}

}  // namespace oracle
