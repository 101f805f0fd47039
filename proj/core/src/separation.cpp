#include "robscore/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robscore/csv.hpp"
#include "robscore/errors.hpp"
#include "robscore/simplex.hpp"

namespace robscore {

namespace {

// l-inf distance, abandoning the scan once it reaches `cap`.
double linf(std::span<const double> a, std::span<const double> b, double cap) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    m = std::max(m, std::abs(a[j] - b[j]));
    if (m >= cap) break;
  }
  return m;
}

// Feature with the widest spread; sweeping on it prunes the most pairs.
std::size_t sweep_feature(const LabeledDataset& ds) {
  std::size_t best = 0;
  double widest = -1.0;
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    double lo = ds.value(0, j), hi = lo;
    for (std::size_t i = 1; i < ds.size(); ++i) {
      lo = std::min(lo, ds.value(i, j));
      hi = std::max(hi, ds.value(i, j));
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      best = j;
    }
  }
  return best;
}

struct ClassSplit {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives_sorted;  // by sweep key
  std::vector<double> keys;                   // sweep key of negatives_sorted
  std::size_t feature = 0;
};

ClassSplit split_classes(const LabeledDataset& ds) {
  ClassSplit cs;
  if (ds.empty()) return cs;
  cs.feature = ds.dim() ? sweep_feature(ds) : 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (ds.label(i) == 1 ? cs.positives : cs.negatives_sorted).push_back(i);
  }
  if (ds.dim()) {
    std::stable_sort(cs.negatives_sorted.begin(), cs.negatives_sorted.end(),
                     [&](std::size_t a, std::size_t b) {
                       return ds.value(a, cs.feature) < ds.value(b, cs.feature);
                     });
  }
  for (auto q : cs.negatives_sorted) cs.keys.push_back(ds.dim() ? ds.value(q, cs.feature) : 0.0);
  return cs;
}

}  // namespace

ConflictGraph conflict_graph(const LabeledDataset& ds, double r) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  const ClassSplit cs = split_classes(ds);
  ConflictGraph out;
  out.positives = cs.positives;
  out.negatives.assign(cs.negatives_sorted.begin(), cs.negatives_sorted.end());
  std::sort(out.negatives.begin(), out.negatives.end());
  out.graph = BipartiteGraph(out.positives.size(), out.negatives.size());

  std::vector<std::size_t> right_of(ds.size(), 0);
  for (std::size_t k = 0; k < out.negatives.size(); ++k) right_of[out.negatives[k]] = k;

  const double limit = 2.0 * r;
  for (std::size_t l = 0; l < out.positives.size(); ++l) {
    const std::size_t p = out.positives[l];
    const double key = ds.dim() ? ds.value(p, cs.feature) : 0.0;
    auto k = static_cast<std::size_t>(
        std::lower_bound(cs.keys.begin(), cs.keys.end(), key - limit) - cs.keys.begin());
    auto& adj = out.graph.adjacency[l];
    for (; k < cs.keys.size() && cs.keys[k] - key < limit; ++k) {
      if (key - cs.keys[k] >= limit) continue;
      const std::size_t q = cs.negatives_sorted[k];
      if (linf(ds.row(p), ds.row(q), limit) < limit) {
        adj.push_back(static_cast<std::uint32_t>(right_of[q]));
      }
    }
    std::sort(adj.begin(), adj.end());
  }
  return out;
}

SeparatenessResult r_separateness(const LabeledDataset& ds, double r) {
  const ConflictGraph cg = conflict_graph(ds, r);
  const VertexCover cover = minimum_vertex_cover(cg.graph);
  SeparatenessResult out;
  for (std::size_t l = 0; l < cg.positives.size(); ++l) {
    if (cover.left[l]) out.removed.push_back(cg.positives[l]);
  }
  for (std::size_t k = 0; k < cg.negatives.size(); ++k) {
    if (cover.right[k]) out.removed.push_back(cg.negatives[k]);
  }
  std::sort(out.removed.begin(), out.removed.end());
  out.separateness =
      ds.empty() ? 1.0
                 : 1.0 - static_cast<double>(out.removed.size()) / static_cast<double>(ds.size());
  return out;
}

double min_opposite_distance(const LabeledDataset& ds) {
  const ClassSplit cs = split_classes(ds);
  if (cs.positives.empty() || cs.negatives_sorted.empty()) {
    throw DomainError("opposite-label distance needs examples of both labels");
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto p : cs.positives) {
    const double key = ds.dim() ? ds.value(p, cs.feature) : 0.0;
    const auto start = static_cast<std::size_t>(
        std::lower_bound(cs.keys.begin(), cs.keys.end(), key) - cs.keys.begin());
    for (std::size_t k = start; k < cs.keys.size() && cs.keys[k] - key < best; ++k) {
      best = std::min(best, linf(ds.row(p), ds.row(cs.negatives_sorted[k]), best));
    }
    for (std::size_t k = start; k-- > 0 && key - cs.keys[k] < best;) {
      best = std::min(best, linf(ds.row(p), ds.row(cs.negatives_sorted[k]), best));
    }
    if (best == 0.0) break;
  }
  return best;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int e = -10; e <= 10; e += 2) grid.push_back(std::pow(10.0, e));
  return grid;
}

int LinearModel::predict(std::span<const double> x) const {
  double s = b;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s > 0.0 ? 1 : -1;
}

namespace {

struct Breakpoint {
  double at;
  double slope_increase;
};

// argmin_z  lambda |z| + sum_i max(0, c_i - a_i z), the first point where the
// right derivative becomes nonnegative.
double minimize_piecewise(const std::vector<double>& a, const std::vector<double>& c,
                          double lambda, std::vector<Breakpoint>& scratch) {
  scratch.clear();
  double slope = -lambda;
  if (lambda > 0.0) scratch.push_back({0.0, 2.0 * lambda});
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    if (a[i] > 0.0) slope -= a[i];
    scratch.push_back({c[i] / a[i], std::abs(a[i])});
  }
  if (scratch.empty()) return 0.0;
  std::sort(scratch.begin(), scratch.end(),
            [](const Breakpoint& u, const Breakpoint& v) { return u.at < v.at; });
  for (const auto& bp : scratch) {
    slope += bp.slope_increase;
    if (slope >= -1e-12) return bp.at;
  }
  return scratch.back().at;
}

// Same problem with the hinge replaced by its quadratic smoothing of width
// delta: h(z) = z^2 / (2 delta) on [0, delta], z - delta / 2 above. The
// derivative in z is piecewise linear, so the root is found by one scan.
double minimize_smoothed(const std::vector<double>& a, const std::vector<double>& c,
                         double lambda, double delta, std::vector<Breakpoint>& scratch) {
  scratch.clear();
  double value = -lambda;  // derivative at -inf
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    const double q = a[i] * a[i] / delta;
    const double zero = c[i] / a[i], full = (c[i] - delta) / a[i];
    if (a[i] > 0.0) value -= a[i];
    scratch.push_back({std::min(zero, full), q});
    scratch.push_back({std::max(zero, full), -q});
  }
  if (scratch.empty()) return 0.0;
  std::sort(scratch.begin(), scratch.end(),
            [](const Breakpoint& u, const Breakpoint& v) { return u.at < v.at; });
  double slope = 0.0, at = scratch.front().at;
  bool jumped = lambda <= 0.0;
  for (const auto& bp : scratch) {
    if (!jumped && bp.at > 0.0) {
      const double at_zero = value + slope * (0.0 - at);
      if (at_zero >= 0.0) return slope > 0.0 ? at - value / slope : 0.0;
      if (at_zero + 2.0 * lambda >= 0.0) return 0.0;
      value = at_zero + 2.0 * lambda;
      at = 0.0;
      jumped = true;
    }
    const double next = value + slope * (bp.at - at);
    if (next >= 0.0) return slope > 0.0 ? at - value / slope : at;
    value = next;
    at = bp.at;
    slope += bp.slope_increase;
    if (slope < 0.0) slope = 0.0;
  }
  if (!jumped) {
    const double at_zero = value + slope * (0.0 - at);
    if (at_zero >= 0.0) return slope > 0.0 ? at - value / slope : 0.0;
    if (at_zero + 2.0 * lambda >= 0.0) return 0.0;
    value = at_zero + 2.0 * lambda;
    at = 0.0;
  }
  return slope > 0.0 ? at - value / slope : at;
}

}  // namespace

LinearModel fit_l1_hinge(const LabeledDataset& ds, double C, const HingeOptions& options) {
  if (!(C > 0.0) || !std::isfinite(C)) throw SolverError("C must be positive and finite");
  const std::size_t n = ds.size(), d = ds.dim();
  const double lambda = 1.0 / C;
  LinearModel model{std::vector<double>(d, 0.0), 0.0};
  std::vector<double> margin(n, 0.0);  // w.x_i + b
  std::vector<double> a(n), c(n);
  std::vector<Breakpoint> scratch;

  auto objective = [&] {
    double f = 0.0;
    for (double wj : model.w) f += lambda * std::abs(wj);
    for (std::size_t i = 0; i < n; ++i) f += std::max(0.0, 1.0 - ds.label(i) * margin[i]);
    return f;
  };

  auto run_stage = [&](double delta) {
    double previous = objective();
    for (std::size_t sweep = 0; sweep < options.sweeps; ++sweep) {
      for (std::size_t j = 0; j <= d; ++j) {
        const bool bias = j == d;
        const double current = bias ? model.b : model.w[j];
        for (std::size_t i = 0; i < n; ++i) {
          const double xij = bias ? 1.0 : ds.value(i, j);
          const double y = ds.label(i);
          a[i] = y * xij;
          c[i] = 1.0 - y * (margin[i] - xij * current);
        }
        const double reg = bias ? 0.0 : lambda;
        const double next = delta > 0.0 ? minimize_smoothed(a, c, reg, delta, scratch)
                                        : minimize_piecewise(a, c, reg, scratch);
        if (next == current) continue;
        const double step = next - current;
        for (std::size_t i = 0; i < n; ++i) margin[i] += step * (bias ? 1.0 : ds.value(i, j));
        (bias ? model.b : model.w[j]) = next;
      }
      const double f = objective();
      if (!std::isfinite(f)) throw SolverError("hinge objective became non-finite");
      if (std::abs(previous - f) <= options.tolerance * std::max(1.0, std::abs(previous))) break;
      previous = f;
    }
  };
  for (double delta : options.smoothing) run_stage(delta);
  run_stage(0.0);
  return model;
}

SeparatenessResult linear_separateness(const LabeledDataset& ds, const std::vector<double>& c_grid,
                                       const HingeOptions& options) {
  if (c_grid.empty()) throw SolverError("C grid is empty");
  SeparatenessResult best;
  best.separateness = -1.0;
  for (double C : c_grid) {
    const LinearModel model = fit_l1_hinge(ds, C, options);
    std::vector<std::size_t> wrong;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (model.predict(ds.row(i)) != ds.label(i)) wrong.push_back(i);
    }
    const double sep =
        ds.empty() ? 1.0
                   : 1.0 - static_cast<double>(wrong.size()) / static_cast<double>(ds.size());
    if (sep > best.separateness) {
      best.separateness = sep;
      best.removed = std::move(wrong);
    }
  }
  return best;
}

namespace {

// Margin program restricted to the rows in `active`.
LpSolution solve_margin_lp(const LabeledDataset& ds, const std::vector<std::size_t>& active) {
  const std::size_t d = ds.dim();
  // Variables: p_0..p_{d-1}, m_0..m_{d-1}, gamma+, gamma-.
  LinearProgram lp;
  lp.num_vars = 2 * d + 2;
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[2 * d] = 1.0;
  lp.objective[2 * d + 1] = -1.0;
  for (auto i : active) {
    std::vector<double> row(lp.num_vars, 0.0);
    const double y = ds.label(i);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = -y * ds.value(i, j);
      row[d + j] = y * ds.value(i, j);
    }
    row[2 * d] = 1.0;
    row[2 * d + 1] = -1.0;
    lp.add_constraint(std::move(row), ConstraintSense::kLessEqual, 0.0);
  }
  std::vector<double> norm(lp.num_vars, 0.0);
  std::fill(norm.begin(), norm.begin() + static_cast<std::ptrdiff_t>(2 * d), 1.0);
  lp.add_constraint(std::move(norm), ConstraintSense::kEqual, 1.0);
  return solve_lp(lp);
}

}  // namespace

MarginResult max_l1_margin(const LabeledDataset& ds) {
  if (ds.empty() || ds.dim() == 0) throw SolverError("margin program needs examples and features");
  const std::size_t n = ds.size(), d = ds.dim();
  constexpr std::size_t kInitial = 64, kAddPerRound = 64;
  constexpr double kViolation = 1e-10;

  // Constraint generation: solve on a working set, then add the most violated
  // examples until every example satisfies its margin constraint.
  std::vector<bool> in_set(n, false);
  std::vector<std::size_t> active;
  const std::size_t start = std::min(n, kInitial);
  for (std::size_t k = 0; k < start; ++k) {
    const std::size_t i = k * n / start;
    if (!in_set[i]) {
      in_set[i] = true;
      active.push_back(i);
    }
  }

  while (true) {
    const LpSolution sol = solve_margin_lp(ds, active);
    if (sol.status != LpStatus::kOptimal) throw SolverError("margin program did not reach an optimum");
    MarginResult out;
    out.gamma = sol.objective;
    out.w.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.w[j] = sol.x[j] - sol.x[d + j];

    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_set[i]) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += out.w[j] * ds.value(i, j);
      const double slack = ds.label(i) * s - out.gamma;
      if (slack < -kViolation) violated.emplace_back(slack, i);
    }
    if (violated.empty()) {
      if (!(out.gamma > 1e-12)) {
        throw SolverError("data is not linearly separable through the origin (max margin " +
                          csv::format_shortest(out.gamma) + ")");
      }
      return out;
    }
    std::sort(violated.begin(), violated.end());
    for (std::size_t k = 0; k < violated.size() && k < kAddPerRound; ++k) {
      in_set[violated[k].second] = true;
      active.push_back(violated[k].second);
    }
  }
}

SeparationReport measure_separation(const LabeledDataset& ds, double r, const std::string& name,
                                    const std::vector<double>& c_grid,
                                    const HingeOptions& options) {
  SeparationReport rep;
  rep.dataset = name;
  rep.n = ds.size();
  rep.d = ds.dim();
  rep.binary_features = count_binary_features(ds);
  rep.positive_portion =
      ds.empty() ? 0.0 : static_cast<double>(ds.count_positive()) / static_cast<double>(ds.size());
  rep.r = r;

  auto rsep = r_separateness(ds, r);
  rep.r_separateness = rsep.separateness;
  rep.removed_indices_r = std::move(rsep.removed);
  const LabeledDataset kept_r = ds.without(rep.removed_indices_r);
  const std::size_t pos_r = kept_r.count_positive();
  if (pos_r > 0 && pos_r < kept_r.size()) rep.two_r = min_opposite_distance(kept_r);

  auto lsep = linear_separateness(ds, c_grid, options);
  rep.linear_separateness = lsep.separateness;
  rep.removed_indices_linear = std::move(lsep.removed);
  const LabeledDataset kept_lin = ds.without(rep.removed_indices_linear);
  try {
    auto margin = max_l1_margin(kept_lin);
    rep.gamma = margin.gamma;
    rep.w_star = std::move(margin.w);
    rep.gamma_ok = true;
  } catch (const SolverError&) {
    rep.gamma = 0.0;
    rep.gamma_ok = false;
  }
  return rep;
}

std::string separation_csv(const SeparationReport& rep) {
  using csv::format_shortest;
  std::string out =
      "dataset,n,d,binary_features,positive_portion,r,r_separateness,removed_r,two_r,"
      "linear_separateness,removed_linear,gamma,gamma_ok\n";
  out += csv::join({rep.dataset, std::to_string(rep.n), std::to_string(rep.d),
                    std::to_string(rep.binary_features), format_shortest(rep.positive_portion),
                    format_shortest(rep.r), format_shortest(rep.r_separateness),
                    std::to_string(rep.removed_indices_r.size()), format_shortest(rep.two_r),
                    format_shortest(rep.linear_separateness),
                    std::to_string(rep.removed_indices_linear.size()),
                    format_shortest(rep.gamma), rep.gamma_ok ? "true" : "false"});
  out += '\n';
  return out;
}

}  // namespace robscore
