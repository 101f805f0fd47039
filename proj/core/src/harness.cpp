#include "robscore/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>

#include "robscore/cart.hpp"
#include "robscore/csv.hpp"
#include "robscore/errors.hpp"
#include "robscore/random.hpp"
#include "robscore/robustness.hpp"

#ifndef ROBSCORE_VERSION
#define ROBSCORE_VERSION "0.0.0"
#endif

namespace robscore {

std::string_view library_version() { return ROBSCORE_VERSION; }

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kBbmRs ? "bbm_rs" : "cart";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "bbm_rs" || name == "bbm-rs") return Algorithm::kBbmRs;
  if (name == "cart") return Algorithm::kCart;
  throw DomainError("unknown algorithm '" + std::string(name) + "' (expected bbm_rs or cart)");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.grid.empty()) throw DomainError("hyperparameter grid is empty");
  if (std::find(cfg.grid.begin(), cfg.grid.end(), std::size_t{0}) != cfg.grid.end()) {
    throw DomainError("hyperparameter grid values must be at least 1");
  }
  if (cfg.repeats < 1) throw DomainError("repeats must be at least 1");
  if (cfg.folds < 2) throw DomainError("folds must be at least 2");
  if (cfg.k < 1) throw DomainError("k must be at least 1");
  if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) throw DomainError("tau must lie in [0, 1)");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw DomainError("train fraction must lie in (0, 1)");
  }
}

namespace {

struct Fit {
  Model model;
  TrainReport report;  // BBM-RS only
};

Fit fit(const LabeledDataset& train, const ExperimentConfig& cfg, std::size_t h) {
  if (cfg.algorithm == Algorithm::kCart) {
    TreeTrainConfig tc;
    tc.max_depth = h;
    return {train_cart(train, tc), {}};
  }
  BbmRsConfig bc;
  bc.rounds = h;
  bc.tau = cfg.tau;
  bc.gamma_bbm = cfg.gamma_bbm;
  bc.seed = cfg.seed;
  TrainReport rep = train_bbm_rs(train, bc);
  Model m = rep.model;
  return {std::move(m), std::move(rep)};
}

bool single_class(const LabeledDataset& ds) {
  const std::size_t pos = ds.count_positive();
  return pos == 0 || pos == ds.size();
}

}  // namespace

Model fit_model(const LabeledDataset& train, const ExperimentConfig& cfg, std::size_t h) {
  return fit(train, cfg, h).model;
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) {
    throw DomainError("need 2 <= folds <= n, got folds=" + std::to_string(folds) +
                      " n=" + std::to_string(n));
  }
  Rng rng(seed);
  const auto perm = permutation(n, rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t k = 0; k < n; ++k) fold[perm[k]] = k % folds;
  return fold;
}

CvResult cross_validate(const LabeledDataset& train, const ExperimentConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  CvResult out;
  out.grid = cfg.grid;
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());
  const auto fold = fold_assignment(train.size(), cfg.folds, seed);

  std::vector<LabeledDataset> fit_parts, held_parts;
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<std::size_t> in, out_rows;
    for (std::size_t i = 0; i < train.size(); ++i) (fold[i] == f ? out_rows : in).push_back(i);
    fit_parts.push_back(train.subset(in));
    held_parts.push_back(train.subset(out_rows));
    if (single_class(held_parts.back())) {
      out.warnings.push_back("validation fold " + std::to_string(f) + " contains a single class");
    }
  }

  double best = -1.0;
  for (auto h : out.grid) {
    double total = 0.0;
    for (std::size_t f = 0; f < cfg.folds; ++f) {
      total += accuracy(fit(fit_parts[f], cfg, h).model, held_parts[f]);
    }
    const double mean = total / static_cast<double>(cfg.folds);
    out.mean_accuracy.push_back(mean);
    if (mean > best) {
      best = mean;
      out.chosen = h;
    }
  }
  return out;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  const bool all_same = std::all_of(values.begin(), values.end(),
                                    [&](double v) { return v == values.front(); });
  if (all_same) {
    s.mean = values.front();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (!std::isfinite(s.mean)) {
    s.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

EvalReport run_experiment(const LabeledDataset& raw, const ExperimentConfig& cfg) {
  validate(cfg);
  if (raw.size() < 2) throw SplitError("experiment needs at least two examples");
  EvalReport rep;
  rep.algorithm = cfg.algorithm;
  rep.tau = cfg.tau;
  rep.normalization = cfg.strict_no_leak ? "train_only" : "whole_data";
  const LabeledDataset whole = cfg.strict_no_leak ? raw : normalize(raw).data;
  const ErOptions er_opts{cfg.clip};

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    try {
      RepeatResult row;
      row.repeat = r;
      const auto idx = split_indices(whole.size(), cfg.train_fraction, derive_seed(cfg.seed, 3 * r));
      LabeledDataset train = whole.subset(idx.train);
      LabeledDataset test = whole.subset(idx.test);
      if (cfg.strict_no_leak) {
        auto norm = normalize(train);
        test = apply_normalization(test, norm.ranges);
        train = std::move(norm.data);
      }
      row.train_size = train.size();
      row.test_size = test.size();

      const CvResult cv = cross_validate(train, cfg, derive_seed(cfg.seed, 3 * r + 1));
      row.chosen = cv.chosen;
      row.warnings = cv.warnings;
      const Fit final_fit = fit(train, cfg, cv.chosen);
      row.ic = interpretation_complexity(final_fit.model);
      if (const auto* rs = std::get_if<RiskScore>(&final_fit.model)) {
        row.ic_with_bias = interpretation_complexity_with_bias(*rs);
        row.rounds_run = final_fit.report.rounds_run;
        row.stop_reason = to_string(final_fit.report.stop_reason);
        row.certified_violation =
            certified_radius_check(*rs, train, inject_noise(train, cfg.tau), cfg.tau);
      } else {
        row.ic_with_bias = row.ic;
      }
      row.accuracy = accuracy(final_fit.model, test);
      const auto rob = empirical_robustness(final_fit.model, test, cfg.k,
                                            derive_seed(cfg.seed, 3 * r + 2), cfg.tau, er_opts);
      row.mean_er = rob.mean_er;
      row.astuteness = rob.astuteness;
      row.er_samples = rob.indices.size();
      rep.repeats.push_back(std::move(row));
    } catch (const Error& e) {
      std::throw_with_nested(EvalError("repeat " + std::to_string(r) + ": " + e.what()));
    }
  }

  auto collect = [&](auto field) {
    std::vector<double> v;
    for (const auto& row : rep.repeats) v.push_back(static_cast<double>(field(row)));
    return summarize(v);
  };
  rep.ic = collect([](const RepeatResult& x) { return x.ic; });
  rep.ic_with_bias = collect([](const RepeatResult& x) { return x.ic_with_bias; });
  rep.accuracy = collect([](const RepeatResult& x) { return x.accuracy; });
  rep.er = collect([](const RepeatResult& x) { return x.mean_er; });
  rep.astuteness = collect([](const RepeatResult& x) { return x.astuteness; });
  return rep;
}

std::vector<TauRow> tau_sweep(const LabeledDataset& ds, const std::vector<double>& taus,
                              ExperimentConfig cfg) {
  if (taus.empty()) throw DomainError("tau list is empty");
  cfg.algorithm = Algorithm::kBbmRs;
  std::vector<TauRow> rows;
  for (double tau : taus) {
    cfg.tau = tau;
    const EvalReport rep = run_experiment(ds, cfg);
    TauRow row;
    row.tau = tau;
    row.ic = rep.ic;
    row.accuracy = rep.accuracy;
    row.er = rep.er;
    row.er_at_least_tau = rep.er.mean >= tau;
    rows.push_back(row);
  }
  return rows;
}

IcCurve ic_accuracy_curve(const TrainReport& report, const LabeledDataset& test) {
  IcCurve curve;
  std::vector<Stump> stumps;
  std::map<std::size_t, CurvePoint> best;
  for (const auto& round : report.rounds) {
    stumps.push_back(round.stump);
    const RiskScore model = RiskScore::from_rounds(stumps);
    CurvePoint p{stumps.size(), interpretation_complexity(model), accuracy(model, test)};
    curve.prefixes.push_back(p);
    auto [it, inserted] = best.emplace(p.ic, p);
    if (!inserted && p.accuracy > it->second.accuracy) it->second = p;
  }
  for (const auto& [ic, p] : best) curve.best.push_back(p);
  return curve;
}

namespace {

using csv::format_shortest;

std::string summary_cells(const Summary& s) {
  return format_shortest(s.mean) + "," + format_shortest(s.stderr_);
}

}  // namespace

std::string eval_report_csv(const EvalReport& rep) {
  std::string out =
      "algorithm,normalization,tau,repeat,chosen,train_size,test_size,ic,ic_with_bias,accuracy,"
      "mean_er,astuteness,er_samples,rounds_run,stop_reason,certified_violation\n";
  const std::string prefix =
      to_string(rep.algorithm) + "," + rep.normalization + "," + format_shortest(rep.tau) + ",";
  for (const auto& r : rep.repeats) {
    out += prefix + csv::join({std::to_string(r.repeat), std::to_string(r.chosen),
                               std::to_string(r.train_size), std::to_string(r.test_size),
                               std::to_string(r.ic), std::to_string(r.ic_with_bias),
                               format_shortest(r.accuracy), format_shortest(r.mean_er),
                               format_shortest(r.astuteness), std::to_string(r.er_samples),
                               std::to_string(r.rounds_run), r.stop_reason,
                               format_shortest(r.certified_violation)});
    out += '\n';
  }
  out += "\nalgorithm,normalization,tau,ic_mean,ic_stderr,ic_with_bias_mean,ic_with_bias_stderr,"
         "accuracy_mean,accuracy_stderr,er_mean,er_stderr,astuteness_mean,astuteness_stderr\n";
  out += prefix + summary_cells(rep.ic) + "," + summary_cells(rep.ic_with_bias) + "," +
         summary_cells(rep.accuracy) + "," + summary_cells(rep.er) + "," +
         summary_cells(rep.astuteness) + "\n";
  return out;
}

std::string tau_sweep_csv(const std::vector<TauRow>& rows) {
  std::string out =
      "tau,ic_mean,ic_stderr,accuracy_mean,accuracy_stderr,er_mean,er_stderr,er_at_least_tau\n";
  for (const auto& r : rows) {
    out += format_shortest(r.tau) + "," + summary_cells(r.ic) + "," + summary_cells(r.accuracy) +
           "," + summary_cells(r.er) + "," + (r.er_at_least_tau ? "true" : "false") + "\n";
  }
  return out;
}

std::string ic_curve_csv(const IcCurve& curve) {
  std::string out = "table,prefix,ic,accuracy\n";
  for (const auto& p : curve.prefixes) {
    out += "prefix," + std::to_string(p.prefix) + "," + std::to_string(p.ic) + "," +
           format_shortest(p.accuracy) + "\n";
  }
  for (const auto& p : curve.best) {
    out += "best," + std::to_string(p.prefix) + "," + std::to_string(p.ic) + "," +
           format_shortest(p.accuracy) + "\n";
  }
  return out;
}

std::string cv_csv(const CvResult& cv) {
  std::string out = "value,mean_accuracy,chosen\n";
  for (std::size_t k = 0; k < cv.grid.size(); ++k) {
    out += std::to_string(cv.grid[k]) + "," + format_shortest(cv.mean_accuracy[k]) + "," +
           (cv.grid[k] == cv.chosen ? "true" : "false") + "\n";
  }
  return out;
}

std::string comparison_csv(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::string out =
      "dataset,algorithm,ic_mean,ic_stderr,accuracy_mean,accuracy_stderr,er_mean,er_stderr\n";
  std::vector<std::string> datasets;
  for (const auto& [name, rep] : rows) {
    if (std::find(datasets.begin(), datasets.end(), name) == datasets.end()) datasets.push_back(name);
  }
  for (const auto& name : datasets) {
    for (const auto& [n, rep] : rows) {
      if (n != name) continue;
      out += csv::escape(name) + "," + to_string(rep.algorithm) + "," + summary_cells(rep.ic) +
             "," + summary_cells(rep.accuracy) + "," + summary_cells(rep.er) + "\n";
    }
    out += csv::escape(name) + ",robdt,,,,,,\n";
    out += csv::escape(name) + ",lcpa,,,,,,\n";
  }
  return out;
}

std::string dataset_fingerprint(const LabeledDataset& ds) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_csv(ds))));
  return buf;
}

std::string RunManifest::render() const {
  std::string out = "schema_version: 1\n";
  out += "tool: robscore " + std::string(library_version()) + "\n";
  out += "command: " + command + "\n";
  for (const auto& [k, v] : entries) out += k + ": " + v + "\n";
  return out;
}

void add_config(RunManifest& m, const ExperimentConfig& cfg) {
  std::string grid;
  for (auto h : cfg.grid) grid += (grid.empty() ? "" : ",") + std::to_string(h);
  m.add("algorithm", to_string(cfg.algorithm));
  m.add("grid", grid);
  m.add("tau", format_shortest(cfg.tau));
  m.add("gamma_bbm", format_shortest(cfg.gamma_bbm));
  m.add("repeats", std::to_string(cfg.repeats));
  m.add("folds", std::to_string(cfg.folds));
  m.add("seed", std::to_string(cfg.seed));
  m.add("k", std::to_string(cfg.k));
  m.add("train_fraction", format_shortest(cfg.train_fraction));
  m.add("normalization", cfg.strict_no_leak ? "train_only" : "whole_data");
  m.add("clip", cfg.clip ? "true" : "false");
}

}  // namespace robscore
