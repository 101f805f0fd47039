#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "robscore/errors.hpp"
#include "robscore/harness.hpp"
#include "robscore/stumps.hpp"

using namespace robscore;

namespace {

// 1-D data alternating label every 10 points: 40 runs need more than 32 leaves.
LabeledDataset alternating_runs() {
  std::vector<double> f;
  std::vector<int> y;
  for (int i = 0; i < 400; ++i) {
    f.push_back((i + 0.5) / 400.0);
    y.push_back((i / 10) % 2 ? 1 : -1);
  }
  return LabeledDataset(1, f, y);
}

ExperimentConfig small_bbm() {
  ExperimentConfig cfg;
  cfg.grid = {3, 6};
  cfg.repeats = 2;
  cfg.folds = 3;
  cfg.k = 20;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST(Harness, ParseAlgorithm) {
  EXPECT_EQ(parse_algorithm("bbm_rs"), Algorithm::kBbmRs);
  EXPECT_EQ(parse_algorithm("bbm-rs"), Algorithm::kBbmRs);
  EXPECT_EQ(parse_algorithm("cart"), Algorithm::kCart);
  EXPECT_THROW(parse_algorithm("svm"), DomainError);
  EXPECT_EQ(to_string(Algorithm::kCart), "cart");
}

TEST(Harness, ValidateConfig) {
  EXPECT_NO_THROW(validate(ExperimentConfig{}));
  auto bad = [](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    return cfg;
  };
  EXPECT_THROW(validate(bad([](auto& c) { c.grid.clear(); })), DomainError);
  EXPECT_THROW(validate(bad([](auto& c) { c.repeats = 0; })), DomainError);
  EXPECT_THROW(validate(bad([](auto& c) { c.folds = 1; })), DomainError);
  EXPECT_THROW(validate(bad([](auto& c) { c.k = 0; })), DomainError);
  EXPECT_THROW(validate(bad([](auto& c) { c.tau = 1.0; })), DomainError);
  EXPECT_THROW(validate(bad([](auto& c) { c.tau = -0.1; })), DomainError);
}

TEST(Harness, Summaries) {
  const auto s = summarize({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.stderr_, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(summarize({4.0}).stderr_, 0.0);
  EXPECT_EQ(summarize({0.7, 0.7, 0.7}).stderr_, 0.0);
}

TEST(Folds, SizesDifferByAtMostOne) {
  for (std::size_t n : {10u, 103u, 999u}) {
    for (std::size_t k : {2u, 5u, 10u}) {
      const auto folds = fold_assignment(n, k, n + k);
      std::vector<std::size_t> count(k, 0);
      for (auto f : folds) ++count[f];
      const auto [lo, hi] = std::minmax_element(count.begin(), count.end());
      EXPECT_LE(*hi - *lo, 1u);
    }
  }
  EXPECT_EQ(fold_assignment(50, 5, 1), fold_assignment(50, 5, 1));
  EXPECT_THROW(fold_assignment(3, 5, 0), DomainError);
  EXPECT_THROW(fold_assignment(10, 1, 0), DomainError);
}

TEST(CrossValidation, SingletonGrid) {
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::kCart;
  cfg.grid = {4};
  const auto cv = cross_validate(oracle::random_dataset(60, 2, 1), cfg, 0);
  EXPECT_EQ(cv.chosen, 4u);
  EXPECT_EQ(cv.mean_accuracy.size(), 1u);
}

TEST(CrossValidation, DeeperTreesWinOnAlternatingRuns) {
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::kCart;
  cfg.grid = {10, 5};
  const auto cv = cross_validate(alternating_runs(), cfg, 3);
  EXPECT_EQ(cv.grid, (std::vector<std::size_t>{5, 10}));
  EXPECT_EQ(cv.chosen, 10u);
  EXPECT_GT(cv.mean_accuracy[1], cv.mean_accuracy[0]);
}

TEST(CrossValidation, TiesGoToSmallerValue) {
  const LabeledDataset ds(1, {0.1, 0.2, 0.3, 0.7, 0.8, 0.9}, {-1, -1, -1, 1, 1, 1});
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::kCart;
  cfg.grid = {3, 1, 2, 2};
  cfg.folds = 3;
  const auto cv = cross_validate(ds, cfg, 0);
  EXPECT_EQ(cv.grid, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(cv.chosen, 1u);
}

TEST(CrossValidation, WarnsOnSingleClassFolds) {
  const LabeledDataset ds(1, {0.1, 0.2, 0.3, 0.4, 0.9, 0.95}, {-1, -1, -1, -1, -1, 1});
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::kCart;
  cfg.grid = {1};
  cfg.folds = 3;
  EXPECT_FALSE(cross_validate(ds, cfg, 0).warnings.empty());
}

TEST(Experiment, CartOnPureData) {
  std::vector<double> f;
  for (int i = 0; i < 30; ++i) f.push_back(i / 29.0);
  const LabeledDataset ds(1, f, std::vector<int>(30, 1));
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::kCart;
  cfg.grid = {2};
  cfg.repeats = 3;
  cfg.folds = 2;
  const auto rep = run_experiment(ds, cfg);
  ASSERT_EQ(rep.repeats.size(), 3u);
  EXPECT_EQ(rep.ic.mean, 0.0);
  EXPECT_EQ(rep.accuracy.mean, 1.0);
  EXPECT_EQ(rep.accuracy.stderr_, 0.0);
  EXPECT_EQ(rep.repeats[0].train_size, 20u);
  EXPECT_EQ(rep.repeats[0].test_size, 10u);
  EXPECT_TRUE(std::isinf(rep.repeats[0].mean_er));
}

TEST(Experiment, BbmRsIsDeterministicAndCertified) {
  const auto ds = gen_linear_dataset(4, 0.1, 150, 2).data;
  const auto cfg = small_bbm();
  const auto a = run_experiment(ds, cfg);
  const auto b = run_experiment(ds, cfg);
  EXPECT_EQ(eval_report_csv(a), eval_report_csv(b));
  EXPECT_EQ(a.normalization, "whole_data");
  for (const auto& r : a.repeats) {
    EXPECT_EQ(r.certified_violation, 0.0);
    EXPECT_GE(r.ic_with_bias, r.ic);
    EXPECT_LE(r.er_samples, cfg.k);
  }
}

TEST(Experiment, StrictNormalization) {
  auto cfg = small_bbm();
  cfg.strict_no_leak = true;
  cfg.repeats = 1;
  const auto rep = run_experiment(gen_linear_dataset(3, 0.1, 90, 5).data, cfg);
  EXPECT_EQ(rep.normalization, "train_only");
}

TEST(Experiment, TooFewRows) {
  const LabeledDataset ds(1, {0.5}, {1});
  EXPECT_THROW(run_experiment(ds, ExperimentConfig{}), SplitError);
}

TEST(Experiment, CsvLayout) {
  const auto rep = run_experiment(gen_linear_dataset(3, 0.1, 90, 5).data, small_bbm());
  const auto text = eval_report_csv(rep);
  EXPECT_EQ(text.rfind("algorithm,normalization,tau,repeat,", 0), 0u);
  EXPECT_NE(text.find("\n\n"), std::string::npos);
}

TEST(TauSweep, SingleRow) {
  const auto rows = tau_sweep(gen_linear_dataset(3, 0.1, 90, 5).data, {0.05}, small_bbm());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].tau, 0.05);
  EXPECT_EQ(rows[0].er_at_least_tau, rows[0].er.mean >= 0.05);
  EXPECT_EQ(tau_sweep_csv(rows).rfind("tau,ic_mean,", 0), 0u);
}

TEST(IcCurve, PrefixesAndBest) {
  TrainReport tr;
  tr.rounds = {{1, {0, 0.5}, 0.6, 0.1}, {2, {0, 0.5}, 0.6, 0.1}, {3, {1, 0.3}, 0.6, 0.1}};
  tr.rounds_run = 3;
  const LabeledDataset test(2, {0.6, 0.4, 0.2, 0.9, 0.6, 0.1}, {1, -1, -1});
  const auto curve = ic_accuracy_curve(tr, test);
  ASSERT_EQ(curve.prefixes.size(), 3u);
  EXPECT_EQ(curve.prefixes[0].ic, 1u);
  EXPECT_EQ(curve.prefixes[1].ic, 1u);
  EXPECT_EQ(curve.prefixes[2].ic, 2u);
  // Every prefix reduces to x0 >= 0.5.
  EXPECT_DOUBLE_EQ(curve.prefixes[0].accuracy, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(curve.prefixes[2].accuracy, 2.0 / 3.0);
  ASSERT_EQ(curve.best.size(), 2u);
  EXPECT_EQ(curve.best[0].prefix, 1u);
  EXPECT_EQ(curve.best[1].ic, 2u);
  EXPECT_EQ(ic_curve_csv(curve).rfind("table,prefix,ic,accuracy", 0), 0u);
}

TEST(Manifest, RenderAndFingerprint) {
  RunManifest m;
  m.command = "eval";
  add_config(m, ExperimentConfig{});
  const auto ds = gen_linear_dataset(3, 0.1, 20, 1).data;
  m.add("dataset_hash", dataset_fingerprint(ds));
  const auto text = m.render();
  EXPECT_EQ(text.rfind("schema_version: 1\ntool: robscore ", 0), 0u);
  EXPECT_NE(text.find("command: eval\n"), std::string::npos);
  EXPECT_NE(text.find("normalization: whole_data\n"), std::string::npos);
  EXPECT_NE(text.find("grid: 5,10,15,20,25,30\n"), std::string::npos);

  const auto fp = dataset_fingerprint(ds);
  EXPECT_EQ(fp.size(), 16u);
  EXPECT_EQ(fp, dataset_fingerprint(gen_linear_dataset(3, 0.1, 20, 1).data));
  EXPECT_NE(fp, dataset_fingerprint(gen_linear_dataset(3, 0.1, 20, 2).data));
}

TEST(Comparison, BaselineRowsArePresent) {
  const auto rep = run_experiment(gen_linear_dataset(3, 0.1, 90, 5).data, small_bbm());
  const auto text = comparison_csv({{"linear", rep}});
  EXPECT_NE(text.find("linear,bbm_rs"), std::string::npos);
  EXPECT_NE(text.find("robdt"), std::string::npos);
  EXPECT_NE(text.find("lcpa"), std::string::npos);
}
