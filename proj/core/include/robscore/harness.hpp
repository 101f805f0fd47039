#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robscore/bbm_rs.hpp"
#include "robscore/dataset.hpp"
#include "robscore/models.hpp"

namespace robscore {

std::string_view library_version();

enum class Algorithm { kBbmRs, kCart };

std::string to_string(Algorithm algorithm);
/// Accepts "bbm_rs" and "cart"; throws DomainError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kBbmRs;
  std::vector<std::size_t> grid{5, 10, 15, 20, 25, 30};  // T or max_depth
  double tau = 0.05;
  double gamma_bbm = 0.01;
  std::size_t repeats = 10;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t k = 100;          // ER sample size per repeat
  double train_fraction = 2.0 / 3.0;
  bool strict_no_leak = false;  // fit normalization on the training split only
  bool clip = false;            // confine adversarial points to [0, 1]^d
};

/// Throws DomainError on an empty grid, repeats < 1, folds < 2, k < 1 or a
/// tau outside [0, 1).
void validate(const ExperimentConfig& cfg);

/// Trains the configured algorithm with hyperparameter `h` (rounds or depth).
Model fit_model(const LabeledDataset& train, const ExperimentConfig& cfg, std::size_t h);

/// Fold index per example: a seeded permutation dealt round-robin, so fold
/// sizes differ by at most one.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

struct CvResult {
  std::size_t chosen = 0;
  std::vector<double> mean_accuracy;  // aligned with the sorted grid
  std::vector<std::size_t> grid;      // sorted ascending, deduplicated
  std::vector<std::string> warnings;  // e.g. single-class validation folds
};

/// Same folds for every grid value; the best mean validation accuracy wins,
/// exact ties going to the smaller value.
CvResult cross_validate(const LabeledDataset& train, const ExperimentConfig& cfg, std::uint64_t seed);

struct RepeatResult {
  std::size_t repeat = 0;
  std::size_t chosen = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t ic = 0;
  std::size_t ic_with_bias = 0;
  double accuracy = 0.0;
  double mean_er = 0.0;
  double astuteness = 0.0;
  std::size_t er_samples = 0;
  std::size_t rounds_run = 0;        // BBM-RS only
  std::string stop_reason;           // BBM-RS only
  double certified_violation = 0.0;  // BBM-RS only; must be 0
  std::vector<std::string> warnings;
};

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(count); 0 for a single value
};

Summary summarize(const std::vector<double>& values);

struct EvalReport {
  Algorithm algorithm = Algorithm::kBbmRs;
  std::string normalization;  // "whole_data" or "train_only"
  double tau = 0.0;
  std::vector<RepeatResult> repeats;
  Summary ic, ic_with_bias, accuracy, er, astuteness;
};

/// Per repeat: 2:1 split, cross-validation on the training part, a final fit
/// on the whole training part, then IC, test accuracy and ER on k sampled
/// correct test rows. Component errors are rethrown nested inside an
/// EvalError naming the repeat.
EvalReport run_experiment(const LabeledDataset& ds, const ExperimentConfig& cfg);

struct TauRow {
  double tau = 0.0;
  Summary ic, accuracy, er;
  bool er_at_least_tau = false;
};

/// run_experiment (BBM-RS) once per tau.
std::vector<TauRow> tau_sweep(const LabeledDataset& ds, const std::vector<double>& taus,
                              ExperimentConfig cfg);

struct CurvePoint {
  std::size_t prefix = 0;  // rounds used
  std::size_t ic = 0;
  double accuracy = 0.0;
};

struct IcCurve {
  std::vector<CurvePoint> prefixes;  // one per prefix length 1..rounds_run
  std::vector<CurvePoint> best;      // highest accuracy per IC, ascending IC
};

/// Rebuilds the risk score from the first i rounds (bias -i/2) for every i.
IcCurve ic_accuracy_curve(const TrainReport& report, const LabeledDataset& test);

std::string eval_report_csv(const EvalReport& report);
std::string tau_sweep_csv(const std::vector<TauRow>& rows);
std::string ic_curve_csv(const IcCurve& curve);
std::string cv_csv(const CvResult& cv);

/// Table with one row per (dataset, algorithm) and empty rows for the
/// external baselines (RobDT, LCPA) so their numbers can be filled in.
std::string comparison_csv(const std::vector<std::pair<std::string, EvalReport>>& rows);

/// Hex FNV-1a digest of the dataset in canonical CSV form.
std::string dataset_fingerprint(const LabeledDataset& ds);

/// "key: value" lines describing one run.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  std::string render() const;
};

void add_config(RunManifest& manifest, const ExperimentConfig& cfg);

}  // namespace robscore
