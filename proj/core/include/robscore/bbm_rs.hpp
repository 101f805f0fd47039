#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robscore/dataset.hpp"
#include "robscore/models.hpp"

namespace robscore {

struct BbmRsConfig {
  std::size_t rounds = 30;              // T
  double tau = 0.05;                    // noise level, 0 <= tau < 1
  double gamma_bbm = 0.01;              // edge assumed by the BBM weighting
  double min_weighted_accuracy = 0.51;  // stop once the best stump is not above this
  std::uint64_t seed = 0;               // recorded only; training is deterministic
};

enum class StopReason { kReachedT, kWeakLearnerExhausted, kAllExamplesDecided };

std::string to_string(StopReason reason);

struct RoundRecord {
  std::size_t round = 0;  // 1-indexed
  Stump stump;
  double weighted_accuracy = 0.0;
  double advantage = 0.0;
};

struct TrainReport {
  RiskScore model;
  std::size_t rounds_run = 0;
  StopReason stop_reason = StopReason::kReachedT;
  std::vector<RoundRecord> rounds;  // accepted rounds, in order
  double potential_bound = 1.0;     // Phi_1(0): BBM training-error bound
};

/// (x, y) -> (x - tau * y * 1, y).
LabeledDataset inject_noise(const LabeledDataset& ds, double tau);

/// Noise injection, then up to T rounds of BBM over one-sided stumps. Each
/// accepted round adds a unit-weight condition "x_i >= theta"; duplicates are
/// merged at the end and the bias is -rounds_run / 2.
///
/// Throws TrainError if a feature lies outside [0, 1] or the hyperparameters
/// are out of range.
TrainReport train_bbm_rs(const LabeledDataset& ds, const BbmRsConfig& config);

/// Plain-text table: round, feature, theta, weighted accuracy, advantage.
std::string format_round_log(const TrainReport& report);

}  // namespace robscore
