#include "robscore/bbm_rs.hpp"

#include <cstdio>
#include <sstream>

#include "robscore/bbm.hpp"
#include "robscore/csv.hpp"
#include "robscore/errors.hpp"
#include "robscore/stumps.hpp"

namespace robscore {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kReachedT: return "reached_T";
    case StopReason::kWeakLearnerExhausted: return "weak_learner_exhausted";
    case StopReason::kAllExamplesDecided: return "all_examples_decided";
  }
  return "unknown";
}

LabeledDataset inject_noise(const LabeledDataset& ds, double tau) {
  std::vector<double> features(ds.features().begin(), ds.features().end());
  const std::size_t d = ds.dim();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double shift = tau * ds.label(i);
    for (std::size_t j = 0; j < d; ++j) features[i * d + j] -= shift;
  }
  std::vector<Interval> domain = ds.domain();
  for (auto& iv : domain) iv = {iv.lo - tau, iv.hi + tau};
  return ds.with_features(std::move(features), std::move(domain));
}

TrainReport train_bbm_rs(const LabeledDataset& ds, const BbmRsConfig& config) {
  if (config.rounds < 1) throw TrainError("T must be at least 1");
  if (!(config.tau >= 0.0 && config.tau < 1.0)) throw TrainError("tau must lie in [0, 1)");
  if (!(config.gamma_bbm > 0.0 && config.gamma_bbm < 0.5)) {
    throw TrainError("gamma_bbm must lie in (0, 1/2)");
  }
  if (ds.empty()) throw TrainError("training set is empty");
  if (!is_unit_normalized(ds)) throw TrainError("training features must lie in [0, 1]");

  const LabeledDataset noisy = inject_noise(ds, config.tau);
  const StumpSearcher searcher(noisy);
  const int T = static_cast<int>(config.rounds);
  BbmState state(T, config.gamma_bbm, noisy.size());

  TrainReport report;
  report.potential_bound = state.table->potential(1, 0);
  report.stop_reason = StopReason::kReachedT;
  std::vector<Stump> accepted;
  std::vector<int> signs(noisy.size());

  for (int t = 1; t <= T; ++t) {
    const BbmDistribution dist = bbm_distribution(state);
    if (dist.all_decided) {
      report.stop_reason = StopReason::kAllExamplesDecided;
      break;
    }
    const StumpSearchResult best = searcher.best(dist.mu);
    if (best.weighted_accuracy <= config.min_weighted_accuracy) {
      report.stop_reason = StopReason::kWeakLearnerExhausted;
      break;
    }
    accepted.push_back(best.stump);
    report.rounds.push_back({static_cast<std::size_t>(t), best.stump, best.weighted_accuracy,
                             best.advantage});
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      signs[i] = best.stump.predict(noisy.row(i)) * noisy.label(i);
    }
    state.advance(signs);
  }

  report.rounds_run = accepted.size();
  report.model = RiskScore::from_rounds(accepted);
  return report;
}

std::string format_round_log(const TrainReport& report) {
  std::ostringstream out;
  out << "round,feature,theta,weighted_accuracy,advantage\n";
  for (const auto& r : report.rounds) {
    out << r.round << "," << r.stump.feature << "," << csv::format_exact(r.stump.theta) << ","
        << csv::format_exact(r.weighted_accuracy) << "," << csv::format_exact(r.advantage) << "\n";
  }
  out << "# rounds_run=" << report.rounds_run << " stop_reason=" << to_string(report.stop_reason)
      << " potential_bound=" << csv::format_exact(report.potential_bound) << "\n";
  return out.str();
}

}  // namespace robscore
