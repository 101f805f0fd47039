#pragma once

// Boost-by-Majority weighting. The potential Phi_t(s) is the probability that
// a +/-1 random walk that steps up with probability 1/2 + gamma, started at
// margin s and run for the T - t + 1 remaining rounds, ends at a margin <= 0.
// Margin 0 counts as an error.

#include <memory>
#include <span>
#include <vector>

namespace robscore {

/// Memoized Phi_t(s) for 1 <= t <= T + 1, filled by the backward recurrence
///   Phi_{T+1}(s) = [s <= 0],
///   Phi_t(s) = (1/2 + gamma) Phi_{t+1}(s + 1) + (1/2 - gamma) Phi_{t+1}(s - 1).
class PotentialTable {
 public:
  /// Requires T >= 1 and 0 <= gamma < 1/2; throws DomainError otherwise.
  PotentialTable(int total_rounds, double gamma);

  int total_rounds() const { return total_rounds_; }
  double gamma() const { return gamma_; }

  /// Phi_t(s); any integer s is accepted (saturates outside the reachable band).
  double potential(int t, int s) const;

  /// BBM weight at round t: Phi_{t+1}(s - 1) - Phi_{t+1}(s + 1), 1 <= t <= T.
  double weight(int t, int s) const;

 private:
  int total_rounds_;
  double gamma_;
  std::vector<double> table_;  // (T + 1) rows of 2T + 1 margins
};

/// Phi_t(s) with range checks: 1 <= t <= T + 1 and |s| <= T.
double bbm_potential(int total_rounds, int t, int s, double gamma);

/// Margins s_i = sum_{j < t} y_i h_j(x_i) at round t (1-indexed).
struct BbmState {
  int total_rounds = 1;
  int t = 1;
  double gamma = 0.01;
  std::vector<int> margins;
  std::shared_ptr<const PotentialTable> table;

  BbmState(int total_rounds, double gamma, std::size_t num_examples);

  /// Adds y_i h_t(x_i) to every margin and advances t.
  void advance(std::span<const int> correct_signs);

  /// Throws InternalError when |s_i| > t - 1 or s_i has the wrong parity.
  void check_invariants() const;
};

struct BbmDistribution {
  std::vector<double> mu;    // sums to 1 unless all_decided
  bool all_decided = false;  // every weight is zero
};

/// mu_i proportional to weight(t, s_i). Rounding residue down to -1e-12 is
/// clamped to 0; anything more negative throws InternalError.
BbmDistribution bbm_distribution(const BbmState& state);

}  // namespace robscore
