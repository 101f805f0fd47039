#include "robscore/bbm.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "robscore/errors.hpp"

namespace robscore {

PotentialTable::PotentialTable(int total_rounds, double gamma)
    : total_rounds_(total_rounds), gamma_(gamma) {
  if (total_rounds < 1) throw DomainError("BBM needs at least one round");
  if (!(gamma >= 0.0 && gamma < 0.5)) throw DomainError("BBM gamma must lie in [0, 1/2)");
  const int T = total_rounds_;
  const int width = 2 * T + 1;
  table_.assign(static_cast<std::size_t>(T + 1) * width, 0.0);
  const double up = 0.5 + gamma_;
  const double down = 0.5 - gamma_;
  for (int t = T + 1; t >= 1; --t) {
    double* row = table_.data() + static_cast<std::size_t>(t - 1) * width;
    for (int s = -T; s <= T; ++s) {
      row[s + T] = t == T + 1 ? (s <= 0 ? 1.0 : 0.0)
                              : up * potential(t + 1, s + 1) + down * potential(t + 1, s - 1);
    }
  }
}

double PotentialTable::potential(int t, int s) const {
  const int remaining = total_rounds_ - t + 1;
  if (s > remaining) return 0.0;    // cannot come back down to 0
  if (s <= -remaining) return 1.0;  // cannot climb above 0
  const int width = 2 * total_rounds_ + 1;
  return table_[static_cast<std::size_t>(t - 1) * width + (s + total_rounds_)];
}

double PotentialTable::weight(int t, int s) const {
  return potential(t + 1, s - 1) - potential(t + 1, s + 1);
}

double bbm_potential(int total_rounds, int t, int s, double gamma) {
  if (t < 1 || t > total_rounds + 1) throw DomainError("round index out of range");
  if (std::abs(s) > total_rounds) throw DomainError("margin out of range");
  return PotentialTable(total_rounds, gamma).potential(t, s);
}

BbmState::BbmState(int total_rounds_in, double gamma_in, std::size_t num_examples)
    : total_rounds(total_rounds_in),
      gamma(gamma_in),
      margins(num_examples, 0),
      table(std::make_shared<const PotentialTable>(total_rounds_in, gamma_in)) {}

void BbmState::advance(std::span<const int> correct_signs) {
  if (correct_signs.size() != margins.size()) throw InternalError("margin update size mismatch");
  for (std::size_t i = 0; i < margins.size(); ++i) margins[i] += correct_signs[i];
  ++t;
}

void BbmState::check_invariants() const {
  for (int s : margins) {
    if (std::abs(s) > t - 1 || (s - (t - 1)) % 2 != 0) {
      throw InternalError("BBM margin " + std::to_string(s) + " invalid at round " +
                          std::to_string(t));
    }
  }
}

BbmDistribution bbm_distribution(const BbmState& state) {
  if (state.t < 1 || state.t > state.total_rounds) throw DomainError("round index out of range");
  BbmDistribution out;
  out.mu.resize(state.margins.size());
  double total = 0.0;
  for (std::size_t i = 0; i < state.margins.size(); ++i) {
    double w = state.table->weight(state.t, state.margins[i]);
    if (w < 0.0) {
      if (w < -1e-12) throw InternalError("negative BBM weight " + std::to_string(w));
      w = 0.0;
    }
    out.mu[i] = w;
    total += w;
  }
  if (total <= 0.0) {
    out.all_decided = true;
    return out;
  }
  for (auto& m : out.mu) m /= total;
  return out;
}

}  // namespace robscore
