#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iprob/rng.hpp"
#include "iprob/signature.hpp"

namespace iprob::dynamics {

enum class Regime { schur, q };
enum class Choice { push_left, push_right, independent };

struct DynamicsProfile {
  Regime regime = Regime::schur;
  Choice choice = Choice::independent;
  double q = 0.0;
  DynamicsProfile(Regime r, Choice c, double q_ = 0.0) : regime(r), choice(c), q(q_) {
    if (regime == Regime::q && choice == Choice::push_right)
      throw std::invalid_argument("q/push_right gives negative probabilities");
    if (regime == Regime::q && !(q >= 0.0 && q < 1.0))
      throw std::invalid_argument("q regime needs q in [0,1)");
  }
};

// Jump rates and propagation probabilities for one (lower, upper) pair.
// w has |upper| entries (upper particles); l and r have |lower| entries
// (movers on the lower level).
struct LocalRates {
  std::vector<double> w;
  std::vector<double> l;
  std::vector<double> r;
};

LocalRates solve_local_rates(const DynamicsProfile& profile, const Signature& lower,
                             const Signature& upper);

struct ArrayState {
  std::vector<std::vector<std::int64_t>> rows;  // rows[k] = level k+1, size k+1
  double time = 0.0;
};

ArrayState packed_state(int n_levels);

struct Event {
  double time;
  int level;
  int index;
  enum Kind { clock, push_left, push_right, forced } kind;
};

std::string event_log_csv(const std::vector<Event>& log);

// Exact event-driven simulation up to t_end; clocks are redrawn after every
// rate-changing event (memorylessness), pushes resolve level-by-level upward
// within a single instant. Interlacing is checked after every event.
ArrayState evolve_array(ArrayState state, double t_end, const DynamicsProfile& profile, Rng& rng,
                        std::vector<Event>* log = nullptr);

enum class MarginalKind { tasep, pushtasep, qtasep, qpushtasep };

// One-dimensional marginal chains in their shifted coordinates
// (tasep/qtasep: y_h = la^(h)_h - h from y_h = -h; push variants: rightmost
// columns from the packed configuration).
std::vector<std::int64_t> run_marginal(MarginalKind kind, int n, double q, double t, Rng& rng);

struct RskResult {
  ArrayState state;
  std::vector<std::pair<double, int>> stars;  // (time, letter)
};

// Poisson random words driving the row-insertion dynamics (letter j = clock
// of la^(j)_1); |la^(h)| equals the number of letters <= h.
RskResult rsk_from_words(int n, double t, Rng& rng);

// Max stars collected by j nonintersecting up-right paths from rows 1..j at
// time 0 to rows h-j+1..h at the horizon (exact DP, <= 20 stars).
std::int64_t lpp_oracle(const std::vector<std::pair<double, int>>& stars, int h, int j);

// Single-level jump chain with the Gibbs-projected generator (dimension or
// q-Whittaker ratios); oracle for the level-marginal property tests.
std::vector<std::int64_t> level_chain_sample(Regime regime, int h, double q, double t, Rng& rng);

}  // namespace iprob::dynamics
