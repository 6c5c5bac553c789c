#include "iprob/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "iprob/symfun.hpp"

namespace iprob::dynamics {

namespace {

double qpow(double q, std::int64_t e) {
  if (e <= 0) return 1.0;
  return std::pow(q, static_cast<double>(e));
}

// S_j of the q-deformed rate theorem; factors with out-of-range indices are
// omitted. lower has h-1 parts, upper has h parts, 1 <= j <= h.
double q_S(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper, int j,
           double q) {
  const int h = static_cast<int>(upper.size());
  double v = 1.0;
  if (j - 2 >= 0 && j - 2 < static_cast<int>(lower.size()))
    v *= 1.0 - qpow(q, lower[j - 2] - upper[j - 1]);
  if (j < h) v *= 1.0 - qpow(q, upper[j - 1] - upper[j] + 1);
  if (j - 1 < static_cast<int>(lower.size())) v /= 1.0 - qpow(q, upper[j - 1] - lower[j - 1] + 1);
  return v;
}

// T_i, 1 <= i <= h-1; T_h = 0 by the theorem's convention.
double q_T(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper, int i,
           double q) {
  const int h = static_cast<int>(upper.size());
  if (i >= h) return 0.0;
  double v = 1.0 - qpow(q, lower[i - 1] - upper[i]);
  if (i - 2 >= 0) v *= 1.0 - qpow(q, lower[i - 2] - lower[i - 1] + 1);
  v /= 1.0 - qpow(q, upper[i - 1] - lower[i - 1] + 1);
  return v;
}

bool particle_free(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper,
                   int j) {
  return j == 1 || upper[j - 1] < lower[j - 2];
}

// telescoped right-propagation probability of q-PushTASEP dynamics: mover j
// on the level below `upper` (its pre-move value is lower[j-1])
double q_push_left_r(const std::vector<std::int64_t>& lower, const std::vector<std::int64_t>& upper,
                     int j, double q) {
  if (j == 1) return qpow(q, upper[0] - lower[0]);
  const double num = 1.0 - qpow(q, lower[j - 2] - upper[j - 1]);
  const double den = 1.0 - qpow(q, lower[j - 2] - lower[j - 1]);
  return qpow(q, upper[j - 1] - lower[j - 1]) * num / den;
}

}  // namespace

LocalRates solve_local_rates(const DynamicsProfile& profile, const Signature& lower,
                             const Signature& upper) {
  if (!interlaces(lower, upper)) throw std::invalid_argument("solve_local_rates: lower must interlace upper");
  const int h = static_cast<int>(upper.size());
  const auto& lo = lower.parts();
  const auto& up = upper.parts();
  LocalRates rates;
  rates.w.assign(h, 0.0);
  rates.l.assign(std::max(h - 1, 0), 0.0);
  rates.r.assign(std::max(h - 1, 0), 0.0);

  const bool is_q = profile.regime == Regime::q;
  const double q = profile.q;
  for (int j = 1; j <= h; ++j) {
    const bool free = particle_free(lo, up, j);
    switch (profile.choice) {
      case Choice::independent:
        rates.w[j - 1] = is_q ? q_S(lo, up, j, q) : (free ? 1.0 : 0.0);
        break;
      case Choice::push_left:
        rates.w[j - 1] = j == 1 ? 1.0 : 0.0;
        break;
      case Choice::push_right:
        rates.w[j - 1] = (j == h && free) ? 1.0 : 0.0;
        break;
    }
  }
  for (int j = 1; j <= h - 1; ++j) {
    switch (profile.choice) {
      case Choice::independent:
        break;  // l = r = 0
      case Choice::push_left:
        if (is_q) {
          rates.r[j - 1] = q_push_left_r(lo, up, j, q);
          rates.l[j - 1] = 1.0 - rates.r[j - 1];
        } else {
          rates.l[j - 1] = 1.0;
        }
        break;
      case Choice::push_right:
        rates.r[j - 1] = 1.0;
        break;
    }
  }

  // validate the governing linear equations on the free indices
  std::vector<int> free_j;  // j_m values (particle j_m + 1 is free)
  for (int j = 1; j <= h; ++j)
    if (particle_free(lo, up, j)) free_j.push_back(j - 1);
  const int kappa = static_cast<int>(free_j.size());
  if (is_q) {
    if (profile.choice == Choice::independent) {
      for (int m = 0; m < kappa; ++m) {
        const int jm = free_j[m];
        if (std::abs(rates.w[jm] - q_S(lo, up, jm + 1, q)) > 1e-9)
          throw std::logic_error("solve_local_rates: w_j = S_j violated");
      }
    } else {
      // summed identity over the free equations: with almost-sure propagation
      // (r_j + l_j = 1) each mover's T enters once, so
      //   sum_m S_{j_m+1} = sum_m w_{j_m+1} + sum_{m>=2} T_{j_m}
      double lhs = 0.0, rhs = 0.0;
      for (int m = 0; m < kappa; ++m) {
        const int jm = free_j[m];
        rhs += q_S(lo, up, jm + 1, q);
        lhs += rates.w[jm];
        if (m >= 1 && jm >= 1) lhs += q_T(lo, up, jm, q) * (rates.r[jm - 1] + rates.l[jm - 1]);
      }
      if (std::abs(lhs - rhs) > 1e-9)
        throw std::logic_error("solve_local_rates: summed rate identity violated");
    }
  } else {
    for (int m = 0; m < kappa; ++m) {
      const int jm = free_j[m];
      double lhs = rates.w[jm];
      if (m + 1 < kappa) {
        const int jn = free_j[m + 1];
        if (jn >= 1 && jn <= h - 1) lhs += rates.r[jn - 1];
      }
      if (jm >= 1) lhs += rates.l[jm - 1];
      // the last equation presumes the leftmost particle is free; when it is
      // blocked the rate flows through right pushes from below instead
      if (profile.choice == Choice::push_right && m + 1 == kappa && free_j[kappa - 1] + 1 != h)
        continue;
      if (std::abs(lhs - 1.0) > 1e-9)
        throw std::logic_error("solve_local_rates: rate equations violated");
    }
  }
  return rates;
}

ArrayState packed_state(int n_levels) {
  ArrayState s;
  s.rows.resize(n_levels);
  for (int h = 1; h <= n_levels; ++h) s.rows[h - 1].assign(h, 0);
  return s;
}

std::string event_log_csv(const std::vector<Event>& log) {
  std::ostringstream out;
  out << "time,level,index,kind\n";
  static const char* names[4] = {"clock", "push_left", "push_right", "forced"};
  for (auto& e : log) out << e.time << "," << e.level << "," << e.index << "," << names[e.kind] << "\n";
  return out.str();
}

namespace {

struct Engine {
  const DynamicsProfile& prof;
  std::vector<std::vector<std::int64_t>>& rows;
  int n_levels;
  std::vector<std::vector<double>> rate;  // per level, per particle
  std::vector<double> level_rate;
  double total_rate = 0.0;

  Engine(const DynamicsProfile& p, std::vector<std::vector<std::int64_t>>& r)
      : prof(p), rows(r), n_levels(static_cast<int>(r.size())) {
    rate.resize(n_levels);
    level_rate.assign(n_levels, 0.0);
    for (int h = 1; h <= n_levels; ++h) {
      rate[h - 1].assign(h, 0.0);
      for (int j = 1; j <= h; ++j) rate[h - 1][j - 1] = particle_rate(h, j);
      for (double w : rate[h - 1]) level_rate[h - 1] += w;
      total_rate += level_rate[h - 1];
    }
  }

  bool is_free(int h, int j) const {
    return j == 1 || rows[h - 1][j - 1] < rows[h - 2][j - 2];
  }

  double particle_rate(int h, int j) const {
    static const std::vector<std::int64_t> empty;
    const auto& lo = h >= 2 ? rows[h - 2] : empty;
    const auto& up = rows[h - 1];
    switch (prof.choice) {
      case Choice::independent:
        if (prof.regime == Regime::q) return q_S(lo, up, j, prof.q);
        return is_free(h, j) ? 1.0 : 0.0;
      case Choice::push_left:
        return j == 1 ? 1.0 : 0.0;
      case Choice::push_right:
        return (j == h && is_free(h, j)) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  void refresh(int h, int j) {
    if (h < 1 || h > n_levels || j < 1 || j > h) return;
    const double nw = particle_rate(h, j);
    const double delta = nw - rate[h - 1][j - 1];
    rate[h - 1][j - 1] = nw;
    level_rate[h - 1] += delta;
    total_rate += delta;
  }

  void rebuild_sums() {
    total_rate = 0.0;
    for (int h = 1; h <= n_levels; ++h) {
      double s = 0.0;
      for (double w : rate[h - 1]) s += w;
      level_rate[h - 1] = s;
      total_rate += s;
    }
  }

  // nearest free top-right index at level h+1 for a mover at (h, j)
  int xi(int h, int j) const {
    for (int m = j; m >= 2; --m) {
      if (rows[h][m - 1] < rows[h - 1][m - 2]) return m;
    }
    return 1;
  }

  void check_local_interlacing(int h, int j) const {
    const auto& up = rows[h - 1];
    if (j >= 2 && up[j - 1] > up[j - 2]) throw std::logic_error("interlacing violated within level");
    if (h >= 2) {
      const auto& lo = rows[h - 2];
      if (j <= h - 1 && lo[j - 1] > up[j - 1]) throw std::logic_error("interlacing violated (lower above)");
      if (j >= 2 && up[j - 1] > lo[j - 2]) throw std::logic_error("interlacing violated (blocked overrun)");
    }
  }

  // move particle (h, j) and resolve the cascade upwards
  void cascade(double now, int h, int j, Event::Kind kind, Rng& rng, std::vector<Event>* log) {
    while (true) {
      const std::int64_t pre = rows[h - 1][j - 1];
      rows[h - 1][j - 1] = pre + 1;
      check_local_interlacing(h, j);
      if (log) log->push_back({now, h, j, kind});
      refresh(h, j - 1);
      refresh(h, j);
      refresh(h, j + 1);
      refresh(h + 1, j);
      refresh(h + 1, j + 1);
      if (h == n_levels) return;

      const auto& up = rows[h];  // level h+1
      if (up[j - 1] == pre) {    // forced move keeps interlacing
        kind = Event::forced;
        h = h + 1;
        continue;
      }
      switch (prof.choice) {
        case Choice::independent:
          return;
        case Choice::push_left:
          if (prof.regime == Regime::q) {
            // pre-move lower value enters the exponent
            std::vector<std::int64_t> lo_pre = rows[h - 1];
            lo_pre[j - 1] = pre;
            const double r = q_push_left_r(lo_pre, up, j, prof.q);
            if (rng.uniform() < r) {
              kind = Event::push_right;
              j = xi(h, j);
            } else {
              kind = Event::push_left;
              j = j + 1;
            }
          } else {
            kind = Event::push_left;
            j = j + 1;
          }
          h = h + 1;
          continue;
        case Choice::push_right:
          kind = Event::push_right;
          j = xi(h, j);
          h = h + 1;
          continue;
      }
    }
  }
};

}  // namespace

ArrayState evolve_array(ArrayState state, double t_end, const DynamicsProfile& profile, Rng& rng,
                        std::vector<Event>* log) {
  if (t_end < state.time) throw std::invalid_argument("evolve_array: t_end before state time");
  for (std::size_t k = 0; k < state.rows.size(); ++k) {
    if (state.rows[k].size() != k + 1) throw std::invalid_argument("evolve_array: malformed state");
  }
  Engine eng(profile, state.rows);
  double now = state.time;
  std::int64_t events = 0;
  while (true) {
    if (eng.total_rate <= 0.0) break;
    const double dt = rng.exponential(eng.total_rate);
    if (now + dt > t_end) break;
    now += dt;
    if ((++events & 4095) == 0) eng.rebuild_sums();  // kill incremental drift
    // pick level, then particle within the level; zero-rate entries are
    // never selectable even under floating-point drift
    double u = rng.uniform() * eng.total_rate;
    int h = eng.n_levels;
    for (int hh = 1; hh <= eng.n_levels; ++hh) {
      if (eng.level_rate[hh - 1] <= 0.0) continue;
      if (u < eng.level_rate[hh - 1] || hh == eng.n_levels) {
        h = hh;
        break;
      }
      u -= eng.level_rate[hh - 1];
    }
    int j = 0;
    for (int jj = 1; jj <= h; ++jj) {
      const double r = eng.rate[h - 1][jj - 1];
      if (r <= 0.0) continue;
      j = jj;
      if (u < r) break;
      u -= r;
    }
    if (j == 0) continue;  // level rate drifted to junk; resynced next event
    eng.cascade(now, h, j, Event::clock, rng, log);
  }
  state.time = t_end;
  return state;
}

std::vector<std::int64_t> run_marginal(MarginalKind kind, int n, double q, double t, Rng& rng) {
  std::vector<std::int64_t> y(n);
  const bool is_push = kind == MarginalKind::pushtasep || kind == MarginalKind::qpushtasep;
  for (int h = 1; h <= n; ++h) {
    if (kind == MarginalKind::tasep || kind == MarginalKind::qtasep) y[h - 1] = -h;
    else if (kind == MarginalKind::pushtasep) y[h - 1] = h - 1;
    else y[h - 1] = h;
  }
  double now = 0.0;
  std::vector<double> rate(n, 1.0);
  auto recompute = [&](int h) {  // 1-based particle
    switch (kind) {
      case MarginalKind::tasep:
        rate[h - 1] = (h == 1 || y[h - 2] - y[h - 1] > 1) ? 1.0 : 0.0;
        break;
      case MarginalKind::qtasep:
        rate[h - 1] = h == 1 ? 1.0 : 1.0 - qpow(q, y[h - 2] - y[h - 1] - 1);
        break;
      default:
        rate[h - 1] = 1.0;  // push variants: every particle carries rate 1
    }
  };
  for (int h = 1; h <= n; ++h) recompute(h);
  while (true) {
    double total = 0.0;
    for (double r : rate) total += r;
    if (total <= 0.0) break;
    const double dt = rng.exponential(total);
    if (now + dt > t) break;
    now += dt;
    double u = rng.uniform() * total;
    int h = 1;
    for (; h < n; ++h) {
      if (u < rate[h - 1]) break;
      u -= rate[h - 1];
    }
    if (!is_push) {
      y[h - 1] += 1;
      recompute(h);
      if (h + 1 <= n) recompute(h + 1);
    } else {
      // move h, push h+1 (deterministically when adjacent, else with q^gap)
      int j = h;
      y[j - 1] += 1;
      while (j + 1 <= n) {
        const std::int64_t gap = y[j] - y[j - 1];  // post-move distance
        if (kind == MarginalKind::pushtasep) {
          if (gap == 0) y[j] += 1; else break;
        } else {
          if (gap == 0) {  // adjacent before the move: gap was 0, q^0 = 1
            y[j] += 1;
          } else if (rng.uniform() < qpow(q, gap)) {
            // pre-move gap (empty spots) equals the post-move distance
            y[j] += 1;
          } else {
            break;
          }
        }
        ++j;
      }
    }
  }
  return y;
}

RskResult rsk_from_words(int n, double t, Rng& rng) {
  std::vector<Event> log;
  ArrayState s = evolve_array(packed_state(n), t, DynamicsProfile(Regime::schur, Choice::push_left),
                              rng, &log);
  RskResult r;
  r.state = std::move(s);
  for (auto& e : log)
    if (e.kind == Event::clock) r.stars.emplace_back(e.time, e.level);
  return r;
}

std::int64_t lpp_oracle(const std::vector<std::pair<double, int>>& stars, int h, int j) {
  if (j > h) throw std::invalid_argument("lpp_oracle: j > h");
  if (j <= 0) return 0;
  std::vector<std::pair<double, int>> use;
  for (auto& s : stars)
    if (s.second <= h && s.second >= 1) use.push_back(s);
  if (use.size() > 20) throw std::invalid_argument("lpp_oracle: too many stars (limit 20)");
  std::sort(use.begin(), use.end());
  for (std::size_t i = 1; i < use.size(); ++i)
    if (use[i].first == use[i - 1].first) throw std::invalid_argument("lpp_oracle: times must be distinct");

  // states: strictly increasing j-tuples, p <= r_p <= h-j+p
  std::vector<std::vector<int>> states;
  std::vector<int> cur(j);
  for (int p = 0; p < j; ++p) cur[p] = p + 1;
  while (true) {
    states.push_back(cur);
    int p = j - 1;
    while (p >= 0) {
      if (cur[p] < h - j + p + 1 && (p == j - 1 || cur[p] + 1 < cur[p + 1])) {
        ++cur[p];
        for (int k = p + 1; k < j; ++k) cur[k] = std::max(cur[k - 1] + 1, k + 1);
        break;
      }
      --p;
    }
    if (p < 0) break;
  }
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;

  std::vector<std::int64_t> dp(states.size(), -1);
  std::vector<int> init(j);
  for (int p = 0; p < j; ++p) init[p] = p + 1;
  dp[index[init]] = 0;

  auto relax = [&] {
    // states are lexicographically sorted, so single-step predecessors come first
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (int p = 0; p < j; ++p) {
        std::vector<int> prev = states[i];
        prev[p] -= 1;
        if (prev[p] < p + 1) continue;
        if (p > 0 && prev[p] <= prev[p - 1]) continue;
        auto it = index.find(prev);
        if (it != index.end() && dp[it->second] >= 0) dp[i] = std::max(dp[i], dp[it->second]);
      }
    }
  };

  for (auto& [time, row] : use) {
    relax();
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (dp[i] < 0) continue;
      bool on_row = false;
      for (int p = 0; p < j; ++p) on_row |= states[i][p] == row;
      if (on_row) dp[i] += 1;
    }
    // a state not at the row may still have been reachable; the relax pass
    // above already maximized over histories, collection is per-state
  }
  relax();
  std::int64_t best = 0;
  for (auto v : dp) best = std::max(best, v);
  return best;
}

std::vector<std::int64_t> level_chain_sample(Regime regime, int h, double q, double t, Rng& rng) {
  std::vector<std::int64_t> la(h, 0);
  double now = 0.0;
  auto ratio = [&](int j) -> double {  // rate of la -> la + e_j
    if (j >= 2 && la[j - 1] == la[j - 2]) return 0.0;
    if (regime == Regime::schur) {
      // Vandermonde ratio in shifted coordinates x_i = la_i - i
      double r = 1.0;
      for (int i = 1; i <= h; ++i) {
        if (i == j) continue;
        const double d = static_cast<double>((la[j - 1] - j) - (la[i - 1] - i));
        r *= (d + 1.0) / d;
      }
      return r;
    }
    std::vector<std::int64_t> up = la;
    up[j - 1] += 1;
    double r = symfun::qwhittaker_principal(Signature(up), h, QParam(q)) /
               symfun::qwhittaker_principal(Signature(la), h, QParam(q));
    if (j >= 2) r *= 1.0 - qpow(q, la[j - 2] - la[j - 1]);
    return r;
  };
  while (true) {
    std::vector<double> rates(h);
    double total = 0.0;
    for (int j = 1; j <= h; ++j) {
      rates[j - 1] = ratio(j);
      total += rates[j - 1];
    }
    const double dt = rng.exponential(total);
    if (now + dt > t) break;
    now += dt;
    double u = rng.uniform() * total;
    int j = 1;
    for (; j < h; ++j) {
      if (u < rates[j - 1]) break;
      u -= rates[j - 1];
    }
    la[j - 1] += 1;
  }
  return la;
}

}  // namespace iprob::dynamics
