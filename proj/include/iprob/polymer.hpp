#pragma once

#include <cstdint>
#include <vector>

#include "iprob/rng.hpp"

namespace iprob::polymer {

// Discretized independent Brownian paths B_1..B_N on a uniform grid; the
// Gaussian increments are generated lazily from a counter-based stream so a
// replica never materializes the full N x (t/step) array.
class PolymerEnvironment {
public:
  PolymerEnvironment(int n_paths, double horizon, double grid_step, std::uint64_t seed);

  int paths() const { return n_; }
  double horizon() const { return horizon_; }
  double step() const { return dt_; }
  std::int64_t steps() const { return steps_; }

  // increment of B_h over (i dt, (i+1) dt], variance dt; h is 1-based
  double increment(int h, std::int64_t i) const;

private:
  int n_;
  double horizon_;
  double dt_;
  std::int64_t steps_;
  std::uint64_t seed_;
};

// log Z_N^t by the stable recursion Z_h(s) = int_0^s Z_{h-1}(r)
// e^{B_h(s)-B_h(r)} dr (trapezoid on the grid, streaming log-sum-exp).
double simulate_partition_log(int n, double t, const PolymerEnvironment& env);

// log of the single-path partition function from (0, i) to (tau, m)
// for all i <= m <= n (used by the hierarchy oracle), entry [i-1][m-i].
std::vector<std::vector<double>> partition_log_table(int n, double tau,
                                                     const PolymerEnvironment& env);

struct HierarchyState {
  // T[h-1][k-1] for 1 <= k <= h <= N
  std::vector<std::vector<double>> T;
};

enum class HierarchyMethod { lgv, sde };

// lgv: T_{h,1}+...+T_{h,k} = log det of single-path partition functions,
// individual entries by differencing in k. sde: Euler-Maruyama of the
// coupled SDE system warm-started at tau0 from the lgv state (same noise).
HierarchyState simulate_hierarchy(int n, double tau, const PolymerEnvironment& env,
                                  HierarchyMethod method, double tau0 = 0.05);

struct LLNReport {
  double mean;
  double stderr_;
  double f_target;      // f_kappa from the KPZ constants
  double bias_scale;    // expected finite-N bias scale ~ N^{-2/3}
  int replicas;
};

LLNReport lln_experiment(int n, double kappa, int replicas, double grid_step,
                         std::uint64_t master_seed, int threads = 1);

// per-replica log Z values (CSV fodder); deterministic in (seed, index)
std::vector<double> sample_log_partition(int n, double t, int replicas, double grid_step,
                                         std::uint64_t master_seed, int threads = 1);

}  // namespace iprob::polymer
