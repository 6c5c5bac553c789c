#include "iprob/polymer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "iprob/asymptotics.hpp"
#include "iprob/linalg.hpp"

namespace iprob::polymer {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double lse(double a, double b) {  // log(e^a + e^b)
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void parallel_replicas(int replicas, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int i = 0; i < replicas; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < replicas; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

PolymerEnvironment::PolymerEnvironment(int n_paths, double horizon, double grid_step,
                                       std::uint64_t seed)
    : n_(n_paths), horizon_(horizon), dt_(grid_step), seed_(seed) {
  if (n_paths < 1 || !(horizon > 0.0) || !(grid_step > 0.0))
    throw std::invalid_argument("PolymerEnvironment: bad parameters");
  if (grid_step > horizon / 100.0)
    throw std::invalid_argument("PolymerEnvironment: grid too coarse (need step <= t/100)");
  steps_ = static_cast<std::int64_t>(std::llround(horizon / grid_step));
}

double PolymerEnvironment::increment(int h, std::int64_t i) const {
  // counter-based: two uniforms hashed from (seed, path, step), Box-Muller
  const std::uint64_t base =
      Rng::fmix(seed_ + Rng::fmix(static_cast<std::uint64_t>(h) * 0x632BE59BD9B4E019ull +
                                  static_cast<std::uint64_t>(i) + Rng::kGolden));
  const std::uint64_t u1w = Rng::fmix(base + 1);
  const std::uint64_t u2w = Rng::fmix(base + 2);
  const double u1 = (static_cast<double>(u1w >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(u2w >> 11) + 0.5) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1) * dt_) * std::cos(kTwoPi * u2);
}

namespace {

// log Z_{(0, start)->(s_m, level)} for level = start..n at the final time,
// recursion rows kept over the whole grid
std::vector<double> partition_log_row(int start, int n, std::int64_t steps,
                                      const PolymerEnvironment& env,
                                      std::vector<double>* final_out) {
  const double dt = env.step();
  const std::int64_t m = steps;
  std::vector<double> bh(m + 1);
  std::vector<double> cur(m + 1), nxt(m + 1);
  std::vector<double> finals;
  // level = start: Z = e^{B_start(s)}
  bh[0] = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) bh[i] = bh[i - 1] + env.increment(start, i - 1);
  for (std::int64_t i = 0; i <= m; ++i) cur[i] = bh[i];
  finals.push_back(cur[m]);
  for (int level = start + 1; level <= n; ++level) {
    bh[0] = 0.0;
    for (std::int64_t i = 1; i <= m; ++i) bh[i] = bh[i - 1] + env.increment(level, i - 1);
    // I(s_i) = I(s_{i-1}) + dt/2 (g_{i-1} + g_i), g = exp(cur - B_level)
    double logI = -std::numeric_limits<double>::infinity();
    nxt[0] = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 1; i <= m; ++i) {
      const double a = cur[i - 1] - bh[i - 1];
      const double b = cur[i] - bh[i];
      logI = lse(logI, std::log(0.5 * dt) + lse(a, b));
      nxt[i] = bh[i] + logI;
    }
    cur.swap(nxt);
    finals.push_back(cur[m]);
  }
  if (final_out) *final_out = finals;
  return cur;
}

}  // namespace

double simulate_partition_log(int n, double t, const PolymerEnvironment& env) {
  if (env.paths() < n) throw std::invalid_argument("simulate_partition_log: env too short");
  if (std::abs(env.horizon() - t) > 1e-12)
    throw std::invalid_argument("simulate_partition_log: env horizon mismatch");
  std::vector<double> finals;
  partition_log_row(1, n, env.steps(), env, &finals);
  return finals[n - 1];
}

std::vector<std::vector<double>> partition_log_table(int n, double tau,
                                                     const PolymerEnvironment& env) {
  std::vector<std::vector<double>> table(n);
  for (int start = 1; start <= n; ++start) {
    std::vector<double> finals;
    partition_log_row(start, n, env.steps(), env, &finals);
    table[start - 1] = finals;  // entry [m - start] = log Z_{(0,start)->(tau, m)}
  }
  (void)tau;
  return table;
}

namespace {

// log det of the k x k matrix with entries exp(L[i][j]); throws if the
// determinant is not positive (with a scale report)
double log_det_exp(const std::vector<std::vector<double>>& L, int k) {
  std::vector<double> rowmax(k, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) rowmax[i] = std::max(rowmax[i], L[i][j]);
  std::vector<std::complex<double>> m(k * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[i * k + j] = std::exp(L[i][j] - rowmax[i]);
  const auto det = linalg::det_inplace(m, k);
  if (!(det.real() > 0.0))
    throw std::runtime_error("simulate_hierarchy: nonpositive determinant (scaled det " +
                             std::to_string(det.real()) + ")");
  double r = std::log(det.real());
  for (int i = 0; i < k; ++i) r += rowmax[i];
  return r;
}

HierarchyState hierarchy_lgv(int n, const std::vector<std::vector<double>>& table) {
  HierarchyState st;
  st.T.resize(n);
  for (int h = 1; h <= n; ++h) {
    st.T[h - 1].resize(h);
    double prev_sum = 0.0;
    for (int k = 1; k <= h; ++k) {
      // matrix [i][j] = log Z_{(0,i) -> (tau, h-k+j)}, i,j = 1..k
      std::vector<std::vector<double>> L(k, std::vector<double>(k));
      for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) {
          const int target = h - k + j;
          L[i - 1][j - 1] = target >= i ? table[i - 1][target - i]
                                        : -std::numeric_limits<double>::infinity();
        }
      const double sum_k = log_det_exp(L, k);
      st.T[h - 1][k - 1] = sum_k - prev_sum;
      prev_sum = sum_k;
    }
  }
  return st;
}

}  // namespace

HierarchyState simulate_hierarchy(int n, double tau, const PolymerEnvironment& env,
                                  HierarchyMethod method, double tau0) {
  if (env.paths() < n) throw std::invalid_argument("simulate_hierarchy: env too short");
  if (method == HierarchyMethod::lgv) {
    if (std::abs(env.horizon() - tau) > 1e-12)
      throw std::invalid_argument("simulate_hierarchy: env horizon mismatch");
    return hierarchy_lgv(n, partition_log_table(n, tau, env));
  }
  // sde: warm start at tau0 from the lgv state in the same environment
  if (!(tau0 > 0.0 && tau0 < tau)) throw std::invalid_argument("simulate_hierarchy: bad tau0");
  const double dt = env.step();
  const std::int64_t i0 = static_cast<std::int64_t>(std::llround(tau0 / dt));
  if (i0 < 10) throw std::invalid_argument("simulate_hierarchy: warm-start window too small");

  // lgv state at tau0, recomputed over the truncated horizon with the same
  // increments (shared noise between the two methods)
  std::vector<std::vector<double>> table(n);
  {
    for (int start = 1; start <= n; ++start) {
      std::vector<double> bh(i0 + 1), cur(i0 + 1), nxt(i0 + 1), finals;
      bh[0] = 0.0;
      for (std::int64_t i = 1; i <= i0; ++i) bh[i] = bh[i - 1] + env.increment(start, i - 1);
      for (std::int64_t i = 0; i <= i0; ++i) cur[i] = bh[i];
      finals.push_back(cur[i0]);
      for (int level = start + 1; level <= n; ++level) {
        bh[0] = 0.0;
        for (std::int64_t i = 1; i <= i0; ++i) bh[i] = bh[i - 1] + env.increment(level, i - 1);
        double logI = -std::numeric_limits<double>::infinity();
        nxt[0] = -std::numeric_limits<double>::infinity();
        for (std::int64_t i = 1; i <= i0; ++i) {
          logI = lse(logI, std::log(0.5 * dt) + lse(cur[i - 1] - bh[i - 1], cur[i] - bh[i]));
          nxt[i] = bh[i] + logI;
        }
        cur.swap(nxt);
        finals.push_back(cur[i0]);
      }
      table[start - 1] = finals;
    }
  }
  HierarchyState st = hierarchy_lgv(n, table);

  // Euler-Maruyama of dT_{h,k} = 1_{k=1} dB_h + 1_{k!=1} dT_{h-1,k-1}
  //   + (e^{T_{h-1,k}-T_{h,k}} - e^{T_{h-1,k-1}-T_{h,k-1}}) dtau
  std::vector<std::vector<double>> dT(n);
  for (int h = 1; h <= n; ++h) dT[h - 1].assign(h, 0.0);
  for (std::int64_t i = i0; i < env.steps(); ++i) {
    for (int h = 1; h <= n; ++h) {
      for (int k = 1; k <= h; ++k) {
        double drift = 0.0;
        if (k <= h - 1) drift += std::exp(st.T[h - 2][k - 1] - st.T[h - 1][k - 1]);
        if (k >= 2 && k - 1 <= h - 1) drift -= std::exp(st.T[h - 2][k - 2] - st.T[h - 1][k - 2]);
        const double noise = k == 1 ? env.increment(h, i) : dT[h - 2][k - 2];
        dT[h - 1][k - 1] = noise + drift * dt;
      }
    }
    for (int h = 1; h <= n; ++h)
      for (int k = 1; k <= h; ++k) st.T[h - 1][k - 1] += dT[h - 1][k - 1];
  }
  return st;
}

LLNReport lln_experiment(int n, double kappa, int replicas, double grid_step,
                         std::uint64_t master_seed, int threads) {
  if (n < 32) throw std::invalid_argument("lln_experiment: N >= 32");
  const double t = kappa * n;
  const auto logz = sample_log_partition(n, t, replicas, grid_step, master_seed, threads);
  LLNReport r;
  r.replicas = replicas;
  double s = 0.0;
  for (double v : logz) s += v / n;
  r.mean = s / replicas;
  if (replicas >= 2) {
    double var = 0.0;
    for (double v : logz) var += (v / n - r.mean) * (v / n - r.mean);
    r.stderr_ = std::sqrt(var / (replicas - 1) / replicas);
  } else {
    r.stderr_ = std::nan("");  // degenerate statistics flagged
  }
  r.f_target = asymptotics::kpz_constants(kappa).f;
  r.bias_scale = std::pow(static_cast<double>(n), -2.0 / 3.0);
  return r;
}

std::vector<double> sample_log_partition(int n, double t, int replicas, double grid_step,
                                         std::uint64_t master_seed, int threads) {
  std::vector<double> out(replicas);
  parallel_replicas(replicas, threads, [&](int i) {
    PolymerEnvironment env(n, t, grid_step, Rng::derive(master_seed, i));
    out[i] = simulate_partition_log(n, t, env);
  });
  return out;
}

}  // namespace iprob::polymer
