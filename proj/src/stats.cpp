#include "iprob/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iprob::stats {

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  r.n = xs.size();
  if (xs.empty()) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / xs.size();
  if (xs.size() < 2) {
    r.stderr_ = std::nan("");
    return r;
  }
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  v /= (xs.size() - 1);
  r.stderr_ = std::sqrt(v / xs.size());
  return r;
}

MeanStderr median_of_means(const std::vector<double>& xs, int blocks) {
  if (static_cast<int>(xs.size()) < blocks) throw std::invalid_argument("median_of_means: too few samples");
  std::vector<double> means(blocks, 0.0);
  const std::size_t per = xs.size() / blocks;
  for (int b = 0; b < blocks; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += xs[i];
    means[b] = s / per;
  }
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  MeanStderr r;
  r.n = xs.size();
  r.mean = blocks % 2 ? sorted[blocks / 2] : 0.5 * (sorted[blocks / 2 - 1] + sorted[blocks / 2]);
  const auto ms = mean_stderr(means);
  r.stderr_ = 1.2533 * ms.stderr_;  // median efficiency factor for near-Gaussian blocks
  return r;
}

namespace {

// regularized incomplete gamma via series / continued fraction (Numerical
// Recipes style), enough for p-values
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("regularized_gamma_q: bad args");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chisq_pvalue(const std::map<std::int64_t, std::int64_t>& observed,
                    const std::map<std::int64_t, double>& probabilities, std::int64_t n_samples) {
  // pool cells (in key order) until each expected count is >= 5
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0, tail_prob = 1.0;
  for (auto& [k, p] : probabilities) {
    auto it = observed.find(k);
    obs_acc += it == observed.end() ? 0.0 : static_cast<double>(it->second);
    exp_acc += p * n_samples;
    tail_prob -= p;
    if (exp_acc >= 5.0) {
      cells.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  // everything outside the listed support goes to one tail cell
  double obs_out = 0.0;
  for (auto& [k, c] : observed)
    if (!probabilities.count(k)) obs_out += static_cast<double>(c);
  obs_acc += obs_out;
  exp_acc += std::max(tail_prob, 0.0) * n_samples;
  if (exp_acc > 0.0) cells.emplace_back(obs_acc, exp_acc);
  if (cells.size() < 2) return 1.0;
  double stat = 0.0;
  for (auto& [o, e] : cells) stat += (o - e) * (o - e) / e;
  const double dof = static_cast<double>(cells.size() - 1);
  return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks2_pvalue: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lam = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    p += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::min(std::max(p, 0.0), 1.0);
}

double tv_distance(const std::map<std::int64_t, std::int64_t>& counts,
                   const std::map<std::int64_t, double>& pmf, std::int64_t n_samples) {
  double tv = 0.0;
  for (auto& [k, p] : pmf) {
    auto it = counts.find(k);
    const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n_samples;
    tv += std::abs(emp - p);
  }
  for (auto& [k, c] : counts)
    if (!pmf.count(k)) tv += static_cast<double>(c) / n_samples;
  return 0.5 * tv;
}

}  // namespace iprob::stats
