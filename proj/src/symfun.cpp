#include "iprob/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace iprob::symfun {

namespace {

Complex cpow_int(Complex z, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  if (k < 0) return 1.0 / cpow_int(z, -k);
  Complex r{1.0, 0.0};
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

// determinant by Gaussian elimination with partial pivoting
Complex cdet(std::vector<std::vector<Complex>> m) {
  const std::size_t n = m.size();
  Complex det{1.0, 0.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) == 0.0) return {0.0, 0.0};
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// enumerate all mu interlacing la, invoking fn(mu)
template <class F>
void for_each_interlacing(const Signature& la, F&& fn) {
  const std::size_t m = la.size();
  if (m == 0) return;
  std::vector<std::int64_t> mu(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) mu[i] = la[i + 1];
  while (true) {
    fn(mu);
    std::size_t i = mu.size();
    while (i > 0) {
      --i;
      if (mu[i] < la[i]) {
        ++mu[i];
        for (std::size_t k = i + 1; k < mu.size(); ++k) mu[k] = la[k + 1];
        break;
      }
      if (i == 0) return;
    }
    if (mu.empty()) return;
  }
}

Complex schur_branch_sum(const Signature& la, const std::vector<Complex>& z);

}  // namespace

Complex schur_eval(const Signature& la, const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  if (la.size() != n) throw std::invalid_argument("schur_eval: |z| must equal |lambda|");
  if (n == 0) return {1.0, 0.0};
  double zmax = 0.0, sep = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(z[i]) == 0.0) throw std::invalid_argument("schur_eval: zero entry in z");
    zmax = std::max(zmax, std::abs(z[i]));
    for (std::size_t j = i + 1; j < n; ++j) sep = std::min(sep, std::abs(z[i] - z[j]));
  }
  if (n >= 2 && sep < 1e-6 * zmax) return schur_branch_sum(la, z);

  std::vector<std::vector<Complex>> num(n, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> den(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      num[i][j] = cpow_int(z[i], static_cast<std::int64_t>(n) + la[j] - static_cast<std::int64_t>(j) - 1);
      den[i][j] = cpow_int(z[i], static_cast<std::int64_t>(n) - static_cast<std::int64_t>(j) - 1);
    }
  return cdet(std::move(num)) / cdet(std::move(den));
}

namespace {

Complex schur_branch_sum(const Signature& la, const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  if (n > 8) throw std::runtime_error("schur_eval: coalescent points supported only for N <= 8");
  if (n == 1) return cpow_int(z[0], la[0]);
  Complex total{0.0, 0.0};
  const std::vector<Complex> zsub(z.begin(), z.end() - 1);
  for (auto& [mu, deg] : schur_branch(la)) {
    total += schur_branch_sum(mu, zsub) * cpow_int(z.back(), deg);
  }
  return total;
}

}  // namespace

ExactRational schur_dim(const Signature& la, std::size_t n) {
  if (la.size() != n) throw std::invalid_argument("schur_dim: length mismatch");
  ExactRational r(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t num = (la[i] - static_cast<std::int64_t>(i)) - (la[j] - static_cast<std::int64_t>(j));
      const std::int64_t den = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
      r = r * ExactRational(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
    }
  return r;
}

std::vector<std::pair<Signature, std::int64_t>> schur_branch(const Signature& la) {
  if (la.size() == 0) throw std::invalid_argument("schur_branch: lambda must be nonempty");
  std::vector<std::pair<Signature, std::int64_t>> out;
  if (la.size() == 1) {
    out.emplace_back(Signature(std::vector<std::int64_t>{}), la[0]);
    return out;
  }
  const std::int64_t wla = la.weight();
  for_each_interlacing(la, [&](const std::vector<std::int64_t>& mu) {
    std::int64_t wmu = 0;
    for (auto v : mu) wmu += v;
    out.emplace_back(Signature(mu), wla - wmu);
  });
  return out;
}

void for_each_gt_pattern(const Signature& top,
                         const std::function<bool(const std::vector<Signature>&)>& visit) {
  std::vector<Signature> rows(top.size());
  if (top.size() == 0) {
    visit(rows);
    return;
  }
  rows[top.size() - 1] = top;
  bool stop = false;
  // recursive descent, rows filled from the top down
  std::function<void(std::size_t)> descend = [&](std::size_t h) {
    if (stop) return;
    if (h == 1) {
      if (!visit(rows)) stop = true;
      return;
    }
    const Signature& cur = rows[h - 1];
    for_each_interlacing(cur, [&](const std::vector<std::int64_t>& mu) {
      if (stop) return;
      rows[h - 2] = Signature(mu);
      descend(h - 1);
    });
  };
  descend(top.size());
}

namespace {
using Memo = std::map<std::vector<std::int64_t>, BigInt>;

BigInt count_rec(const Signature& la, Memo& memo) {
  if (la.size() <= 1) return 1;
  auto it = memo.find(la.parts());
  if (it != memo.end()) return it->second;
  if (memo.size() > 5'000'000) throw std::runtime_error("count_gt_patterns: state space too large");
  BigInt total = 0;
  for_each_interlacing(la, [&](const std::vector<std::int64_t>& mu) {
    total += count_rec(Signature(mu), memo);
  });
  memo.emplace(la.parts(), total);
  return total;
}
}  // namespace

BigInt count_gt_patterns(const Signature& top) {
  Memo memo;
  return count_rec(top, memo);
}

BigInt macmahon_count(const HexagonSpec& h) {
  if (h.a < 1 || h.b < 1 || h.c < 1) throw std::invalid_argument("macmahon_count: sides must be >= 1");
  ExactRational r(1);
  for (std::int64_t i = 1; i <= h.a; ++i)
    for (std::int64_t j = 1; j <= h.b; ++j)
      for (std::int64_t k = 1; k <= h.c; ++k)
        r = r * ExactRational(BigInt(static_cast<long>(i + j + k - 1)), BigInt(static_cast<long>(i + j + k - 2)));
  if (!r.is_integer()) throw std::logic_error("macmahon_count: non-integer result");
  return r.numerator();
}

Signature hexagon_top_row(const HexagonSpec& h) {
  std::vector<std::int64_t> parts;
  parts.insert(parts.end(), h.a, h.b);
  parts.insert(parts.end(), h.c, 0);
  return Signature(std::move(parts));
}

namespace {

// (b+c-1-x)! (a-h+x)! / (x! (b+h-1-x)!)
ExactRational hahn_weight_q(const HexagonSpec& s, int h, std::int64_t x) {
  ExactRational w(factorial(static_cast<unsigned long>(s.b + s.c - 1 - x)));
  w = w * ExactRational(factorial(static_cast<unsigned long>(s.a - h + x)));
  w = w / ExactRational(factorial(static_cast<unsigned long>(x)));
  w = w / ExactRational(factorial(static_cast<unsigned long>(s.b + h - 1 - x)));
  return w;
}

ExactRational hahn_unnormalized(const HexagonSpec& s, int h, const std::vector<std::int64_t>& x) {
  ExactRational v(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const std::int64_t d = x[i] - x[j];
      v = v * ExactRational(BigInt(static_cast<long>(d * d)));
    }
  for (auto xi : x) v = v * hahn_weight_q(s, h, xi);
  return v;
}

template <class F>
void for_each_decreasing_tuple(std::int64_t hi, int h, F&& fn) {
  // strictly decreasing h-tuples in [0, hi]
  std::vector<std::int64_t> x(h);
  for (int i = 0; i < h; ++i) x[i] = h - 1 - i;  // smallest valid configuration
  if (h == 0) {
    fn(x);
    return;
  }
  // iterate as combinations
  std::vector<std::int64_t> comb(h);
  for (int i = 0; i < h; ++i) comb[i] = i;  // increasing combo of values in [0, hi]
  while (true) {
    for (int i = 0; i < h; ++i) x[i] = comb[h - 1 - i];
    fn(x);
    int i = h - 1;
    while (i >= 0 && comb[i] == hi - (h - 1 - i)) --i;
    if (i < 0) break;
    ++comb[i];
    for (int k = i + 1; k < h; ++k) comb[k] = comb[k - 1] + 1;
  }
}

}  // namespace

std::vector<std::pair<std::vector<std::int64_t>, ExactRational>> hahn_table(const HexagonSpec& spec, int h) {
  if (h < 0 || h > std::min(spec.a, spec.c)) throw std::invalid_argument("hahn: h out of range");
  std::vector<std::pair<std::vector<std::int64_t>, ExactRational>> table;
  ExactRational z(0);
  for_each_decreasing_tuple(spec.b + h - 1, h, [&](const std::vector<std::int64_t>& x) {
    ExactRational w = hahn_unnormalized(spec, h, x);
    z += w;
    table.emplace_back(x, w);
  });
  for (auto& [x, w] : table) w = w / z;
  return table;
}

ExactRational hahn_pmf(const HexagonSpec& spec, int h, const std::vector<std::int64_t>& x) {
  if (h < 0 || h > std::min(spec.a, spec.c)) throw std::invalid_argument("hahn_pmf: h out of range");
  if (static_cast<int>(x.size()) != h) throw std::invalid_argument("hahn_pmf: |x| must equal h");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] > spec.b + h - 1) return ExactRational(0);
    if (i + 1 < x.size() && x[i] <= x[i + 1]) return ExactRational(0);
  }
  ExactRational z(0);
  for_each_decreasing_tuple(spec.b + h - 1, h, [&](const std::vector<std::int64_t>& y) {
    z += hahn_unnormalized(spec, h, y);
  });
  return hahn_unnormalized(spec, h, x) / z;
}

Complex q_pochhammer(Complex a, Complex q, long n) {
  if (std::abs(q) >= 1.0) throw std::invalid_argument("q_pochhammer: |q| must be < 1");
  Complex r{1.0, 0.0};
  if (n >= 0) {
    Complex qm{1.0, 0.0};
    for (long m = 0; m < n; ++m) {
      r *= (Complex{1.0, 0.0} - a * qm);
      qm *= q;
    }
    return r;
  }
  // infinite product, truncated once the multiplicand is within 1e-16 of 1
  Complex aq = a;
  for (int m = 0; m < 100000; ++m) {
    if (std::abs(aq) < 1e-16) break;
    r *= (Complex{1.0, 0.0} - aq);
    aq *= q;
  }
  return r;
}

double q_factorial(long k, double q) {
  if (k < 0) throw std::invalid_argument("q_factorial: k must be >= 0");
  double r = 1.0;
  double qm = q;
  const double omq = 1.0 - q;
  for (long m = 1; m <= k; ++m) {
    r *= (1.0 - qm) / omq;
    qm *= q;
  }
  return r;
}

double qwhittaker_branch_coeff(const Signature& la, const Signature& mu, QParam q) {
  if (!interlaces(mu, la)) throw std::invalid_argument("qwhittaker_branch_coeff: mu must interlace la");
  if (!la.nonnegative()) throw std::invalid_argument("qwhittaker_branch_coeff: la_N must be >= 0");
  double c = 1.0;
  for (std::size_t i = 0; i + 1 < la.size(); ++i) {
    c *= q_factorial(la[i] - la[i + 1], q);
    c /= q_factorial(la[i] - mu[i], q);
    c /= q_factorial(mu[i] - la[i + 1], q);
  }
  return c;
}

namespace {
double qwhit_principal_rec(const Signature& la, double q, std::map<std::vector<std::int64_t>, double>& memo) {
  if (la.size() <= 1) return 1.0;
  auto it = memo.find(la.parts());
  if (it != memo.end()) return it->second;
  double total = 0.0;
  for_each_interlacing(la, [&](const std::vector<std::int64_t>& muv) {
    Signature mu(muv);
    total += qwhittaker_branch_coeff(la, mu, QParam(q)) * qwhit_principal_rec(mu, q, memo);
  });
  memo.emplace(la.parts(), total);
  return total;
}
}  // namespace

double qwhittaker_principal(const Signature& la, std::size_t n, QParam q) {
  if (la.size() != n) throw std::invalid_argument("qwhittaker_principal: length mismatch");
  if (n > 6) throw std::invalid_argument("qwhittaker_principal: N > 6 (oracle guard)");
  if (!la.nonnegative()) throw std::invalid_argument("qwhittaker_principal: la_N must be >= 0");
  std::map<std::vector<std::int64_t>, double> memo;
  return qwhit_principal_rec(la, q, memo);
}

ExactRational link_kernel_exact(const Signature& la, const Signature& mu) {
  if (!interlaces(mu, la)) return ExactRational(0);
  return schur_dim(mu, mu.size()) / schur_dim(la, la.size());
}

double link_kernel(LinkMode mode, const Signature& la, const Signature& mu, double q) {
  if (!interlaces(mu, la)) return 0.0;
  if (mode == LinkMode::schur) return link_kernel_exact(la, mu).to_double();
  const double pl = qwhittaker_principal(la, la.size(), QParam(q));
  const double pm = mu.size() == 0 ? 1.0 : qwhittaker_principal(mu, mu.size(), QParam(q));
  return pm / pl * qwhittaker_branch_coeff(la, mu, QParam(q));
}

namespace {

// Macdonald branching coefficient psi_{la/mu}(q,t), Macdonald VI (6.24)(ii):
//   prod_{1<=i<=j<=l(mu)} f(q^{mu_i-mu_j} t^{j-i}) f(q^{la_i-la_{j+1}} t^{j-i})
//                       / (f(q^{la_i-mu_j} t^{j-i}) f(q^{mu_i-la_{j+1}} t^{j-i}))
// with f(u) = (ut;q)_inf / (uq;q)_inf.
Complex macdonald_psi(const Signature& la, const Signature& mu, Complex q, Complex t) {
  auto f = [&](std::int64_t aexp, std::int64_t bexp) -> Complex {
    const Complex u = cpow_int(q, aexp) * cpow_int(t, bexp);
    return q_pochhammer(u * t, q, -1) / q_pochhammer(u * q, q, -1);
  };
  Complex psi{1.0, 0.0};
  const std::size_t lm = mu.size();
  for (std::size_t i = 0; i < lm; ++i)
    for (std::size_t j = i; j < lm; ++j) {
      const std::int64_t d = static_cast<std::int64_t>(j - i);
      psi *= f(mu[i] - mu[j], d) * f(la[i] - la[j + 1], d);
      psi /= f(la[i] - mu[j], d) * f(mu[i] - la[j + 1], d);
    }
  return psi;
}

Complex macdonald_eval_rec(const Signature& la, const std::vector<Complex>& z, Complex q, Complex t) {
  const std::size_t n = z.size();
  if (n == 0) return {1.0, 0.0};
  if (n == 1) return cpow_int(z[0], la[0]);
  Complex total{0.0, 0.0};
  const std::vector<Complex> zsub(z.begin(), z.end() - 1);
  const std::int64_t wla = la.weight();
  for_each_interlacing(la, [&](const std::vector<std::int64_t>& muv) {
    Signature mu(muv);
    std::int64_t wmu = 0;
    for (auto v : muv) wmu += v;
    total += macdonald_psi(la, mu, q, t) * macdonald_eval_rec(mu, zsub, q, t) * cpow_int(z.back(), wla - wmu);
  });
  return total;
}

}  // namespace

Complex macdonald_eval(const Signature& la, const std::vector<Complex>& z, Complex q, Complex t) {
  if (la.size() != z.size()) throw std::invalid_argument("macdonald_eval: length mismatch");
  if (z.size() > 5) throw std::invalid_argument("macdonald_eval: N > 5 (eigencheck scale only)");
  if (la.size() == 0) return {1.0, 0.0};
  if (la[la.size() - 1] < 0) {
    // P_{la + c.1}(z) = (prod z)^c P_la(z)
    const std::int64_t c = -la[la.size() - 1];
    std::vector<std::int64_t> shifted(la.parts());
    for (auto& v : shifted) v += c;
    Complex prod{1.0, 0.0};
    for (auto& zi : z) prod *= zi;
    return macdonald_eval_rec(Signature(shifted), z, q, t) / cpow_int(prod, c);
  }
  return macdonald_eval_rec(la, z, q, t);
}

Complex macdonald_d1_apply(const Signature& la, std::size_t n, Complex q, Complex t,
                           const std::vector<Complex>& z) {
  if (la.size() != n || z.size() != n) throw std::invalid_argument("macdonald_d1_apply: length mismatch");
  if (n == 0) return {0.0, 0.0};
  double zmax = 0.0;
  for (auto& zi : z) zmax = std::max(zmax, std::abs(zi));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) < 1e-9 * zmax)
        throw std::invalid_argument("macdonald_d1_apply: coincident sample points");

  std::int64_t shift = 0;
  Signature work = la;
  if (la[n - 1] < 0) {
    shift = -la[n - 1];
    std::vector<std::int64_t> s(la.parts());
    for (auto& v : s) v += shift;
    work = Signature(s);
  }
  const Complex pz = macdonald_eval(work, z, q, t);
  Complex total{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    Complex coef{1.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      coef *= (t * z[i] - z[j]) / (z[i] - z[j]);
    }
    std::vector<Complex> zq(z);
    zq[i] *= q;
    total += coef * macdonald_eval(work, zq, q, t);
  }
  Complex r = total / pz;
  if (shift != 0) r /= cpow_int(q, shift);
  return r;
}

}  // namespace iprob::symfun
