#include "iprob/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iprob/linalg.hpp"
#include "iprob/symfun.hpp"

namespace iprob::linalg {

Complex det_inplace(std::vector<Complex>& a, int n) {
  Complex det{1.0, 0.0};
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) == 0.0) return {0.0, 0.0};
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const Complex f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

std::vector<Complex> elementary_symmetric(const std::vector<Complex>& a, int n, int ell_max) {
  // radius balancing the coefficient sizes: 1 / (spectral radius estimate)
  std::vector<Complex> v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = Complex{std::cos(0.7 * i + 0.3), std::sin(1.3 * i)};
  double rho = 0.0;
  for (int it = 0; it < 25; ++it) {
    double norm = 0.0;
    for (int r = 0; r < n; ++r) {
      Complex s{0.0, 0.0};
      for (int c = 0; c < n; ++c) s += a[r * n + c] * v[c];
      w[r] = s;
      norm += std::norm(s);
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    rho = norm;
    for (int r = 0; r < n; ++r) v[r] = w[r] / norm;
  }
  const double s = rho > 1.0 ? 1.0 / rho : 1.0;
  const int m = n + 1;  // det(I + zA) has degree n; m samples are alias-free
  std::vector<Complex> vals(m);
  for (int j = 0; j < m; ++j) {
    const double th = 2.0 * 3.14159265358979323846 * j / m;
    const Complex z = s * Complex{std::cos(th), std::sin(th)};
    std::vector<Complex> work(n * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) work[r * n + c] = z * a[r * n + c] + (r == c ? 1.0 : 0.0);
    vals[j] = det_inplace(work, n);
  }
  std::vector<Complex> e(ell_max + 1);
  for (int ell = 0; ell <= ell_max; ++ell) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < m; ++j) {
      const double th = -2.0 * 3.14159265358979323846 * j * ell / m;
      acc += vals[j] * Complex{std::cos(th), std::sin(th)};
    }
    e[ell] = acc / (static_cast<double>(m) * std::pow(s, ell));
  }
  return e;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-based initial guess
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], reversing order
    weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

}  // namespace iprob::linalg

namespace iprob::observables {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

Complex cpow_int(Complex z, long k) {
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

struct CircleGrid {
  std::vector<Complex> w;   // nodes
  std::vector<Complex> wt;  // quadrature weights including 1/(2 pi i)
};

CircleGrid circle_grid(Complex center, double radius, int n) {
  CircleGrid g;
  g.w.resize(n);
  g.wt.resize(n);
  for (int m = 0; m < n; ++m) {
    const double th = 2.0 * kPi * (m + 0.5) / n;
    const Complex e{std::cos(th), std::sin(th)};
    g.w[m] = center + radius * e;
    g.wt[m] = radius * e / static_cast<double>(n);
  }
  return g;
}

}  // namespace

double density_vertical(double t, int h, std::int64_t n, double tolerance) {
  if (t < 0 || h < 1) throw std::invalid_argument("density_vertical: need t >= 0, h >= 1");
  const double r_w = 0.25;
  const double r_q = n <= 20 ? 0.5 : 0.75;  // keep q^{-n-1} below the roundoff floor
  auto eval = [&](int nodes) -> Complex {
    const auto gq = circle_grid({0.0, 0.0}, r_q, nodes);
    const auto gw = circle_grid({1.0, 0.0}, r_w, nodes);
    Complex total{0.0, 0.0};
    for (int a = 0; a < nodes; ++a) {
      const Complex q = gq.w[a];
      Complex inner{0.0, 0.0};
      for (int b = 0; b < nodes; ++b) {
        const Complex w = gw.w[b];
        inner += gw.wt[b] * cpow_int((q * w - 1.0) / (w - 1.0), h) * std::exp(t * (q - 1.0) * w) /
                 ((q - 1.0) * w);
      }
      total += gq.wt[a] * inner / cpow_int(q, n + 1);
    }
    return total;
  };
  int nodes = 128;
  Complex prev = eval(nodes);
  double delta = 1e300;
  while (nodes < 4096) {
    nodes *= 2;
    const Complex cur = eval(nodes);
    delta = std::abs(cur - prev);
    prev = cur;
    if (delta < tolerance) break;
  }
  if (delta >= tolerance) throw std::runtime_error("density_vertical: quadrature did not converge");
  if (std::abs(prev.imag()) > 1e-9)
    throw std::logic_error("density_vertical: imaginary part above 1e-9");
  return prev.real();
}

namespace {

// f(z) = e^{(q-1) t z} / (1-z)^N
Complex f_factor(Complex z, double q, double t, int n_levels) {
  return std::exp((q - 1.0) * t * z) / cpow_int(1.0 - z, n_levels);
}

struct Partition {
  std::vector<int> parts;            // decreasing
  std::map<int, int> multiplicity;   // value -> m_v
};

void enumerate_partitions(int k, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
  if (k == 0) {
    Partition p;
    p.parts = cur;
    for (int v : cur) p.multiplicity[v]++;
    out.push_back(std::move(p));
    return;
  }
  for (int v = std::min(k, max_part); v >= 1; --v) {
    cur.push_back(v);
    enumerate_partitions(k - v, v, cur, out);
    cur.pop_back();
  }
}

// species matrix A_v[a][b] = wt_a * (1-q)^v * f(w_a) f(q w_a) ... f(q^{v-1} w_a) / (w_a q^v - w_b)
std::vector<Complex> species_matrix(const CircleGrid& g, int v, double q, double t, int n_levels) {
  const int n = static_cast<int>(g.w.size());
  std::vector<Complex> chain(n);
  for (int a = 0; a < n; ++a) {
    Complex c = std::pow(1.0 - q, v);
    for (int m = 0; m < v; ++m) c *= f_factor(std::pow(q, m) * g.w[a], q, t, n_levels);
    chain[a] = c;
  }
  std::vector<Complex> mat(n * n);
  const double qv = std::pow(q, v);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mat[a * n + b] = g.wt[a] * chain[a] / (g.w[a] * qv - g.w[b]);
  return mat;
}

// iterated l-dim quadrature of det[K_{v_i}(w_i, w_j)] prod_i chain_{v_i}(w_i)
Complex partition_tensor(const CircleGrid& g, const std::vector<int>& parts, double q, double t,
                         int n_levels) {
  const int n = static_cast<int>(g.w.size());
  const int ell = static_cast<int>(parts.size());
  std::vector<Complex> chain(ell * n);
  std::vector<double> qv(ell);
  for (int i = 0; i < ell; ++i) {
    qv[i] = std::pow(q, parts[i]);
    for (int a = 0; a < n; ++a) {
      Complex c = std::pow(1.0 - q, parts[i]);
      for (int m = 0; m < parts[i]; ++m) c *= f_factor(std::pow(q, m) * g.w[a], q, t, n_levels);
      chain[i * n + a] = c;
    }
  }
  std::vector<int> idx(ell, 0);
  std::vector<Complex> kmat(ell * ell);
  Complex total{0.0, 0.0};
  while (true) {
    Complex pref{1.0, 0.0};
    for (int i = 0; i < ell; ++i) pref *= g.wt[idx[i]] * chain[i * n + idx[i]];
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) kmat[i * ell + j] = 1.0 / (g.w[idx[i]] * qv[i] - g.w[idx[j]]);
    std::vector<Complex> work = kmat;
    total += pref * linalg::det_inplace(work, ell);
    int p = ell - 1;
    while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
    if (p < 0) break;
  }
  return total;
}

// 2-species coefficient [z1^{m1} z2^{m2}] det(I + z1 A1 + z2 A2), exact DFT
Complex coeff_two_species(const std::vector<Complex>& a1, const std::vector<Complex>& a2, int n,
                          int m1, int m2) {
  double fro = 0.0;
  for (auto& v : a1) fro += std::norm(v);
  for (auto& v : a2) fro += std::norm(v);
  fro = std::sqrt(fro);
  const double s = fro > 1.0 ? 1.0 / fro : 1.0;
  const int m = n + 1;
  Complex acc{0.0, 0.0};
  std::vector<Complex> work(n * n);
  for (int j1 = 0; j1 < m; ++j1)
    for (int j2 = 0; j2 < m; ++j2) {
      const double th1 = 2.0 * kPi * j1 / m, th2 = 2.0 * kPi * j2 / m;
      const Complex z1 = s * Complex{std::cos(th1), std::sin(th1)};
      const Complex z2 = s * Complex{std::cos(th2), std::sin(th2)};
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          work[r * n + c] = z1 * a1[r * n + c] + z2 * a2[r * n + c] + (r == c ? 1.0 : 0.0);
      std::vector<Complex> w2 = work;
      const Complex d = linalg::det_inplace(w2, n);
      const double ph = -(th1 * m1 + th2 * m2);
      acc += d * Complex{std::cos(ph), std::sin(ph)};
    }
  return acc / (static_cast<double>(m) * m * std::pow(s, m1 + m2));
}

// contribution of one partition term at a given node count
Complex partition_value(const Partition& p, double q, double t, int n_levels, int nodes) {
  const double radius = (1.0 - q) / 4.0;
  const CircleGrid g = circle_grid({1.0, 0.0}, radius, nodes);
  const int ell = static_cast<int>(p.parts.size());
  const int n_species = static_cast<int>(p.multiplicity.size());
  if (ell <= 4 || n_species >= 3) {
    double msum = 1.0;
    for (auto& [v, mv] : p.multiplicity)
      for (int i = 2; i <= mv; ++i) msum *= i;
    return partition_tensor(g, p.parts, q, t, n_levels) / msum;
  }
  if (n_species == 1) {
    const auto a = species_matrix(g, p.parts[0], q, t, n_levels);
    return linalg::elementary_symmetric(a, nodes, ell)[ell];
  }
  auto it = p.multiplicity.begin();
  const int v1 = it->first, m1 = it->second;
  ++it;
  const int v2 = it->first, m2 = it->second;
  const auto a1 = species_matrix(g, v1, q, t, n_levels);
  const auto a2 = species_matrix(g, v2, q, t, n_levels);
  return coeff_two_species(a1, a2, nodes, m1, m2);
}

double qmoments_unnested(const MomentRequest& req, double tolerance) {
  const int k = static_cast<int>(req.levels.size());
  const int n_levels = req.levels[0];
  std::vector<Partition> partitions;
  std::vector<int> cur;
  enumerate_partitions(k, k, cur, partitions);

  Complex total{0.0, 0.0};
  for (const auto& p : partitions) {
    const int ell = static_cast<int>(p.parts.size());
    const int n_species = static_cast<int>(p.multiplicity.size());
    // node schedule keyed by the quadrature dimension
    std::vector<int> schedule;
    if (ell <= 4 || n_species >= 3) {
      if (ell <= 1) schedule = {128, 256, 512};
      else if (ell == 2) schedule = {64, 128, 256};
      else if (ell == 3) schedule = {48, 96, 192};
      else if (ell == 4) schedule = {32, 64, 96};
      else schedule = {24, 32};
    } else if (n_species == 1) {
      schedule = {64, 96};
    } else {
      schedule = {48};
    }
    Complex value = partition_value(p, req.q, req.t, n_levels, schedule[0]);
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      const Complex next = partition_value(p, req.q, req.t, n_levels, schedule[i]);
      const double delta = std::abs(next - value);
      value = next;
      if (delta < tolerance / (2.0 * partitions.size())) break;
    }
    total += value;
  }
  return (total * symfun::q_factorial(k, req.q)).real();
}

}  // namespace

namespace {

// iterated tensor quadrature for integrands of the form
//   prod_j node(j, z_j) * prod_{A<B} pair(A, B, z_A, z_B)
// over per-dimension circles, with cached node and pair tables.
Complex product_tensor(const std::vector<Complex>& centers, const std::vector<double>& radii,
                       int nodes,
                       const std::function<Complex(int, Complex)>& node_factor,
                       const std::function<Complex(int, int, Complex, Complex)>& pair_factor) {
  const int k = static_cast<int>(centers.size());
  std::vector<std::vector<Complex>> w(k), gw(k);
  for (int d = 0; d < k; ++d) {
    w[d].resize(nodes);
    gw[d].resize(nodes);
    for (int m = 0; m < nodes; ++m) {
      const double th = 2.0 * kPi * (m + 0.5) / nodes;
      const Complex e{std::cos(th), std::sin(th)};
      w[d][m] = centers[d] + radii[d] * e;
      gw[d][m] = radii[d] * e / static_cast<double>(nodes) * node_factor(d, w[d][m]);
    }
  }
  std::vector<std::vector<Complex>> pair(k * k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      auto& tbl = pair[a * k + b];
      tbl.resize(nodes * nodes);
      for (int ia = 0; ia < nodes; ++ia)
        for (int ib = 0; ib < nodes; ++ib)
          tbl[ia * nodes + ib] = pair_factor(a, b, w[a][ia], w[b][ib]);
    }
  Complex total{0.0, 0.0};
  std::vector<int> idx(k, 0);
  std::vector<Complex> partial(k + 1);
  partial[0] = {1.0, 0.0};
  int d = 0;
  while (true) {
    for (; d < k; ++d) {
      const int a = idx[d];
      Complex v = partial[d] * gw[d][a];
      for (int up = 0; up < d; ++up) v *= pair[up * k + d][idx[up] * nodes + a];
      partial[d + 1] = v;
    }
    total += partial[k];
    d = k - 1;
    while (d >= 0 && ++idx[d] == nodes) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return total;
}

// node-doubling ladder with geometric error extrapolation: for spectral
// quadratures err(2n) ~ delta_cur (delta_cur / delta_prev)^2
Complex doubling_ladder(const std::function<Complex(int)>& eval, double tol, const char* what) {
  int nodes = 64;
  Complex prev = eval(nodes);
  double delta_prev = -1.0;
  while (nodes < 1024) {
    nodes *= 2;
    const Complex cur = eval(nodes);
    const double delta = std::abs(cur - prev);
    prev = cur;
    if (delta < 0.01 * tol) return cur;
    if (delta_prev > 0.0) {
      const double ratio = std::min(delta / delta_prev, 1.0);
      if (delta * ratio * ratio < tol) return cur;
    }
    delta_prev = delta;
  }
  throw std::runtime_error(what);
}

}  // namespace

double qmoments(const MomentRequest& req, MomentMode mode, double tolerance) {
  const int k = static_cast<int>(req.levels.size());
  if (k == 0) return 1.0;
  for (int i = 0; i < k; ++i) {
    if (req.levels[i] < 1) throw std::invalid_argument("qmoments: levels must be >= 1");
    if (i && req.levels[i] > req.levels[i - 1])
      throw std::invalid_argument("qmoments: levels must be weakly decreasing");
  }
  if (!(req.q > 0.0 && req.q < 1.0)) throw std::invalid_argument("qmoments: need 0 < q < 1");

  if (mode == MomentMode::unnested) {
    if (k > 8) throw std::invalid_argument("qmoments: unnested limited to k <= 8 (partition guard)");
    for (int i = 1; i < k; ++i)
      if (req.levels[i] != req.levels[0])
        throw std::invalid_argument("qmoments: unnested requires identical levels");
    return qmoments_unnested(req, tolerance);
  }

  if (k > 4) throw std::invalid_argument("qmoments: nested limited to k <= 4");
  contour::NestedFamily fam;
  try {
    fam = contour::build_nested(contour::NestedKind::around_one_q, req.q, k);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("qmoments: nesting infeasible (") + e.what() +
                             "); use the unnested mode");
  }
  const double q = req.q, t = req.t;
  const auto& lv = req.levels;
  std::vector<Complex> centers(k);
  std::vector<double> radii(k);
  for (int d = 0; d < k; ++d) {
    centers[d] = fam.contours[d].centre();
    radii[d] = fam.contours[d].rad();
  }
  auto node_factor = [&](int j, Complex z) {
    return std::exp((q - 1.0) * t * z) / cpow_int(1.0 - z, lv[j]) / z;
  };
  auto pair_factor = [&](int, int, Complex za, Complex zb) {
    return (za - zb) / (za - q * zb);
  };
  const Complex value = doubling_ladder(
      [&](int nodes) { return product_tensor(centers, radii, nodes, node_factor, pair_factor); },
      std::max(tolerance, 1e-9), "qmoments: nested quadrature did not converge");
  const double sign = (k % 2) ? -1.0 : 1.0;
  const double qpref = std::pow(q, 0.5 * k * (k - 1));
  return (sign * qpref * value).real();
}

double polymer_moments_integral(double tau, const std::vector<int>& levels, double tolerance) {
  const int k = static_cast<int>(levels.size());
  if (k == 0) return 1.0;
  if (k > 4) throw std::invalid_argument("polymer_moments_integral: k <= 4");
  for (int i = 0; i < k; ++i) {
    if (levels[i] < 1) throw std::invalid_argument("polymer_moments_integral: levels >= 1");
    if (i && levels[i] > levels[i - 1])
      throw std::invalid_argument("polymer_moments_integral: levels weakly decreasing");
  }
  auto fam = contour::build_nested(contour::NestedKind::around_zero_shift, 0.5, k);
  std::vector<Complex> centers(k);
  std::vector<double> radii(k);
  for (int d = 0; d < k; ++d) {
    centers[d] = fam.contours[d].centre();
    radii[d] = fam.contours[d].rad();
  }
  auto node_factor = [&](int j, Complex w) { return std::exp(tau * w) / cpow_int(w, levels[j]); };
  auto pair_factor = [&](int, int, Complex wa, Complex wb) {
    return (wa - wb) / (wa - wb - 1.0);
  };
  const Complex value = doubling_ladder(
      [&](int nodes) { return product_tensor(centers, radii, nodes, node_factor, pair_factor); },
      std::max(tolerance, 1e-10), "polymer_moments_integral: quadrature did not converge");
  return std::exp(tau * k / 2.0) * value.real();
}

namespace {

// ordered states M (M_1 >= ... >= M_k >= 1) with M <= target pointwise
void enumerate_states(const std::vector<int>& target, int pos, int cap, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (pos == static_cast<int>(target.size())) {
    out.push_back(cur);
    return;
  }
  for (int v = 1; v <= std::min(cap, target[pos]); ++v) {
    cur.push_back(v);
    enumerate_states(target, pos + 1, v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double polymer_moments_ode_oracle(double tau, const std::vector<int>& levels) {
  const int k = static_cast<int>(levels.size());
  if (k == 0) return 1.0;
  if (k > 3 || levels[0] > 6)
    throw std::invalid_argument("polymer_moments_ode_oracle: k <= 3, N_1 <= 6");
  for (int i = 1; i < k; ++i)
    if (levels[i] > levels[i - 1]) throw std::invalid_argument("levels weakly decreasing");

  std::vector<std::vector<int>> states;
  std::vector<int> cur;
  enumerate_states(levels, 0, levels[0], cur, states);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);

  // dF(M)/dtau = sum over runs of equal values: m F(M - e_last) + m(m-1)/2 F(M)
  auto deriv = [&](const std::vector<double>& F, std::vector<double>& dF) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto& M = states[i];
      double d = 0.0;
      int a = 0;
      while (a < k) {
        int b = a;
        while (b + 1 < k && M[b + 1] == M[a]) ++b;
        const int m = b - a + 1;
        std::vector<int> lower = M;
        lower[b] -= 1;
        if (lower[b] >= 1) {
          auto it = index.find(lower);
          if (it != index.end()) d += m * F[it->second];
          // states outside the pointwise-closed set cannot occur
        }
        d += 0.5 * m * (m - 1) * F[i];
        a = b + 1;
      }
      dF[i] = d;
    }
  };

  std::vector<double> F(states.size(), 0.0);
  std::vector<int> ones(k, 1);
  F[index[ones]] = 1.0;

  const int steps = 2000;
  const double dt = tau / steps;
  std::vector<double> k1(F.size()), k2(F.size()), k3(F.size()), k4(F.size()), tmp(F.size());
  for (int s = 0; s < steps; ++s) {
    deriv(F, k1);
    for (std::size_t i = 0; i < F.size(); ++i) tmp[i] = F[i] + 0.5 * dt * k1[i];
    deriv(tmp, k2);
    for (std::size_t i = 0; i < F.size(); ++i) tmp[i] = F[i] + 0.5 * dt * k2[i];
    deriv(tmp, k3);
    for (std::size_t i = 0; i < F.size(); ++i) tmp[i] = F[i] + dt * k3[i];
    deriv(tmp, k4);
    for (std::size_t i = 0; i < F.size(); ++i)
      F[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return std::exp(tau * k / 2.0) * F[index[levels]];
}

SeriesResult qlaplace_series(const LaplaceRequest& req) {
  const double q = req.q, t = req.t;
  const int N = req.n_levels;
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("qlaplace_series: need 0 < q < 1");
  if (req.ell_max < 1 || req.n_max < 2) throw std::invalid_argument("qlaplace_series: truncation orders >= 1");
  const double radius = (1.0 - q) / 4.0;

  auto eval = [&](int nodes, double& tail) -> Complex {
    const CircleGrid g = circle_grid({1.0, 0.0}, radius, nodes);
    std::vector<Complex> kernel(nodes * nodes, Complex{0.0, 0.0});
    std::vector<Complex> chain(nodes, Complex{1.0, 0.0});
    double prev_mag = 0.0;
    tail = 0.0;
    for (int nn = 1; nn <= req.n_max; ++nn) {
      Complex zfac = cpow_int((1.0 - q) * req.zeta, nn);
      const double qn = std::pow(q, nn);
      double mag = 0.0;
      for (int a = 0; a < nodes; ++a) {
        chain[a] *= f_factor(std::pow(q, nn - 1) * g.w[a], q, t, N);
        const Complex row = zfac * chain[a];
        mag = std::max(mag, std::abs(row));
        for (int b = 0; b < nodes; ++b) kernel[a * nodes + b] += row / (qn * g.w[a] - g.w[b]);
      }
      if (nn > 3 && mag > prev_mag && mag > 1e3)
        throw std::runtime_error("qlaplace_series: n-sum diverging (|zeta| too large)");
      if (nn == req.n_max) {
        const double ratio = prev_mag > 0 ? std::min(mag / prev_mag, 0.999) : 0.5;
        tail = mag * ratio / (1.0 - ratio);
      }
      prev_mag = mag;
    }
    std::vector<Complex> a(nodes * nodes);
    for (int r = 0; r < nodes; ++r)
      for (int c = 0; c < nodes; ++c) a[r * nodes + c] = g.wt[r] * kernel[r * nodes + c];
    const int lmax = std::min(req.ell_max, nodes);
    const auto e = linalg::elementary_symmetric(a, nodes, lmax);
    Complex total{1.0, 0.0};
    for (int ell = 1; ell <= lmax; ++ell) total += e[ell];
    tail += std::abs(e[lmax]);
    return total;
  };

  double tail1 = 0.0, tail2 = 0.0;
  const Complex v1 = eval(48, tail1);
  const Complex v2 = eval(96, tail2);
  SeriesResult r;
  r.value = v2;
  r.tail_bound = tail2 + std::abs(v2 - v1);
  return r;
}

Complex qlaplace_poisson_oracle(double q, double t, Complex zeta) {
  // sum over the Poisson(t) law of la of 1/((1-q) q^la zeta; q)_inf
  Complex total{0.0, 0.0};
  double logp = -t;  // log pmf at 0
  for (int la = 0; la <= 400; ++la) {
    if (la > 0) logp += std::log(t) - std::log(static_cast<double>(la));
    const double pmf = std::exp(logp);
    total += pmf / symfun::q_pochhammer((1.0 - q) * std::pow(q, la) * zeta, {q, 0.0}, -1);
    if (la > t + 10 * std::sqrt(t) + 20 && pmf < 1e-18) break;
  }
  return total;
}

Complex qlaplace_n1_series(double q, double t, Complex zeta) {
  Complex total{0.0, 0.0};
  Complex term{1.0, 0.0};
  for (int n = 0; n <= 500; ++n) {
    if (n > 0) term *= (1.0 - q) * zeta / (1.0 - std::pow(q, n));
    const Complex add = term * std::exp((std::pow(q, n) - 1.0) * t);
    total += add;
    if (n > 3 && std::abs(add) < 1e-16 * std::abs(total)) break;
  }
  return total;
}

Complex mellin_barnes_n1(double q, double t, Complex zeta, double delta, double tolerance) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("mellin_barnes_n1: need 0 < delta < 1");
  const Complex W = (q - 1.0) * zeta;
  const double absW = std::abs(W);
  if (!(absW < 1.0))
    throw std::runtime_error("mellin_barnes_n1: (1-q)|zeta| must be < 1 for the tail to decay");
  if (std::abs(std::arg(zeta)) >= kPi) throw std::invalid_argument("mellin_barnes_n1: |arg zeta| < pi");

  const Complex logW = std::log(W);  // principal branch
  const Complex qq{q, 0.0};
  const Complex pochq = symfun::q_pochhammer(qq, qq, -1);
  auto integrand = [&](Complex s) -> Complex {
    const Complex gpair = -kPi / std::sin(kPi * s);
    const Complex qs1 = std::exp((s + 1.0) * std::log(q));
    return gpair * std::exp(s * logW) * std::exp((std::exp(s * std::log(q)) - 1.0) * t) *
           symfun::q_pochhammer(qs1, qq, -1) / pochq;
  };

  const double R = 1.5 * delta;  // bulge reaches Re s = -delta/2, left of 0
  const double X = delta + std::max(40.0 / -std::log(absW), 4.0);

  // staple contour: bottom ray (X -> delta), left semicircle around 0, top
  // ray; composite Gauss-Legendre per segment
  auto eval = [&](int panels) -> Complex {
    std::vector<double> gx, gww;
    linalg::gauss_legendre(16, gx, gww);
    Complex total{0.0, 0.0};
    auto segment = [&](const std::function<Complex(double)>& gamma,
                       const std::function<Complex(double)>& dgamma) {
      for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels, h = 1.0 / panels;
        for (std::size_t m = 0; m < gx.size(); ++m) {
          const double u = a + h * gx[m];
          total += gww[m] * h * integrand(gamma(u)) * dgamma(u);
        }
      }
    };
    // bottom ray, Im = -R, from X to delta
    segment([&](double u) { return Complex{X + (delta - X) * u, -R}; },
            [&](double) { return Complex{delta - X, 0.0}; });
    // left semicircle: s = delta + R e^{i th}, th from -pi/2 to -3pi/2
    segment(
        [&](double u) {
          const double th = -0.5 * kPi - kPi * u;
          return delta + R * Complex{std::cos(th), std::sin(th)};
        },
        [&](double u) {
          const double th = -0.5 * kPi - kPi * u;
          return -kPi * R * Complex{0.0, 1.0} * Complex{std::cos(th), std::sin(th)};
        });
    // top ray, Im = +R, from delta to X
    segment([&](double u) { return Complex{delta + (X - delta) * u, R}; },
            [&](double) { return Complex{X - delta, 0.0}; });
    return total / Complex{0.0, 2.0 * kPi};
  };

  int panels = std::max(8, static_cast<int>(X - delta) / 2);
  Complex prev = eval(panels);
  for (int d = 0; d < 4; ++d) {
    panels *= 2;
    const Complex cur = eval(panels);
    if (std::abs(cur - prev) < tolerance) return cur;
    prev = cur;
  }
  throw std::runtime_error("mellin_barnes_n1: truncation failure (no quadrature convergence)");
}

}  // namespace iprob::observables
