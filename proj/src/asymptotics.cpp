#include "iprob/asymptotics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "iprob/gammafun.hpp"
#include "iprob/linalg.hpp"

namespace iprob::asymptotics {

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
using Complex = std::complex<double>;
}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::liquid: return "liquid";
    case Region::frozen_empty: return "frozen_empty";
    case Region::frozen_full: return "frozen_full";
  }
  return "?";
}

RegionLabel limit_shape_density(const ShapePoint& p) {
  if (!(p.tau > 0 && p.nu > 0 && p.eta > 0))
    throw std::invalid_argument("limit_shape_density: tau, nu, eta must be > 0");
  const double tau = p.tau, nu = p.nu, eta = p.eta;
  const double st = std::sqrt(tau), se = std::sqrt(eta), sn = std::sqrt(nu);
  const double discr = (nu - (st - se) * (st - se)) * (nu - (st + se) * (st + se));

  // roots of tau z^2 + (eta - nu - tau) z + nu = 0
  const double b = eta - nu - tau;
  if (std::abs(discr) < 1e-12) {
    const double z0 = -b / (2.0 * tau);
    return {Region::liquid, z0 >= 0.0 ? 0.0 : 1.0, true};
  }
  if (discr < 0.0) {
    const Complex zc{-b / (2.0 * tau), std::sqrt(-(b * b - 4.0 * tau * nu)) / (2.0 * tau)};
    return {Region::liquid, std::arg(zc) / kPi, false};
  }
  if (sn > st + se) return {Region::frozen_empty, 0.0, false};
  // Case 3: sqrt(nu) < |sqrt(tau) - sqrt(eta)|
  if (tau > eta) return {Region::frozen_empty, 0.0, false};
  return {Region::frozen_full, 1.0, false};
}

namespace {

double digamma_r(double x) { return contour::digamma({x, 0.0}).real(); }
double trigamma_r(double x) { return contour::trigamma({x, 0.0}).real(); }
double tetragamma_r(double x) { return contour::tetragamma({x, 0.0}).real(); }

// bisection + Newton polish for a strictly decreasing function
double decreasing_root(double (*fn)(double), double target, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) > target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lyapunov_semidiscrete(int p) {
  if (p < 1) throw std::invalid_argument("lyapunov_semidiscrete: p >= 1");
  // H'_p(z) = p - (psi(z+p) - psi(z)), strictly increasing in z from -inf to p
  auto hp = [&](double z) { return p - (digamma_r(z + p) - digamma_r(z)); };
  double lo = 1e-12, hi = 1.0;
  while (hp(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hp(mid) < 0.0) lo = mid; else hi = mid;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {  // Newton polish
    const double f = hp(z);
    const double df = -(trigamma_r(z + p) - trigamma_r(z));
    const double znew = z - f / df;
    if (znew > 0.0) z = znew;
  }
  double h = 0.5 * p * p + p * z;
  for (int m = 0; m < p; ++m) h -= std::log(z + m);
  return h;
}

double lyapunov_continuous(int p) {
  if (p < 1) throw std::invalid_argument("lyapunov_continuous: p >= 1");
  return (static_cast<double>(p) * p * p - p) / 24.0;
}

KPZConstants kpz_constants(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kpz_constants: kappa > 0");
  double hi = 1.0;
  while (trigamma_r(hi) > kappa) hi *= 2.0;
  double s = decreasing_root(&trigamma_r, kappa, 1e-6, hi);
  for (int it = 0; it < 8; ++it) {  // Newton to 1e-12
    const double f = trigamma_r(s) - kappa;
    const double snew = s - f / tetragamma_r(s);
    if (snew > 0.0) s = snew;
  }
  KPZConstants c;
  c.s = s;
  c.f = kappa * s - digamma_r(s);
  c.g = -tetragamma_r(s);
  return c;
}

namespace {

struct NodeSet {
  std::vector<Complex> z;
  std::vector<Complex> wt;  // includes 1/(2 pi i)
};

NodeSet circle_nodes(double radius, int n) {
  NodeSet s;
  s.z.resize(n);
  s.wt.resize(n);
  for (int m = 0; m < n; ++m) {
    const double th = 2.0 * kPi * (m + 0.5) / n;
    const Complex e{std::cos(th), std::sin(th)};
    s.z[m] = radius * e;
    s.wt[m] = radius * e / static_cast<double>(n);
  }
  return s;
}

// truncated vertical line Re = x0, sinh-clustered, weight includes 1/(2 pi i)
NodeSet vline_nodes(double x0, double truncation, int n) {
  NodeSet s;
  s.z.resize(n + 1);
  s.wt.resize(n + 1);
  const double beta = 2.0;
  for (int m = 0; m <= n; ++m) {
    const double u = 2.0 * static_cast<double>(m) / n - 1.0;
    const double y = truncation * std::sinh(beta * u) / std::sinh(beta);
    const double dy = truncation * beta * std::cosh(beta * u) / std::sinh(beta) * (2.0 / n);
    const double w = (m == 0 || m == n) ? 0.5 : 1.0;
    s.z[m] = {x0, y};
    s.wt[m] = w * Complex{0.0, dy} / Complex{0.0, 2.0 * kPi};
  }
  return s;
}

// wedge through `vertex` opening along `dir`, rays at dir +- pi/3; composite
// Gauss-Legendre with geometrically graded panels; weight includes 1/(2 pi i);
// upward orientation. `n` is the points-per-panel resolution knob.
NodeSet wedge_nodes(double vertex, double dir, double truncation, int n) {
  NodeSet s;
  const double t1 = dir - kPi / 3.0, t2 = dir + kPi / 3.0;
  const double in_angle = std::sin(t1) < 0.0 ? t1 : t2;
  const double out_angle = std::sin(t1) < 0.0 ? t2 : t1;
  std::vector<double> gx, gw;
  linalg::gauss_legendre(std::max(8, n), gx, gw);
  std::vector<double> cuts{0.0, 0.5, 1.0, 2.0};
  while (cuts.back() < truncation) cuts.push_back(std::min(2.0 * cuts.back(), truncation));
  auto ray = [&](double angle, bool inward) {
    const Complex e{std::cos(angle), std::sin(angle)};
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double a = cuts[p], h = cuts[p + 1] - cuts[p];
      for (std::size_t m = 0; m < gx.size(); ++m) {
        const double r = a + h * gx[m];
        s.z.push_back(vertex + r * e);
        s.wt.push_back((inward ? -1.0 : 1.0) * gw[m] * h * e / Complex{0.0, 2.0 * kPi});
      }
    }
  };
  ray(in_angle, true);
  ray(out_angle, false);
  return s;
}

// sum over l-tuples of node indices of det[K(i,j)] prod wt, direct LU path
double fredholm_series_direct(const std::vector<Complex>& a, int n, int ell_max) {
  double total = 1.0;
  std::vector<Complex> kmat;
  for (int ell = 1; ell <= ell_max; ++ell) {
    std::vector<int> idx(ell, 0);
    Complex sum{0.0, 0.0};
    kmat.assign(ell * ell, Complex{});
    while (true) {
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j) kmat[i * ell + j] = a[idx[i] * n + idx[j]];
      std::vector<Complex> work = kmat;
      sum += linalg::det_inplace(work, ell);
      int p = ell - 1;
      while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
      if (p < 0) break;
    }
    double fact = 1.0;
    for (int i = 2; i <= ell; ++i) fact *= i;
    total += (sum / fact).real();
  }
  return total;
}

}  // namespace

double laplace_fredholm(double u, double t, int n_levels, int ell_max, double delta1,
                        double delta2) {
  if (!(u > 0.0)) throw std::invalid_argument("laplace_fredholm: u > 0");
  if (!(delta2 > 0.0 && delta2 < 1.0 && delta1 > 0.0 && delta1 < delta2 / 2.0))
    throw std::invalid_argument("laplace_fredholm: need 0 < delta2 < 1, 0 < delta1 < delta2/2");
  if (ell_max > 3) throw std::invalid_argument("laplace_fredholm: ell_max <= 3");

  // s-line truncation from the Gaussian factor e^{-t y^2 / 2} and the
  // Gamma-pair decay e^{-pi |y|}
  double y_cap = 8.0;
  while (0.5 * t * y_cap * y_cap + kPi * y_cap < 40.0) y_cap *= 1.5;

  auto eval = [&](int n_v, int n_s) -> double {
    const NodeSet vs = circle_nodes(delta1, n_v);
    const NodeSet ss = vline_nodes(delta2, y_cap, n_s);
    const double logu = std::log(u);
    // kernel K(v, v') = (1/2pi i) int ds Gpair (G(v)/G(s+v))^N u^s e^{t((s+v)^2-v^2)/2} / (v+s-v')
    std::vector<Complex> kern(n_v * n_v, Complex{});
    for (int a = 0; a < n_v; ++a) {
      const Complex v = vs.z[a];
      const Complex lg_v = contour::log_gamma(v);
      std::vector<Complex> pref(ss.z.size());
      for (std::size_t m = 0; m < ss.z.size(); ++m) {
        const Complex s = ss.z[m];
        const Complex gpair = -kPi / std::sin(kPi * s);
        pref[m] = ss.wt[m] * gpair *
                  std::exp(static_cast<double>(n_levels) * (lg_v - contour::log_gamma(s + v)) +
                           s * logu + 0.5 * t * ((s + v) * (s + v) - v * v));
      }
      for (int b = 0; b < n_v; ++b) {
        Complex acc{0.0, 0.0};
        for (std::size_t m = 0; m < ss.z.size(); ++m) acc += pref[m] / (v + ss.z[m] - vs.z[b]);
        kern[a * n_v + b] = vs.wt[a] * acc;
      }
    }
    return fredholm_series_direct(kern, n_v, ell_max);
  };

  double prev = eval(32, 160);
  const double cur = eval(48, 240);
  if (std::abs(cur - prev) > 1e-6)
    throw std::runtime_error("laplace_fredholm: vertical truncation did not converge");
  return cur;
}

double tracy_widom_cdf(double r, double g, int ell_max) {
  if (!(g > 0.0)) throw std::invalid_argument("tracy_widom_cdf: g > 0");
  if (ell_max < 0) throw std::invalid_argument("tracy_widom_cdf: ell_max >= 0");
  // cubic decay sets the ray truncation: (g/6) T^3 - |r| T/2 >= 40
  double cap = 3.0;
  while (g / 6.0 * cap * cap * cap - std::abs(r) * cap / 2.0 - 0.5 * cap < 40.0) cap *= 1.25;

  auto eval = [&](int n_a, int n_b) -> double {
    const NodeSet as = wedge_nodes(-0.5, kPi, cap, n_a);        // opens leftward
    const NodeSet bs = wedge_nodes(0.5, 0.0, cap, n_b);         // opens rightward
    auto loge = [&](Complex z) { return -(g / 6.0) * z * z * z + r * z; };
    const int na = static_cast<int>(as.z.size());
    std::vector<Complex> kern(na * na, Complex{});
    for (int i = 0; i < na; ++i) {
      const Complex a = as.z[i];
      const Complex la = loge(a);
      std::vector<Complex> pref(bs.z.size());
      for (std::size_t m = 0; m < bs.z.size(); ++m)
        pref[m] = bs.wt[m] * std::exp(la - loge(bs.z[m])) / (a - bs.z[m]);
      for (int j = 0; j < na; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t m = 0; m < bs.z.size(); ++m) acc += pref[m] / (bs.z[m] - as.z[j]);
        kern[i * na + j] = as.wt[i] * acc;
      }
    }
    if (ell_max <= 3) return fredholm_series_direct(kern, na, ell_max);
    const auto e = linalg::elementary_symmetric(kern, na, std::min(ell_max, na));
    double total = 1.0;
    for (int ell = 1; ell <= std::min(ell_max, na); ++ell) total += e[ell].real();
    return total;
  };

  const double v1 = eval(10, 12);
  const double v2 = eval(14, 16);
  if (std::abs(v2 - v1) > 1e-7 + 1e-7 * std::abs(v2))
    throw std::runtime_error("tracy_widom_cdf: truncation non-convergence");
  return v2;
}

}  // namespace iprob::asymptotics
