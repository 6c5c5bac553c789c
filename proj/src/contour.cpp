#include "iprob/contour.hpp"

#include <cmath>
#include <stdexcept>

namespace iprob::contour {

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPiInv = 1.0 / (2.0 * kPi);
}  // namespace

Contour Contour::circle(Complex center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be > 0");
  Contour c;
  c.kind = Kind::circle;
  c.center = center;
  c.radius = radius;
  return c;
}

Contour Contour::diameter_circle(double left, double right) {
  if (!(right > left)) throw std::invalid_argument("diameter_circle: need right > left");
  Contour c;
  c.kind = Kind::diameter_circle;
  c.left = left;
  c.right = right;
  c.center = {0.5 * (left + right), 0.0};
  c.radius = 0.5 * (right - left);
  return c;
}

Contour Contour::vline(double re, double truncation) {
  if (!(truncation > 0.0)) throw std::invalid_argument("vline: truncation must be > 0");
  Contour c;
  c.kind = Kind::vline;
  c.re = re;
  c.truncation = truncation;
  return c;
}

Contour Contour::wedge(Complex vertex, double direction_angle, double half_angle, double truncation) {
  if (!(truncation > 0.0)) throw std::invalid_argument("wedge: truncation must be > 0");
  Contour c;
  c.kind = Kind::wedge;
  c.vertex = vertex;
  c.direction_angle = direction_angle;
  c.half_angle = half_angle;
  c.truncation = truncation;
  return c;
}

Complex Contour::centre() const { return center; }
double Contour::rad() const { return radius; }

void Contour::at(double u, Complex& z, Complex& dz) const {
  switch (kind) {
    case Kind::circle:
    case Kind::diameter_circle: {
      const double th = 2.0 * kPi * u;
      const Complex e{std::cos(th), std::sin(th)};
      z = center + radius * e;
      dz = 2.0 * kPi * radius * kI * e;
      return;
    }
    case Kind::vline: {
      // sinh clustering towards the real axis; y in [-T, T]
      const double beta = 2.0;
      const double s = 2.0 * u - 1.0;  // [-1, 1]
      const double y = truncation * std::sinh(beta * s) / std::sinh(beta);
      const double dy = truncation * beta * std::cosh(beta * s) / std::sinh(beta) * 2.0;
      z = {re, y};
      dz = {0.0, dy};
      return;
    }
    case Kind::wedge: {
      // incoming ray (negative imaginary side), vertex, outgoing ray
      const double t1 = direction_angle - half_angle;
      const double t2 = direction_angle + half_angle;
      double in_angle = t1, out_angle = t2;
      if (std::sin(t2) < std::sin(t1)) std::swap(in_angle, out_angle);
      const double beta = 3.0;
      auto graded = [&](double v, double& r, double& dr) {
        // v in [0,1], clusters near 0
        r = truncation * std::sinh(beta * v) / std::sinh(beta);
        dr = truncation * beta * std::cosh(beta * v) / std::sinh(beta);
      };
      if (u < 0.5) {
        const double v = 1.0 - 2.0 * u;  // 1 -> 0 along incoming ray
        double r, dr;
        graded(v, r, dr);
        const Complex e{std::cos(in_angle), std::sin(in_angle)};
        z = vertex + r * e;
        dz = -2.0 * dr * e;
      } else {
        const double v = 2.0 * u - 1.0;  // 0 -> 1 along outgoing ray
        double r, dr;
        graded(v, r, dr);
        const Complex e{std::cos(out_angle), std::sin(out_angle)};
        z = vertex + r * e;
        dz = 2.0 * dr * e;
      }
      return;
    }
  }
  throw std::logic_error("Contour::at: bad kind");
}

Complex quad_fixed(const Integrand& f, const Contour& c, int nodes) {
  Complex sum{0.0, 0.0};
  if (c.closed()) {
    // periodic trapezoid = midpoint-free uniform sum
    for (int m = 0; m < nodes; ++m) {
      Complex z, dz;
      c.at((m + 0.5) / nodes, z, dz);
      sum += f(z) * dz;
    }
    sum /= static_cast<double>(nodes);
  } else {
    // composite trapezoid on [0,1]
    const double h = 1.0 / nodes;
    for (int m = 0; m <= nodes; ++m) {
      Complex z, dz;
      const double w = (m == 0 || m == nodes) ? 0.5 : 1.0;
      c.at(m * h, z, dz);
      sum += w * f(z) * dz;
    }
    sum *= h;
  }
  return sum * Complex{0.0, -kTwoPiInv};  // 1/(2 pi i)
}

QuadResult quad_contour(const Integrand& f, const Contour& c, const QuadratureSpec& spec) {
  if (spec.nodes < 16) throw std::invalid_argument("quad_contour: nodes must be >= 16");
  int n = spec.nodes;
  Complex prev = quad_fixed(f, c, n);
  for (int d = 0; d < spec.max_doublings; ++d) {
    n *= 2;
    const Complex cur = quad_fixed(f, c, n);
    const double delta = std::abs(cur - prev);
    if (delta < spec.tolerance) return {cur, delta};
    prev = cur;
    if (d + 1 == spec.max_doublings)
      throw std::runtime_error("quad_contour: no convergence after max_doublings (last delta " +
                               std::to_string(delta) + ")");
  }
  return {prev, spec.tolerance};
}

namespace {

// signed clearance of circle `inner`'s image (scale*z + shift) inside `outer`
double containment_margin(const Contour& outer, const Contour& inner, Complex scale, Complex shift) {
  double margin = 1e300;
  const int samples = 256;
  for (int m = 0; m < samples; ++m) {
    Complex z, dz;
    inner.at(static_cast<double>(m) / samples, z, dz);
    const Complex w = scale * z + shift;
    margin = std::min(margin, outer.rad() - std::abs(w - outer.centre()));
  }
  return margin;
}

double exclusion_margin(const Contour& c, Complex point) {
  return std::abs(point - c.centre()) - c.rad();
}

}  // namespace

NestedFamily build_nested(NestedKind kind, double q, int k, const NestedParams& params) {
  if (k < 1) throw std::invalid_argument("build_nested: k must be >= 1");
  NestedFamily fam;
  if (kind == NestedKind::around_one_q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("build_nested: need 0 < q < 1");
    const double delta = params.delta;
    const double mu = params.mu > 0.0 ? params.mu : 1.0 / k;
    if (k > 1 && (k - 1) * mu >= 1.0) throw std::runtime_error("build_nested: infeasible, (k-1) mu >= 1");
    // diameters [l_j, 1 + delta], l_j = delta q^{k-j} (1 - (k-j) mu), j = 1..k
    for (int j = 1; j <= k; ++j) {
      const double lj = delta * std::pow(q, k - j) * (1.0 - (k - j) * mu);
      if (!(lj > 0.0)) throw std::runtime_error("build_nested: infeasible, l_j <= 0");
      fam.contours.push_back(Contour::diameter_circle(lj, 1.0 + delta));
    }
    fam.image_scale = {q, 0.0};
    fam.image_shift = {0.0, 0.0};
    fam.separation_margin = 1e-6;
    for (int j = 0; j + 1 < k; ++j) {
      const double m = containment_margin(fam.contours[j], fam.contours[j + 1], fam.image_scale, fam.image_shift);
      if (m <= fam.separation_margin)
        throw std::runtime_error("build_nested: containment margin too small");
    }
    for (auto& c : fam.contours) {
      if (exclusion_margin(c, {0.0, 0.0}) <= fam.separation_margin)
        throw std::runtime_error("build_nested: contour does not exclude 0");
      if (containment_margin(c, Contour::circle({1.0, 0.0}, 1e-12), {1.0, 0.0}, {0.0, 0.0}) <= 0)
        throw std::runtime_error("build_nested: contour does not encircle 1");
    }
  } else {
    const double rho = params.rho;
    const double mu = params.mu > 0.0 ? params.mu : 0.5;
    // diameters [-rho, rho + (k-j)(1+mu)], j = 1..k, each containing 0,
    // the outer one containing the unit-shifted next contour
    for (int j = 1; j <= k; ++j) {
      fam.contours.push_back(Contour::diameter_circle(-rho, rho + (k - j) * (1.0 + mu)));
    }
    fam.image_scale = {1.0, 0.0};
    fam.image_shift = {1.0, 0.0};
    fam.separation_margin = 1e-6;
    for (int j = 0; j + 1 < k; ++j) {
      const double m = containment_margin(fam.contours[j], fam.contours[j + 1], fam.image_scale, fam.image_shift);
      if (m <= fam.separation_margin)
        throw std::runtime_error("build_nested: containment margin too small");
    }
    for (auto& c : fam.contours) {
      if (-exclusion_margin(c, {0.0, 0.0}) <= fam.separation_margin)
        throw std::runtime_error("build_nested: contour must contain 0");
    }
  }
  return fam;
}

namespace {

Complex quad_multi_fixed(const MultiIntegrand& f, const NestedFamily& fam, int nodes,
                         std::vector<Complex>& z, std::size_t level) {
  const Contour& c = fam.contours[level];
  Complex sum{0.0, 0.0};
  for (int m = 0; m < nodes; ++m) {
    Complex zz, dz;
    c.at((m + 0.5) / nodes, zz, dz);
    z[level] = zz;
    Complex inner;
    if (level + 1 == fam.contours.size()) {
      inner = f(std::span<const Complex>(z.data(), z.size()));
    } else {
      inner = quad_multi_fixed(f, fam, nodes, z, level + 1);
    }
    sum += inner * dz;
  }
  return sum / static_cast<double>(nodes) * Complex{0.0, -kTwoPiInv};
}

}  // namespace

QuadResult quad_multi(const MultiIntegrand& f, const NestedFamily& fam, const QuadratureSpec& spec) {
  const std::size_t k = fam.contours.size();
  if (k == 0) throw std::invalid_argument("quad_multi: empty family");
  if (k > 4) throw std::invalid_argument("quad_multi: k > 4 unsupported (cost grows as nodes^k)");
  std::vector<Complex> z(k);
  int n = spec.nodes;
  Complex prev = quad_multi_fixed(f, fam, n, z, 0);
  for (int d = 0; d < spec.max_doublings; ++d) {
    n *= 2;
    const Complex cur = quad_multi_fixed(f, fam, n, z, 0);
    const double delta = std::abs(cur - prev);
    if (delta < spec.tolerance) return {cur, delta};
    prev = cur;
  }
  throw std::runtime_error("quad_multi: no convergence after max_doublings");
}

}  // namespace iprob::contour
