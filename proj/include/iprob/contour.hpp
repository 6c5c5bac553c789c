#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iprob/gammafun.hpp"

namespace iprob::contour {

// Parametrized integration curve. Circle kinds are closed; vline and wedge
// are open with finite truncation supplied by the caller.
struct Contour {
  enum class Kind { circle, diameter_circle, vline, wedge } kind = Kind::circle;
  Complex center{0.0, 0.0};
  double radius = 1.0;
  double left = 0.0, right = 0.0;      // diameter_circle
  double re = 0.0, truncation = 0.0;   // vline
  Complex vertex{0.0, 0.0};            // wedge
  double direction_angle = 0.0, half_angle = 0.0;

  static Contour circle(Complex center, double radius);
  static Contour diameter_circle(double left, double right);
  static Contour vline(double re, double truncation);
  static Contour wedge(Complex vertex, double direction_angle, double half_angle, double truncation);

  bool closed() const { return kind == Kind::circle || kind == Kind::diameter_circle; }
  Complex centre() const;
  double rad() const;
  // point and derivative at parameter u in [0,1]
  void at(double u, Complex& z, Complex& dz) const;
};

struct QuadratureSpec {
  int nodes = 64;           // starting node count, power of 2, >= 16
  double tolerance = 1e-10;
  int max_doublings = 8;
};

struct QuadResult {
  Complex value;
  double error_estimate;
};

using Integrand = std::function<Complex(Complex)>;
using MultiIntegrand = std::function<Complex(std::span<const Complex>)>;

// (1/2pi i) * integral of f along c. Closed contours use the trapezoid rule
// (spectrally accurate for analytic periodic integrands); open contours a
// clustered composite rule on the truncated parametrization. Node count
// doubles until |delta| < tolerance or max_doublings is hit.
QuadResult quad_contour(const Integrand& f, const Contour& c, const QuadratureSpec& spec);

// Family of contours with numerically verified nesting margins.
struct NestedFamily {
  std::vector<Contour> contours;  // index 0 = outermost
  double separation_margin = 0.0;
  // image of the inner contour the next-outer one must contain:
  // z -> scale*z + shift (q-scaling or unit shift)
  Complex image_scale{1.0, 0.0};
  Complex image_shift{0.0, 0.0};
};

enum class NestedKind { around_one_q, around_zero_shift };

struct NestedParams {
  double delta = 0.9;   // around_one_q right-end margin (must stay < 1)
  double mu = -1.0;     // relative gap; < 0 means auto (1/k, or 0.5 for the shift family)
  double rho = 0.3;     // around_zero_shift inner radius
};

// Constructive nested families; throws std::runtime_error when the requested
// geometry is infeasible (caller falls back to the unnested evaluation).
NestedFamily build_nested(NestedKind kind, double q, int k, const NestedParams& params = {});

// Iterated tensor-product quadrature over the family, outermost variable
// first; node doubling is shared across the variables.
QuadResult quad_multi(const MultiIntegrand& f, const NestedFamily& fam, const QuadratureSpec& spec);

// Fixed-node trapezoid/composite sum, no adaptivity (shared by quad_multi).
Complex quad_fixed(const Integrand& f, const Contour& c, int nodes);

}  // namespace iprob::contour
