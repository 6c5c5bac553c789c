#pragma once

#include <string>

namespace iprob::asymptotics {

struct ShapePoint {
  double tau, nu, eta;
};

enum class Region { liquid, frozen_empty, frozen_full };

struct RegionLabel {
  Region label;
  double rho;       // vertical-lozenge density in [0,1]
  bool boundary;    // |discr| < 1e-12 (classified as liquid with a flag)
};

// Classification of (tau, nu, eta) by the critical points of
// F(z) = tau z + eta log(z-1) - nu log z.
RegionLabel limit_shape_density(const ShapePoint& p);

// gamma_p = H_p(z_0) with H_p(z) = p^2/2 + p z - sum_{m<p} log(z+m),
// z_0 the unique positive root of H_p'.
double lyapunov_semidiscrete(int p);

double lyapunov_continuous(int p);  // (p^3 - p) / 24

struct KPZConstants {
  double f;  // law-of-large-numbers constant, min_s (kappa s - psi(s))
  double s;  // the minimizer (trigamma(s) = kappa)
  double g;  // -psi''(s)
};

KPZConstants kpz_constants(double kappa);

// Truncated Fredholm-type series for E exp(-u exp(-T_{N,N}(t))): l-fold
// products of |v| = delta1 circles and Re s = delta2 vertical lines, with the
// s-integrals folded into a kernel on the v-circle first.
double laplace_fredholm(double u, double t, int n_levels, int ell_max, double delta1 = 0.1,
                        double delta2 = 0.5);

// Truncated series for F_GUE((g/2)^{-1/3} r) on the wedge contours through
// -1/2 (opening left) and +1/2 (opening right). The direct tensor evaluation
// is used for ell_max <= 4; larger truncation orders go through the
// characteristic polynomial of the discretized kernel.
double tracy_widom_cdf(double r, double g, int ell_max);

const char* region_name(Region r);

}  // namespace iprob::asymptotics
