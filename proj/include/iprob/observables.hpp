#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "iprob/contour.hpp"

namespace iprob::observables {

using Complex = std::complex<double>;

// P{ n occupied on slice h at time t }, the double contour integral of the
// density theorem (coefficient extraction in q, w-circle around 1).
double density_vertical(double t, int h, std::int64_t n, double tolerance = 1e-10);

struct MomentRequest {
  double q = 0.5;
  double t = 1.0;
  std::vector<int> levels;  // N_1 >= ... >= N_k >= 1
};

enum class MomentMode { nested, unnested };

// E q^{la^(N_1)_{N_1} + ... + la^(N_k)_{N_k}} for the q-Whittaker measure.
// nested: direct tensor quadrature on nested contours around 1 (k <= 4);
// unnested: residue-partition expansion on identical circles |w-1| = (1-q)/4
// (k <= 8, requires all levels equal).
double qmoments(const MomentRequest& req, MomentMode mode, double tolerance = 1e-10);

// E exp(-T_{N_1,N_1} - ... - T_{N_k,N_k}) for the semi-discrete polymer.
double polymer_moments_integral(double tau, const std::vector<int>& levels, double tolerance = 1e-9);

// Same moments from the closed ODE system (evolution equation + boundary
// identities at equal indices); independent of the contour machinery.
double polymer_moments_ode_oracle(double tau, const std::vector<int>& levels);

struct LaplaceRequest {
  double q = 0.5;
  double t = 1.0;
  int n_levels = 1;       // N
  Complex zeta{0.2, 0.0};
  int ell_max = 8;
  int n_max = 40;
};

struct SeriesResult {
  Complex value;
  double tail_bound;
};

// E 1/((1-q) q^{la^(N)_N} zeta; q)_inf via the generating-function series of
// l-fold contour integrals (Fredholm form on a shared node grid).
SeriesResult qlaplace_series(const LaplaceRequest& req);

// N = 1 Mellin-Barnes representation (vertical line through delta with a
// leftward bulge around 0; tails bent to horizontal rays toward +infinity
// where the integrand decays geometrically).
Complex mellin_barnes_n1(double q, double t, Complex zeta, double delta = 0.5,
                         double tolerance = 1e-10);

// q-Laplace oracle: direct sum over the Poisson law of la (N=1 only).
Complex qlaplace_poisson_oracle(double q, double t, Complex zeta);

// closed N=1 series: sum_n ((1-q) zeta)^n e^{(q^n-1)t} / prod_{m<=n}(1-q^m)
Complex qlaplace_n1_series(double q, double t, Complex zeta);

}  // namespace iprob::observables
