#pragma once

#include <complex>

namespace iprob::contour {

using Complex = std::complex<double>;

struct GammaSuite {
  Complex loggamma;
  Complex digamma;
  Complex trigamma;
};

// Principal-branch log-gamma, Stirling series with upward recurrence shift;
// reflection for Re x <= 0. Accurate to ~1e-13 relative on Re x > 0.
Complex log_gamma(Complex x);
Complex digamma(Complex x);
Complex trigamma(Complex x);
Complex tetragamma(Complex x);  // psi''

GammaSuite gamma_suite(Complex x);

}  // namespace iprob::contour
