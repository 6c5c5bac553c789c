#include "iprob/gammafun.hpp"

#include <cmath>
#include <stdexcept>

namespace iprob::contour {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kLog2Pi = 1.837877066409345483560659472811;

// Bernoulli numbers B_2 .. B_20
constexpr double kBern[10] = {
    1.0 / 6,   -1.0 / 30,  1.0 / 42,   -1.0 / 30,   5.0 / 66,
    -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};

bool near_nonpositive_integer(Complex x) {
  if (x.real() > 0.5) return false;
  const double r = std::round(x.real());
  return std::abs(x.real() - r) < 1e-13 && std::abs(x.imag()) < 1e-13 && r <= 0.0;
}

Complex log_gamma_stirling(Complex z) {
  // valid for large |z|, Re z > 0
  Complex r = (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi;
  const Complex z2 = z * z;
  Complex zp = z;
  for (int n = 0; n < 10; ++n) {
    r += kBern[n] / (2.0 * (n + 1) * (2.0 * (n + 1) - 1.0) * zp);
    zp *= z2;
  }
  return r;
}

}  // namespace

Complex log_gamma(Complex x) {
  if (near_nonpositive_integer(x)) throw std::invalid_argument("log_gamma: pole at nonpositive integer");
  if (x.real() < 0.5) {
    // reflection: log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  int shift = 0;
  Complex z = x;
  Complex corr{0.0, 0.0};
  while (std::abs(z) < 12.0) {
    corr += std::log(z);
    z += 1.0;
    if (++shift > 64) break;
  }
  return log_gamma_stirling(z) - corr;
}

Complex digamma(Complex x) {
  if (near_nonpositive_integer(x)) throw std::invalid_argument("digamma: pole at nonpositive integer");
  if (x.real() < 0.5) {
    // psi(x) = psi(1-x) - pi cot(pi x)
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  Complex z = x;
  Complex corr{0.0, 0.0};
  while (std::abs(z) < 12.0) {
    corr += 1.0 / z;
    z += 1.0;
  }
  Complex r = std::log(z) - 0.5 / z;
  const Complex z2 = z * z;
  Complex zp = z2;
  for (int n = 0; n < 10; ++n) {
    r -= kBern[n] / (2.0 * (n + 1) * zp);
    zp *= z2;
  }
  return r - corr;
}

Complex trigamma(Complex x) {
  if (near_nonpositive_integer(x)) throw std::invalid_argument("trigamma: pole at nonpositive integer");
  if (x.real() < 0.5) {
    // psi'(x) + psi'(1-x) = pi^2 / sin^2(pi x)
    const Complex s = std::sin(kPi * x);
    return kPi * kPi / (s * s) - trigamma(1.0 - x);
  }
  Complex z = x;
  Complex corr{0.0, 0.0};
  while (std::abs(z) < 12.0) {
    corr += 1.0 / (z * z);
    z += 1.0;
  }
  const Complex z2 = z * z;
  Complex r = 1.0 / z + 0.5 / z2;
  Complex zp = z * z2;
  for (int n = 0; n < 10; ++n) {
    r += kBern[n] / zp;
    zp *= z2;
  }
  return r + corr;
}

Complex tetragamma(Complex x) {
  if (near_nonpositive_integer(x)) throw std::invalid_argument("tetragamma: pole at nonpositive integer");
  if (x.real() < 0.5) {
    // differentiate the trigamma reflection once more
    const Complex s = std::sin(kPi * x);
    const Complex c = std::cos(kPi * x);
    return -2.0 * kPi * kPi * kPi * c / (s * s * s) + tetragamma(1.0 - x);
  }
  Complex z = x;
  Complex corr{0.0, 0.0};
  while (std::abs(z) < 12.0) {
    corr += -2.0 / (z * z * z);
    z += 1.0;
  }
  const Complex z2 = z * z;
  Complex r = -1.0 / z2 - 1.0 / (z * z2);
  Complex zp = z2 * z2;
  for (int n = 0; n < 10; ++n) {
    r -= (2.0 * (n + 1) + 1.0) * kBern[n] / zp;
    zp *= z2;
  }
  return r + corr;
}

GammaSuite gamma_suite(Complex x) { return {log_gamma(x), digamma(x), trigamma(x)}; }

}  // namespace iprob::contour
