#pragma once

#include <cmath>
#include <cstdint>

namespace iprob {

// Counter-based 64-bit generator built on the SplitMix64 output function.
//
// Stream definition (fixed for all releases, so alternate-language ports can
// reproduce runs bit-exactly):
//   state_0   = seed
//   state_i+1 = state_i + 0x9E3779B97F4A7C15
//   output_i  = fmix(state_i+1) with
//     z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//     z ^= z >> 27;  z *= 0x94D049BB133111EB;
//     z ^= z >> 31;
//
// Uniform doubles are ((x >> 11) + 0.5) * 2^-53, strictly inside (0,1).
// Gaussians use the Box-Muller transform on consecutive uniform pairs.
// Derived seeds: derive(master, index) = fmix(master + fmix(index + GOLDEN)).
class Rng {
public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  static std::uint64_t fmix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return fmix(master + fmix(index + kGolden));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return fmix(state_);
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    // rejection sampling on the top bits keeps the law exactly uniform
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace iprob
