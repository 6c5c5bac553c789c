#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace iprob {

// Weakly decreasing integer tuple; the length is significant (trailing zeros
// distinguish U(N) signatures of different rank).
class Signature {
public:
  Signature() = default;
  explicit Signature(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
    if (!weakly_decreasing(parts_)) throw std::invalid_argument("signature parts must be weakly decreasing");
  }

  static bool weakly_decreasing(const std::vector<std::int64_t>& p) {
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > p[i - 1]) return false;
    return true;
  }

  std::size_t size() const { return parts_.size(); }
  std::int64_t operator[](std::size_t i) const { return parts_[i]; }
  const std::vector<std::int64_t>& parts() const { return parts_; }
  std::int64_t weight() const {
    std::int64_t s = 0;
    for (auto p : parts_) s += p;
    return s;
  }
  bool nonnegative() const { return parts_.empty() || parts_.back() >= 0; }

  bool operator==(const Signature& o) const { return parts_ == o.parts_; }

private:
  std::vector<std::int64_t> parts_;
};

// mu interlaces lambda: la_{i+1} <= mu_i <= la_i, with |mu| = |la| - 1 parts.
bool interlaces(const Signature& mu, const Signature& la);

// Triangular array: rows[h-1] has h parts, consecutive rows interlace.
class GTPattern {
public:
  GTPattern() = default;
  explicit GTPattern(std::vector<Signature> rows);

  std::size_t depth() const { return rows_.size(); }
  const Signature& row(std::size_t h) const { return rows_.at(h - 1); }  // 1-based
  const std::vector<Signature>& rows() const { return rows_; }

private:
  std::vector<Signature> rows_;
};

struct HexagonSpec {
  std::int64_t a = 1, b = 1, c = 1;
  HexagonSpec(std::int64_t a_, std::int64_t b_, std::int64_t c_) : a(a_), b(b_), c(c_) {
    if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("hexagon sides must be nonnegative");
  }
};

// Real Macdonald parameter, 0 <= q < 1 for all stochastic uses.
struct QParam {
  double q = 0.0;
  QParam(double q_) : q(q_) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in [0,1)");
  }
  operator double() const { return q; }
};

}  // namespace iprob
