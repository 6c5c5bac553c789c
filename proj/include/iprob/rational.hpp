#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace iprob {

using BigInt = mpz_class;

// Exact rational with reduced form and positive denominator (GMP invariants).
class ExactRational {
public:
  ExactRational() : v_(0) {}
  ExactRational(long n) : v_(n) {}
  ExactRational(const BigInt& n) : v_(n) {}
  ExactRational(const BigInt& num, const BigInt& den) : v_(num, den) {
    v_.canonicalize();
  }
  explicit ExactRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  const mpq_class& raw() const { return v_; }
  BigInt numerator() const { return BigInt(v_.get_num()); }
  BigInt denominator() const { return BigInt(v_.get_den()); }

  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

  ExactRational operator+(const ExactRational& o) const { return ExactRational(mpq_class(v_ + o.v_)); }
  ExactRational operator-(const ExactRational& o) const { return ExactRational(mpq_class(v_ - o.v_)); }
  ExactRational operator*(const ExactRational& o) const { return ExactRational(mpq_class(v_ * o.v_)); }
  ExactRational operator/(const ExactRational& o) const { return ExactRational(mpq_class(v_ / o.v_)); }
  ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }

  bool operator==(const ExactRational& o) const { return v_ == o.v_; }
  bool operator!=(const ExactRational& o) const { return v_ != o.v_; }
  bool operator<(const ExactRational& o) const { return v_ < o.v_; }

private:
  mpq_class v_;
};

BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);

}  // namespace iprob
