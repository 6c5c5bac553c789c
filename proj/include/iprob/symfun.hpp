#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "iprob/rational.hpp"
#include "iprob/signature.hpp"

namespace iprob::symfun {

using Complex = std::complex<double>;

// s_la(z) = det[z_i^{N+la_j-j}] / det[z_i^{N-j}].  Falls back to the
// branching-sum evaluation when two z's are closer than
// 1e-6 * max|z_i| (the Vandermonde denominator loses all precision there).
Complex schur_eval(const Signature& la, const std::vector<Complex>& z);

// Weyl dimension: prod_{i<j} ((la_i - i) - (la_j - j)) / (j - i), exact.
ExactRational schur_dim(const Signature& la, std::size_t n);

// All mu interlacing la, with the exponent |la| - |mu| of z_N.
std::vector<std::pair<Signature, std::int64_t>> schur_branch(const Signature& la);

// Enumerates GT patterns with the given top row (brute-force oracle).
// visit receives the rows bottom-up; returns false to stop early.
void for_each_gt_pattern(const Signature& top,
                         const std::function<bool(const std::vector<Signature>&)>& visit);
BigInt count_gt_patterns(const Signature& top);  // memoized exact count

BigInt macmahon_count(const HexagonSpec& h);

// Hexagon top row (b,...,b,0,...,0) with a copies of b and c zeros.
Signature hexagon_top_row(const HexagonSpec& h);

// Hahn ensemble pmf on strictly decreasing x in [0, b+h-1]^h, Eq-normalized
// by exact summation over the support.
ExactRational hahn_pmf(const HexagonSpec& spec, int h, const std::vector<std::int64_t>& x);
// Full table keyed by the decreasing tuple, summing to 1 exactly.
std::vector<std::pair<std::vector<std::int64_t>, ExactRational>> hahn_table(const HexagonSpec& spec, int h);

// prod_{m=0}^{n-1} (1 - a q^m); n < 0 means the infinite product, truncated
// once |a q^m| < 1e-16 (geometric tail, bound |a q^m|/(1-|q|)).
Complex q_pochhammer(Complex a, Complex q, long n);
double q_factorial(long k, double q);  // k!_q = prod (1-q^m) / (1-q)^k

// prod_i (la_i - la_{i+1})!_q / ((la_i - mu_i)!_q (mu_i - la_{i+1})!_q)
double qwhittaker_branch_coeff(const Signature& la, const Signature& mu, QParam q);

// P_la(1,...,1) by the GT-pattern sum; oracle-scale only (N <= 6).
double qwhittaker_principal(const Signature& la, std::size_t n, QParam q);

enum class LinkMode { schur, qwhittaker };

// Transition probability Lambda^h_{h-1}(la, mu); rows sum to 1 over mu < la.
double link_kernel(LinkMode mode, const Signature& la, const Signature& mu, double q = 0.0);
ExactRational link_kernel_exact(const Signature& la, const Signature& mu);  // schur mode

// (D^(1) P_la)(z) / P_la(z) for the first Macdonald difference operator;
// equals e_1(q^{la_1} t^{N-1}, ..., q^{la_N}).
Complex macdonald_d1_apply(const Signature& la, std::size_t n, Complex q, Complex t,
                           const std::vector<Complex>& z);

// Macdonald polynomial at a point via the branching rule (small N only).
Complex macdonald_eval(const Signature& la, const std::vector<Complex>& z, Complex q, Complex t);

}  // namespace iprob::symfun
