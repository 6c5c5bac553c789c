#include <doctest.h>

#include <cmath>
#include <complex>

#include "iprob/rng.hpp"
#include "iprob/symfun.hpp"

using namespace iprob;
using namespace iprob::symfun;
using std::complex;

namespace {
Signature sig(std::vector<std::int64_t> v) { return Signature(std::move(v)); }
}  // namespace

TEST_CASE("schur_eval elementary cases") {
  CHECK(schur_eval(sig({1, 0}), {{1, 0}, {2, 0}}).real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(schur_eval(sig({2, 0}), {{1, 0}, {2, 0}}).real() == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(schur_eval(sig({}), {}).real() == doctest::Approx(1.0));
}

TEST_CASE("schur_eval at coincident points equals dimension") {
  // (3,1,0) at (1,1,1): brute-force GT count is the oracle
  BigInt count = count_gt_patterns(sig({3, 1, 0}));
  auto v = schur_eval(sig({3, 1, 0}), {{1, 0}, {1, 0}, {1, 0}});
  CHECK(v.real() == doctest::Approx(count.get_d()).epsilon(1e-12));
  CHECK(schur_dim(sig({3, 1, 0}), 3).to_double() == doctest::Approx(count.get_d()));
}

TEST_CASE("schur_dim basics") {
  CHECK(schur_dim(sig({1, 0}), 2).to_double() == doctest::Approx(2.0));
  CHECK(schur_dim(sig({1, 1, 0}), 3).to_double() == doctest::Approx(3.0));
  // hexagon 2,2,2 has 20 tilings
  CHECK(schur_dim(sig({2, 2, 0, 0}), 4).to_double() == doctest::Approx(20.0));
  // negative parts allowed
  CHECK(schur_dim(sig({0, -1}), 2).to_double() == doctest::Approx(2.0));
}

TEST_CASE("schur_branch examples") {
  auto b = schur_branch(sig({1, 0}));
  REQUIRE(b.size() == 2);
  auto b2 = schur_branch(sig({2, 2}));
  REQUIRE(b2.size() == 1);
  CHECK(b2[0].first.parts() == std::vector<std::int64_t>{2});
  CHECK(b2[0].second == 2);
}

TEST_CASE("schur branching reassembles schur_eval at random z") {
  Rng rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(4);  // N in [2,5]
    std::vector<std::int64_t> parts(n);
    std::int64_t prev = 5;
    for (auto& p : parts) {
      prev = prev - static_cast<std::int64_t>(rng.uniform_below(3));
      p = prev;
    }
    Signature la(parts);
    std::vector<complex<double>> z(n);
    for (auto& zi : z) zi = {0.5 + rng.uniform(), 0.5 * rng.uniform() - 0.25};
    auto whole = schur_eval(la, z);
    std::vector<complex<double>> zsub(z.begin(), z.end() - 1);
    complex<double> sum = 0.0;
    for (auto& [mu, deg] : schur_branch(la)) {
      sum += schur_eval(mu, zsub) * std::pow(z.back(), static_cast<double>(deg));
    }
    CHECK(std::abs(sum - whole) <= 1e-12 * std::max(1.0, std::abs(whole)));
  }
}

TEST_CASE("schur_dim equals brute-force GT count for small signatures") {
  Rng rng(999);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(4);
    std::vector<std::int64_t> parts(n);
    std::int64_t prev = 3;
    for (auto& p : parts) {
      prev = prev - static_cast<std::int64_t>(rng.uniform_below(3));
      p = std::max<std::int64_t>(prev, 0);
      prev = p;
    }
    Signature la(parts);
    if (la.weight() > 6) continue;
    CHECK(schur_dim(la, n).to_double() == doctest::Approx(count_gt_patterns(la).get_d()));
  }
}

TEST_CASE("macmahon_count") {
  CHECK(macmahon_count(HexagonSpec(1, 1, 1)) == 2);
  CHECK(macmahon_count(HexagonSpec(2, 2, 2)) == 20);
  // cross-op identity with the Weyl dimension formula
  for (std::int64_t a = 1; a <= 4; ++a)
    for (std::int64_t b = 1; b <= 4; ++b)
      for (std::int64_t c = 1; c <= 4; ++c) {
        HexagonSpec h(a, b, c);
        auto dim = schur_dim(hexagon_top_row(h), a + c);
        CHECK(ExactRational(macmahon_count(h)) == dim);
      }
  // symmetry in (a,b,c)
  CHECK(macmahon_count(HexagonSpec(2, 3, 4)) == macmahon_count(HexagonSpec(4, 2, 3)));
  CHECK(macmahon_count(HexagonSpec(2, 3, 4)) == macmahon_count(HexagonSpec(3, 4, 2)));
}

TEST_CASE("hahn_pmf unit hexagon and 2,2,2") {
  HexagonSpec unit(1, 1, 1);
  CHECK(hahn_pmf(unit, 1, {0}) == ExactRational(BigInt(1), BigInt(2)));
  CHECK(hahn_pmf(unit, 1, {1}) == ExactRational(BigInt(1), BigInt(2)));

  HexagonSpec two(2, 2, 2);
  CHECK(hahn_pmf(two, 1, {0}) == ExactRational(BigInt(3), BigInt(10)));
  CHECK(hahn_pmf(two, 1, {1}) == ExactRational(BigInt(4), BigInt(10)));
  CHECK(hahn_pmf(two, 1, {2}) == ExactRational(BigInt(3), BigInt(10)));

  // out of support
  CHECK(hahn_pmf(two, 1, {5}) == ExactRational(0));
  CHECK_THROWS(hahn_pmf(two, 3, {2, 1, 0}));

  // normalization is exact for several specs
  for (auto [a, b, c] : {std::array<std::int64_t, 3>{2, 3, 2}, {3, 1, 2}, {3, 3, 3}}) {
    HexagonSpec s(a, b, c);
    for (int h = 1; h <= std::min(a, c); ++h) {
      ExactRational total(0);
      for (auto& [x, p] : hahn_table(s, h)) total += p;
      CHECK(total == ExactRational(1));
    }
  }
}

TEST_CASE("hahn slice-1 law matches brute-force tiling count for 2,2,2") {
  // count tilings of the 2,2,2 hexagon by the slice-1 position
  std::int64_t counts[3] = {0, 0, 0};
  for_each_gt_pattern(sig({2, 2, 0, 0}), [&](const std::vector<Signature>& rows) {
    counts[rows[0][0]]++;
    return true;
  });
  CHECK(counts[0] == 6);
  CHECK(counts[1] == 8);
  CHECK(counts[2] == 6);
}

TEST_CASE("q_pochhammer") {
  CHECK(q_pochhammer({0.3, 0}, {0.5, 0}, 0).real() == doctest::Approx(1.0));
  CHECK(q_pochhammer({0.5, 0}, {0.5, 0}, 2).real() == doctest::Approx(0.375));
  CHECK(q_pochhammer({0.0, 0}, {0.5, 0}, -1).real() == doctest::Approx(1.0));
  CHECK_THROWS(q_pochhammer({0.5, 0}, {1.0, 0}, 2));
  // infinite product vs large finite product
  auto inf = q_pochhammer({0.7, 0}, {0.6, 0}, -1);
  auto fin = q_pochhammer({0.7, 0}, {0.6, 0}, 200);
  CHECK(std::abs(inf - fin) < 1e-14);
}

TEST_CASE("q_factorial") {
  CHECK(q_factorial(0, 0.5) == doctest::Approx(1.0));
  CHECK(q_factorial(2, 0.5) == doctest::Approx((1.0 - 0.5) * (1.0 - 0.25) / (0.5 * 0.5)));
  CHECK(q_factorial(3, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("qwhittaker_branch_coeff") {
  CHECK(qwhittaker_branch_coeff(sig({2, 0}), sig({1}), QParam(0.5)) == doctest::Approx(1.5));
  // q -> 0 gives 1 for every interlacing pair
  CHECK(qwhittaker_branch_coeff(sig({3, 1}), sig({2}), QParam(0.0)) == doctest::Approx(1.0));
  CHECK(qwhittaker_branch_coeff(sig({4, 2, 1}), sig({3, 1}), QParam(0.0)) == doctest::Approx(1.0));
  // direct factor-by-factor product at q = 0.5
  const double q = 0.5;
  double expect = q_factorial(2, q) / (q_factorial(1, q) * q_factorial(1, q));
  CHECK(qwhittaker_branch_coeff(sig({3, 1}), sig({2}), QParam(q)) == doctest::Approx(expect));
  CHECK_THROWS(qwhittaker_branch_coeff(sig({3, 1}), sig({0}), QParam(q)));
}

TEST_CASE("qwhittaker_principal") {
  CHECK(qwhittaker_principal(sig({1}), 1, QParam(0.5)) == doctest::Approx(1.0));
  CHECK(qwhittaker_principal(sig({1, 0}), 2, QParam(0.5)) == doctest::Approx(2.0));
  // q -> 0 limit equals schur_dim at (2,1,0)
  const double lo = qwhittaker_principal(sig({2, 1, 0}), 3, QParam(1e-6));
  CHECK(std::abs(lo - schur_dim(sig({2, 1, 0}), 3).to_double()) < 1e-4);
  CHECK_THROWS(qwhittaker_principal(sig({1, 0, 0, 0, 0, 0, 0}), 7, QParam(0.5)));
}

TEST_CASE("link_kernel schur") {
  CHECK(link_kernel(LinkMode::schur, sig({1, 0}), sig({0})) == doctest::Approx(0.5));
  CHECK(link_kernel(LinkMode::schur, sig({1, 0}), sig({1})) == doctest::Approx(0.5));
  CHECK(link_kernel(LinkMode::schur, sig({2, 2}), sig({2})) == doctest::Approx(1.0));
  CHECK(link_kernel(LinkMode::schur, sig({2, 2}), sig({1})) == doctest::Approx(0.0));
}

TEST_CASE("link_kernel rows sum to one") {
  Rng rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(3);
    std::vector<std::int64_t> parts(n);
    std::int64_t prev = 4;
    for (auto& p : parts) {
      prev -= static_cast<std::int64_t>(rng.uniform_below(3));
      p = std::max<std::int64_t>(prev, 0);
      prev = p;
    }
    Signature la(parts);
    ExactRational row(0);
    double qrow = 0.0;
    for (auto& [mu, deg] : schur_branch(la)) {
      row += link_kernel_exact(la, mu);
      qrow += link_kernel(LinkMode::qwhittaker, la, mu, 0.5);
    }
    CHECK(row == ExactRational(1));  // exact in the schur mode
    CHECK(qrow == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("link_kernel qwhittaker against principal oracle") {
  // la=(2,0): probabilities proportional to P_mu(1) * coeff
  const double q = 0.5;
  const double p0 = link_kernel(LinkMode::qwhittaker, sig({2, 0}), sig({0}), q);
  const double p1 = link_kernel(LinkMode::qwhittaker, sig({2, 0}), sig({1}), q);
  const double p2 = link_kernel(LinkMode::qwhittaker, sig({2, 0}), sig({2}), q);
  const double z = 3.0 + q;  // P_{(2,0)}(1,1) = 3 + q
  CHECK(p0 == doctest::Approx(1.0 / z));
  CHECK(p1 == doctest::Approx((1.0 + q) / z));
  CHECK(p2 == doctest::Approx(1.0 / z));
}

TEST_CASE("macdonald_d1_apply eigenvalues") {
  using C = complex<double>;
  std::vector<C> z{{1.3, 0.2}, {0.7, -0.4}};
  // q = t (Schur): sum_i q^{la_i + N - i}
  auto r = macdonald_d1_apply(sig({1, 0}), 2, {0.5, 0}, {0.5, 0}, z);
  CHECK(r.real() == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(std::abs(r.imag()) < 1e-10);

  // constant polynomial: eigenvalue sum_i t^{N-i}
  auto r0 = macdonald_d1_apply(sig({0, 0, 0}), 3, {0.4, 0}, {0.6, 0}, {{1.1, 0.1}, {0.8, -0.2}, {1.4, 0.3}});
  CHECK(r0.real() == doctest::Approx(0.36 + 0.6 + 1.0).epsilon(1e-10));

  // general (q,t) = (0.3, 0.6): e_1(q^1 t^1, q^0 t^0) = qt + 1
  auto rg = macdonald_d1_apply(sig({1, 0}), 2, {0.3, 0}, {0.6, 0}, z);
  CHECK(rg.real() == doctest::Approx(1.18).epsilon(1e-10));
  CHECK(std::abs(rg.imag()) < 1e-10);
}

TEST_CASE("macdonald_d1_apply is sample-point independent") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<complex<double>> z1(3), z2(3);
    for (auto& v : z1) v = {0.6 + rng.uniform(), 0.5 * rng.uniform()};
    for (auto& v : z2) v = {0.6 + rng.uniform(), 0.5 * rng.uniform()};
    auto a = macdonald_d1_apply(sig({2, 1, 0}), 3, {0.45, 0}, {0.35, 0}, z1);
    auto b = macdonald_d1_apply(sig({2, 1, 0}), 3, {0.45, 0}, {0.35, 0}, z2);
    CHECK(std::abs(a - b) < 1e-9);
  }
  // negative parts are shifted internally
  auto neg = macdonald_d1_apply(sig({0, -1}), 2, {0.5, 0}, {0.5, 0}, {{1.2, 0.1}, {0.9, -0.3}});
  CHECK(neg.real() == doctest::Approx(std::pow(0.5, 0 + 1) + std::pow(0.5, -1)).epsilon(1e-9));
}
