#include <gtest/gtest.h>

#include <cmath>

#include "torbit/ideals.hpp"

using namespace torbit;

namespace {

TotallyRealField quad(long m) { return TotallyRealField::from_polynomial({Int(-m), Int(0), Int(1)}); }

// Oracle: Kronecker symbol (D / p) for an odd prime p by Euler's criterion.
int kronecker_odd(long d, long p) {
  long r = ((d % p) + p) % p;
  if (r == 0) return 0;
  long e = (p - 1) / 2, acc = 1, b = r;
  while (e) {
    if (e & 1) acc = acc * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

}  // namespace

TEST(Ideals, UnitIdealAndInverse) {
  auto o = Order::maximal(quad(10));
  auto ideals = enumerate_integral_ideals(o, 20);
  ASSERT_FALSE(ideals.empty());
  EXPECT_EQ(ideals.front(), FractionalIdeal::unit(o));
  for (auto& i : ideals) {
    EXPECT_EQ(i * i.inverse(), FractionalIdeal::unit(o));
    EXPECT_EQ(i.inverse().norm(), 1 / i.norm());
  }
}

TEST(Ideals, NormIsMultiplicative) {
  auto o = Order::maximal(simplest_cubic(1));
  auto ideals = enumerate_integral_ideals(o, 30);
  for (std::size_t a = 0; a < ideals.size(); a += 3)
    for (std::size_t b = 0; b < ideals.size(); b += 5)
      EXPECT_EQ((ideals[a] * ideals[b]).norm(), ideals[a].norm() * ideals[b].norm());
}

TEST(Ideals, PrimeIdealCountsMatchKronecker) {
  for (long m : {2L, 3L, 5L, 10L, 13L, 79L}) {
    auto k = quad(m);
    auto o = Order::maximal(k);
    const long d = o.disc().get_si();
    auto ideals = enumerate_integral_ideals(o, 60);
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L, 53L, 59L}) {
      long count = 0;
      for (auto& i : ideals)
        if (i.norm() == p) ++count;
      EXPECT_EQ(count, 1 + kronecker_odd(d, p)) << "m=" << m << " p=" << p;
    }
  }
}

TEST(Ideals, PrincipalIdealsAreRecognised) {
  auto o = Order::maximal(simplest_cubic(2));
  auto units = unit_group(o);
  FieldElem x{Rat(3), Rat(-1), Rat(2)};
  auto px = FractionalIdeal::principal(o, x);
  auto test = class_equal(FractionalIdeal::unit(o), px, units);
  ASSERT_TRUE(test.equal);
  EXPECT_EQ(FractionalIdeal::principal(o, *test.witness), px);
}

TEST(Ideals, MultiplierRingOfMaximalIdeals) {
  auto o = Order::maximal(quad(5));
  for (auto& i : enumerate_integral_ideals(o, 30)) EXPECT_TRUE(multiplier_ring(i).is_maximal());
  auto eq = Order::equation_order(quad(5));
  EXPECT_EQ(multiplier_ring(FractionalIdeal::unit(eq)).disc(), 20);
}

TEST(Ideals, KnownClassNumbers) {
  EXPECT_EQ(class_representatives(Order::maximal(quad(5))).size(), 1u);
  EXPECT_EQ(class_representatives(Order::maximal(quad(2))).size(), 1u);
  EXPECT_EQ(class_representatives(Order::maximal(quad(10))).size(), 2u);
  EXPECT_EQ(class_representatives(Order::maximal(quad(79))).size(), 3u);
  auto st = field_minkowski_stat(Order::maximal(quad(10)), 0.0);
  EXPECT_EQ(st.m_k, 2);
}

// Independent route through binary quadratic forms: wide classes are the
// narrow classes (form cycles) divided by 2 when the fundamental unit has
// norm +1, and m(K) is the largest min |a| over the cycles.
TEST(Ideals, QuadraticClassesMatchFormCycles) {
  auto spf = smallest_prime_factors(1000);
  for (auto& k : enumerate_totally_real_fields(2, Int(600))) {
    auto o = Order::maximal(k);
    const long d = o.disc().get_si();
    auto cycles = primitive_form_cycles(d, spf);
    const int unit_norm = quadratic_fundamental_unit(Int(d)).norm;
    const std::size_t wide = unit_norm == 1 ? cycles.size() / 2 : cycles.size();
    std::int64_t m = 0;
    for (auto& c : cycles) m = std::max(m, c.min_abs_a);
    auto st = field_minkowski_stat(o, 0.0);
    EXPECT_EQ(st.classes, wide) << "D=" << d;
    EXPECT_EQ(st.m_k, m) << "D=" << d;
  }
}

TEST(Ideals, MinimalNormIsLowerBoundForSamples) {
  auto o = Order::maximal(simplest_cubic(3));
  auto units = unit_group(o);
  for (auto& i : enumerate_integral_ideals(o, 40)) {
    auto mn = minimal_norm(i, units);
    EXPECT_GE(mn.norm, i.norm());
    EXPECT_EQ(abs(i.element_norm(mn.witness)), mn.norm);
    for (long a = -3; a <= 3; ++a)
      for (long b = -3; b <= 3; ++b)
        for (long c = -3; c <= 3; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          std::vector<Int> v{Int(a), Int(b), Int(c)};
          EXPECT_GE(abs(i.element_norm(v)), mn.norm);
        }
  }
}

TEST(Ideals, SmallestCubicClassNumbers) {
  // Totally real cubic fields below discriminant 3000 with class number > 1.
  std::vector<std::pair<long, std::size_t>> nontrivial;
  for (auto& k : enumerate_totally_real_fields(3, Int(3000))) {
    auto st = field_minkowski_stat(Order::maximal(k), 0.0);
    if (st.classes > 1) nontrivial.emplace_back(k.disc().get_si(), st.classes);
  }
  std::vector<std::pair<long, std::size_t>> expected{{1957, 2}, {2597, 3}, {2777, 2}};
  EXPECT_EQ(nontrivial, expected);
}
