#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "torbit/orbits.hpp"

using namespace torbit;

namespace {

TotallyRealField quad(long m) { return TotallyRealField::from_polynomial({Int(-m), Int(0), Int(1)}); }

// Z[f sqrt(m)] inside Q(sqrt(m)).
Order sqrt_order(const TotallyRealField& k, long f) {
  RatMatrix gens(2, 2);
  gens(0, 0) = 1;
  gens(1, 1) = f;
  return Order::from_basis(k, gens);
}

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

RealMatrix random_unimodular(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-2, 2), pos(0, n - 1);
  RealMatrix g = RealMatrix::Identity(n, n);
  for (int step = 0; step < 6; ++step) {
    int i = pos(rng), j = pos(rng);
    if (i == j) continue;
    g.row(i) += coef(rng) * g.row(j);
  }
  return g;
}

}  // namespace

TEST(Orbits, WedgeRouteOnSmallestExamples) {
  const auto k2 = quad(2);
  const auto l2 = FractionalIdeal::unit(Order::maximal(k2));
  EXPECT_EQ(discriminant_order_route(l2), 8);
  EXPECT_EQ(discriminant_wedge_route(l2), 8);

  const auto k3 = simplest_cubic(-1);
  const auto l3 = FractionalIdeal::unit(Order::maximal(k3));
  EXPECT_EQ(discriminant_order_route(l3), 49);
  EXPECT_EQ(discriminant_wedge_route(l3), 147);
}

TEST(Orbits, QuadraticSuborderDiscriminants) {
  // disc Z[f sqrt(m)] = 4 m f^2, and the wedge route agrees for n = 2.
  for (long m : {2L, 3L, 7L, 10L}) {
    const auto k = quad(m);
    for (long f = 1; f <= 5; ++f) {
      const auto l = FractionalIdeal::unit(sqrt_order(k, f));
      EXPECT_EQ(discriminant_order_route(l), Int(4 * m * f * f)) << m << " " << f;
      EXPECT_EQ(discriminant_wedge_route(l), discriminant_order_route(l)) << m << " " << f;
    }
  }
}

TEST(Orbits, WedgeRouteIsClassInvariant) {
  // Every ideal class of a maximal order yields the same torus discriminant.
  for (const auto& k : {quad(10), quad(79)}) {
    const auto o = Order::maximal(k);
    for (auto& c : class_representatives(o)) {
      EXPECT_EQ(discriminant_wedge_route(c.representative), o.disc());
      EXPECT_EQ(discriminant_wedge_route(c.representative.inverse()), o.disc());
    }
  }
}

TEST(Orbits, OrbitRecordOfSqrtTwo) {
  const auto k = quad(2);
  const auto orbit = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
  EXPECT_EQ(orbit.disc_order_route, 8);
  EXPECT_EQ(orbit.cusp.min_norm_ratio, 1);
  EXPECT_NEAR(orbit.cusp.value(), 1 / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(orbit.classical_regulator, std::log(1 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(orbit.volume, std::sqrt(2.0) * std::log(1 + std::sqrt(2.0)), 1e-12);
}

TEST(Orbits, NonPrincipalClassOfSqrtTen) {
  const auto k = quad(10);
  const auto o = Order::maximal(k);
  auto classes = class_representatives(o);
  ASSERT_EQ(classes.size(), 2u);
  const auto orbit = orbit_from_triple(k, classes[1].representative.inverse(), {});
  EXPECT_EQ(orbit.cusp.min_norm_ratio, 2);
  EXPECT_EQ(orbit.cusp.disc, 40);
  EXPECT_NEAR(orbit.cusp.value(), 2 / std::sqrt(40.0), 1e-15);
  EXPECT_EQ(orbit.cusp.squared_times_disc(), Rat(4));
}

TEST(Orbits, ThetaDoesNotChangeInvariants) {
  const auto k = simplest_cubic(2);
  const auto l = FractionalIdeal::unit(Order::maximal(k));
  const auto base = orbit_from_triple(k, l, {});
  for (auto theta : {std::vector<int>{1, 0, 2}, std::vector<int>{2, 0, 1}}) {
    const auto o = orbit_from_triple(k, l, theta);
    EXPECT_EQ(o.disc_order_route, base.disc_order_route);
    EXPECT_EQ(o.disc_wedge_route, base.disc_wedge_route);
    EXPECT_EQ(o.cusp.min_norm_ratio, base.cusp.min_norm_ratio);
    EXPECT_NEAR(o.volume, base.volume, 1e-12);
  }
  EXPECT_THROW(orbit_from_triple(k, l, {0, 0, 1}), Error);
}

TEST(Orbits, OmegaPrimeIsClosed) {
  const auto k = quad(5);
  const auto o = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
  EXPECT_TRUE(in_omega_prime(o, o.cusp.value()));
  EXPECT_FALSE(in_omega_prime(o, std::nextafter(o.cusp.value(), 1.0)));
  EXPECT_THROW(in_omega_prime(o, 0.0), Error);
}

TEST(Orbits, SamplesHaveCovolumeOne) {
  const auto k = simplest_cubic(1);
  const auto o = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
  auto samples = sample_orbit(o, 7);
  ASSERT_EQ(samples.size(), 49u);
  for (auto& s : samples) EXPECT_NEAR(std::fabs(s.basis.determinant()), 1.0, 1e-9);
}

TEST(Orbits, SampledCuspValuesNeverBeatTheExactMinimum) {
  // Along the orbit |v|_inf^n >= |N(v)| / covol >= delta*.
  for (long a : {-1L, 3L, 10L}) {
    const auto k = simplest_cubic(a);
    const auto o = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
    for (auto& s : sample_orbit(o, 12))
      EXPECT_GE(std::pow(shortest_sup_vector(s).norm, 3) * (1 + 1e-9), o.cusp.value()) << a;
  }
}

TEST(Orbits, EscapedMassIsMonotoneInDelta) {
  const auto k = simplest_cubic(8);
  const auto o = orbit_from_triple(k, FractionalIdeal::unit(Order::maximal(k)), {});
  double prev = 0;
  for (double d : {0.01, 0.05, 0.1, 0.2, 0.4, 0.8, 1.0}) {
    const double f = escaped_mass_fraction(o, d, 16);
    EXPECT_GE(f, prev);
    EXPECT_LE(f, 1.0);
    prev = f;
  }
  EXPECT_EQ(escaped_mass_fraction(o, o.cusp.value(), 16), 0.0);
  EXPECT_THROW(escaped_mass_fraction(o, 0.1, 5), Error);
}

TEST(Orbits, HaarEntropyOfTheStandardDirection) {
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> w;
    for (int i = 0; i < n; ++i) w.push_back((n - 1) / 2.0 - i);
    EXPECT_DOUBLE_EQ(haar_entropy(w), static_cast<double>(binomial(n + 1, 3))) << n;
    std::reverse(w.begin(), w.end());
    EXPECT_DOUBLE_EQ(haar_entropy(w), static_cast<double>(binomial(n + 1, 3))) << n;
  }
  EXPECT_EQ(haar_entropy({0.0, 0.0}), 0.0);
  EXPECT_THROW(haar_entropy({1.0, 0.5}), Error);
}

TEST(Orbits, HaarEntropyIsHomogeneous) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(4);
    double s = 0;
    for (auto& x : w) s += (x = g(rng));
    for (auto& x : w) x -= s / 4;
    EXPECT_NEAR(haar_entropy(std::vector<double>{2 * w[0], 2 * w[1], 2 * w[2], 2 * w[3]}), 2 * haar_entropy(w),
                1e-12);
  }
}

TEST(Orbits, AdjointSystole) {
  EXPECT_NEAR(adjoint_systole(RealMatrix::Identity(2, 2)), 1.0, 1e-12);
  EXPECT_NEAR(adjoint_systole(RealMatrix::Identity(3, 3)), 1.0, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      RealMatrix g = RealMatrix::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) += 0.4 * u(rng);
      const double s = adjoint_systole(g);
      // Invariant under left multiplication by SL(n, Z) and by scalars.
      EXPECT_NEAR(adjoint_systole(random_unimodular(n, rng) * g), s, 1e-8 * std::max(1.0, s));
      EXPECT_NEAR(adjoint_systole(3.0 * g), s, 1e-9 * std::max(1.0, s));
    }
  }
  // Pushing towards the cusp shrinks the systole.
  RealMatrix a = RealMatrix::Identity(2, 2);
  a(0, 0) = 4;
  a(1, 1) = 0.25;
  EXPECT_LT(adjoint_systole(a), 0.1);
  EXPECT_TRUE(omega_R_membership(RealMatrix::Identity(3, 3), 1.0));
  EXPECT_FALSE(omega_R_membership(a, 2.0));
}
