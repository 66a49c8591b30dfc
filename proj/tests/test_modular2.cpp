#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "torbit/modular2.hpp"

using namespace torbit;

namespace {

bool valid_disc(long d) { return (d % 4 == 0 || d % 4 == 1) && d > 1 && !is_square(static_cast<std::int64_t>(d)); }

// Oracle: least solution of a^2 - D b^2 = +-4 with a, b > 0 by search on b.
std::pair<long, long> pell_by_search(long d) {
  for (long b = 1;; ++b)
    for (long s : {-4L, 4L}) {
      const long a2 = d * b * b + s;
      if (a2 <= 0) continue;
      const long a = std::lround(std::sqrt(static_cast<double>(a2)));
      if (a * a == a2) return {a, b};
    }
}

}  // namespace

TEST(Modular2, FundamentalUnitsSolvePell) {
  for (long d = 5; d <= 3000; ++d) {
    if (!valid_disc(d)) continue;
    auto g = fundamental_unit_cf(Int(d));
    EXPECT_EQ(g.a * g.a - Int(d) * g.b * g.b, Int(4 * g.unit_norm)) << d;
    if (d <= 400) {
      auto [a, b] = pell_by_search(d);
      EXPECT_EQ(g.a, a) << d;
      EXPECT_EQ(g.b, b) << d;
    }
  }
  auto g8 = fundamental_unit_cf(Int(8));
  EXPECT_EQ(g8.a, 2);
  EXPECT_EQ(g8.b, 1);
  EXPECT_EQ(g8.unit_norm, -1);
  EXPECT_NEAR(g8.length, 4 * std::log(1 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(fundamental_unit_cf(Int(5)).length, 4 * std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
  EXPECT_NEAR(fundamental_unit_cf(Int(12)).length, 2 * std::log(2 + std::sqrt(3.0)), 1e-12);
}

TEST(Modular2, VolumeBound) {
  for (long d = 5; d <= 20000; ++d)
    if (valid_disc(d)) EXPECT_TRUE(volume_bound_check(Int(d)).ok) << d;
}

TEST(Modular2, ContinuedFractionsOfSurds) {
  auto s2 = continued_fraction({Int(0), Int(1), Int(2)});
  EXPECT_EQ(s2.partial_quotients.front(), 1);
  EXPECT_EQ(s2.period, 1u);
  EXPECT_EQ(s2.partial_quotients[s2.preperiod], 2);
  auto s7 = continued_fraction({Int(0), Int(1), Int(7)});  // [2; 1, 1, 1, 4]
  std::vector<Int> expect{2, 1, 1, 1, 4};
  EXPECT_EQ(s7.partial_quotients, expect);
  EXPECT_EQ(s7.preperiod, 1u);
  EXPECT_EQ(s7.period, 4u);
  auto r = continued_fraction(QuadSurd::rational(Int(415), Int(93)));  // [4; 2, 6, 7]
  EXPECT_EQ(r.partial_quotients, (std::vector<Int>{4, 2, 6, 7}));
  EXPECT_EQ(r.period, 0u);
}

TEST(Modular2, ConvergentDeterminantIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> pick(2, 5000);
  for (int trial = 0; trial < 200; ++trial) {
    const long d = pick(rng);
    if (is_square(d)) continue;
    auto cf = continued_fraction({Int(0), Int(1), Int(d)});
    std::vector<Int> a = cf.partial_quotients;
    for (int rep = 0; rep < 3; ++rep)
      a.insert(a.end(), cf.partial_quotients.begin() + cf.preperiod, cf.partial_quotients.end());
    auto c = convergents(a);
    for (std::size_t k = 1; k < c.size(); ++k) {
      const Int lhs = c[k].first * c[k - 1].second - c[k - 1].first * c[k].second;
      EXPECT_EQ(lhs, (k % 2 == 1) ? Int(1) : Int(-1)) << d << " " << k;
    }
    // Convergents alternate around sqrt(d): p^2 < d q^2 exactly for even k.
    for (std::size_t k = 0; k < c.size(); ++k) {
      const bool below = c[k].first * c[k].first < Int(d) * c[k].second * c[k].second;
      EXPECT_EQ(below, k % 2 == 0) << d << " " << k;
    }
  }
}

TEST(Modular2, GoldenNumberIsTheFirstBadlyApproximable) {
  auto b = badly_approximable(1, 3);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(static_cast<double>(b[0].u.value()), (std::sqrt(5.0) - 1) / 2, 1e-15);
  EXPECT_NEAR(b[0].liminf, 1 / std::sqrt(5.0), 1e-12);
  auto many = badly_approximable(3, 20);
  ASSERT_EQ(many.size(), 20u);
  for (auto& x : many) {
    const double u = static_cast<double>(x.u.value());
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_GE(x.liminf, x.certified_floor);
    // Quotients of u are the period, repeated.
    auto cf = continued_fraction(x.u);
    ASSERT_EQ(cf.period, x.period.size());
    for (std::size_t i = 0; i < x.period.size(); ++i)
      EXPECT_EQ(cf.partial_quotients[cf.preperiod + i], x.period[i]);
  }
}

TEST(Modular2, ForwardOrbitOfTheGoldenPoint) {
  const QuadSurd golden{Int(-1), Int(2), Int(5)};
  EXPECT_TRUE(forward_orbit_stays(golden, 0.2, 30.0, 600));
  EXPECT_FALSE(forward_orbit_stays(golden, 0.5, 30.0, 600));
  EXPECT_FALSE(forward_orbit_stays(QuadSurd::rational(Int(1), Int(3)), 0.2, 30.0, 600));
}

TEST(Modular2, ClosingRecoversPeriodicPoints) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  // y0 has the eigenvectors of gamma = [[2, 1], [1, 1]] as columns, so that
  // gamma y0 = y0 h_T with T = 4 log(golden ratio).
  RealMatrix gamma(2, 2);
  gamma << 2, 1, 1, 1;
  const double phi = (1 + std::sqrt(5.0)) / 2, l1 = phi * phi, l2 = 1 / l1;
  RealMatrix y0(2, 2);
  y0 << 1, 1, l1 - 2, l2 - 2;
  y0 = detail::det_normalized(y0);
  const double t = 4 * std::log(phi);
  for (int trial = 0; trial < 40; ++trial) {
    RealMatrix e(2, 2);
    e << nd(rng), nd(rng), nd(rng), nd(rng);
    const RealMatrix x = y0 * (1e-4 * e / e.norm()).exp();
    const auto res = anosov_close(x, t, 1e-8);
    EXPECT_LE(res.residual, 1e-8);
    EXPECT_LE(std::fabs(res.period - t), 0.1);
    EXPECT_LE(group_distance(res.y, x), 1e-3);
    EXPECT_NEAR(std::fabs(res.y.determinant()), 1.0, 1e-12);
    EXPECT_EQ(res.gamma, gamma);
  }
  EXPECT_THROW(anosov_close(RealMatrix::Identity(2, 2), 1.3, 1e-8), Error);
}

TEST(Modular2, AbundanceScan) {
  auto rows = abundance_scan(0.01, 2000, 4);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.back().big_delta, 2000);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].total_length_all, rows[i - 1].total_length_all);
    EXPECT_GE(rows[i].total_length_inside, rows[i - 1].total_length_inside);
  }
  // Orbit counts: one closed geodesic per narrow class.
  auto one = abundance_scan(0.01, 8, 1);
  EXPECT_EQ(one.back().n_orbits_all, 2);  // D = 5 and D = 8
  EXPECT_NEAR(one.back().total_length_all,
              fundamental_unit_cf(Int(5)).length + fundamental_unit_cf(Int(8)).length, 1e-12);
  for (auto& r : abundance_scan(1.5, 2000, 2)) EXPECT_EQ(r.total_length_inside, 0.0);
  auto loose = abundance_scan(0.01, 3000, 2), tight = abundance_scan(0.1, 3000, 2);
  for (std::size_t i = 0; i < loose.size(); ++i) {
    EXPECT_GE(loose[i].total_length_inside, tight[i].total_length_inside);
    EXPECT_EQ(loose[i].total_length_all, tight[i].total_length_all);
  }
  EXPECT_GT(abundance_scan(0.01, 100, 1).back().total_length_inside, 0.0);
}

TEST(Modular2, LogLogSlope) {
  std::vector<double> x{1, 10, 100, 1000}, y{3, 30 * std::sqrt(10.0), 3000, 3000 * std::sqrt(1000.0)};
  EXPECT_NEAR(loglog_slope(x, y), 1.5, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), Error);
}
