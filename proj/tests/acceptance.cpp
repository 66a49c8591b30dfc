// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "torbit/cli.hpp"
#include "torbit/torbit.hpp"

using namespace torbit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool fundamental(long d) {
  auto squarefree = [](long m) {
    for (long p = 2; p * p <= m; ++p)
      if (m % (p * p) == 0) return false;
    return true;
  };
  if (d % 4 == 1) return squarefree(d);
  return d % 4 == 0 && (d / 4 % 4 == 2 || d / 4 % 4 == 3) && squarefree(d / 4);
}

// Z + f O_K inside the maximal order of k.
Order suborder(const TotallyRealField& k, long f) {
  const Order max = Order::maximal(k);
  RatMatrix gens(2, 2);
  gens(0, 0) = 1;
  for (int j = 0; j < 2; ++j) gens(1, j) = max.basis()(1, j) * f;
  return Order::from_basis(k, gens);
}

Outcome two_route_identity() {
  long checked = 0, failures = 0;
  std::map<long, TotallyRealField> by_disc;
  for (auto& k : enumerate_totally_real_fields(2, Int(2000))) by_disc.emplace(k.disc().get_si(), k);
  for (long d = 5; d <= 2000; ++d) {
    if (!(d % 4 == 0 || d % 4 == 1) || is_square(static_cast<std::int64_t>(d))) continue;
    long f = 1;
    for (long g = 1; g * g <= d; ++g)
      if (d % (g * g) == 0 && fundamental(d / (g * g))) f = g;
    const Order o = suborder(by_disc.at(d / (f * f)), f);
    const auto l = FractionalIdeal::unit(o);
    ++checked;
    if (o.disc() != d || discriminant_order_route(l) != d || discriminant_wedge_route(l) != d) ++failures;
  }
  for (auto& poly : monogenic_cubic_polynomials(Int(5000))) {
    const auto k = TotallyRealField::from_polynomial(poly);
    const auto l = FractionalIdeal::unit(Order::equation_order(k));
    ++checked;
    if (discriminant_wedge_route(l) != 3 * discriminant_order_route(l)) ++failures;
  }
  return {failures == 0, fmt("%ld orders, %ld failures", checked, failures)};
}

Outcome minkowski_dynamics_identity() {
  long checked = 0, failures = 0;
  for (int degree : {2, 3})
    for (auto& k : enumerate_totally_real_fields(degree, Int(3000))) {
      const Order o = Order::maximal(k);
      const UnitGroup u = unit_group(o);
      for (auto& c : class_representatives(o, u)) {
        const auto orbit = orbit_from_triple(k, c.representative.inverse(), {});
        ++checked;
        const Rat m = c.min_norm;
        if (orbit.cusp.squared_times_disc() != m * m || orbit.cusp.disc != o.disc()) ++failures;
      }
    }
  return {failures == 0, fmt("%ld classes, %ld failures", checked, failures)};
}

Outcome minkowski_bound_check() {
  long checked = 0, failures = 0;
  for (int degree : {2, 3})
    for (auto& k : enumerate_totally_real_fields(degree, Int(3000))) {
      const Order o = Order::maximal(k);
      const auto st = field_minkowski_stat(o, 1.0);
      // m_K <= d!/d^d sqrt(disc)  <=>  m_K^2 d^{2d} <= (d!)^2 disc.
      Int dd = 1;
      for (int i = 0; i < 2 * degree; ++i) dd *= degree;
      ++checked;
      if (st.m_k * st.m_k * dd > factorial(degree) * factorial(degree) * o.disc()) ++failures;
    }
  return {failures == 0, fmt("%ld maximal orders, %ld failures", checked, failures)};
}

Outcome volume_lower_bound() {
  long checked = 0, failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (long d = 5; d <= 100000; ++d) {
    if (!(d % 4 == 0 || d % 4 == 1) || is_square(static_cast<std::int64_t>(d))) continue;
    const auto c = volume_bound_check(Int(d));
    ++checked;
    worst = std::min(worst, c.length - c.lower_bound);
    if (!c.ok) ++failures;
  }
  return {failures == 0, fmt("%ld discriminants, %ld failures, min slack %.4f", checked, failures, worst)};
}

Outcome entropy_floor() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> pick(1, 1000000);
  long checked = 0, failures = 0;
  double worst_gap = 0;
  while (checked < 500) {
    const std::int64_t q = pick(rng);
    if (std::gcd(q, std::int64_t{6}) != 1) continue;
    const auto m = uniform_measure(orbit_closure_23(q, 1));
    const auto c = entropy_lower_bound_check(m);
    const double gap =
        std::fabs(partition_entropy(m, separation_level(q)) - std::log(static_cast<double>(m.size())));
    worst_gap = std::max(worst_gap, gap);
    ++checked;
    if (!(c.h1 >= c.floor - 1e-9) || gap > 1e-12) ++failures;
  }
  return {failures == 0, fmt("%ld moduli, %ld failures, worst |H(n_q) - log|S|| %.2e", checked, failures, worst_gap)};
}

Outcome equidistribution_trend() {
  std::vector<std::int64_t> primes;
  for (std::int64_t q = 10000; q <= 100000; ++q)
    if (is_prime(q) && static_cast<double>(group_order_23(q)) >= std::pow(static_cast<double>(q), 0.9))
      primes.push_back(q);
  std::vector<double> disc(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    disc[i] = max_dyadic_discrepancy(uniform_measure(orbit_closure_23(primes[i], 1)));
  });
  const double worst = *std::max_element(disc.begin(), disc.end());
  // Exponential sums on every 10th prime of [10^3, 10^5] with |G| > q^0.9.
  std::vector<std::int64_t> sample;
  long seen = 0;
  for (std::int64_t q = 1000; q <= 100000; ++q)
    if (is_prime(q) && static_cast<double>(group_order_23(q)) > std::pow(static_cast<double>(q), 0.9) &&
        seen++ % 10 == 0)
      sample.push_back(q);
  std::vector<double> xs(sample.size()), ys(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    xs[i] = static_cast<double>(sample[i]);
    ys[i] = exp_sum_profile(sample[i]).max_normalized_sum;
  });
  const double delta = -loglog_slope(xs, ys);
  return {worst <= 0.05 && delta > 0,
          fmt("%zu primes, max dyadic discrepancy %.5f (pilot %.5f); exp-sum delta %.3f over %zu primes",
              primes.size(), worst, fixtures::times23_pilot_worst_discrepancy, delta, sample.size())};
}

Outcome separation_scaling() {
  using namespace fixtures;
  auto orbits = cli::principal_quadratic_orbits(
      cli::log_spaced_fundamental_discs(separation_disc_bound, separation_count), 80);
  const auto res = min_orbit_separation(orbits, separation_window_r, separation_grid);
  std::vector<double> x, y;
  double min_scaled = std::numeric_limits<double>::infinity();
  for (auto& p : res.pairs) {
    x.push_back(p.disc_product.get_d());
    y.push_back(p.min_dist);
    min_scaled = std::min(min_scaled, p.scaled_stat());
  }
  const double slope = loglog_slope(x, y);
  return {slope >= -0.6 && min_scaled >= 0.5 * separation_pilot_min_scaled,
          fmt("%zu pairs, slope %.4f (>= -0.6), min scaled stat %.4f (floor %.4f)", res.pairs.size(), slope,
              min_scaled, 0.5 * separation_pilot_min_scaled)};
}

Outcome escape_of_mass() {
  using namespace fixtures;
  const auto rows = cli::escape_rows(-1, 30, escape_delta0, escape_grid, 80);
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0, fmin = 1;
  std::vector<double> logd, frac;
  for (auto& r : rows) {
    cmin = std::min(cmin, r.c_implied);
    cmax = std::max(cmax, r.c_implied);
    fmin = std::min(fmin, r.escaped);
    logd.push_back(std::log(r.disc.get_d()));
    frac.push_back(r.escaped);
  }
  // Least-squares slope of the escaped fraction against log disc.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logd.size(); ++i) {
    mx += logd[i];
    my += frac[i];
  }
  mx /= static_cast<double>(logd.size());
  my /= static_cast<double>(logd.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logd.size(); ++i) {
    sxy += (logd[i] - mx) * (frac[i] - my);
    sxx += (logd[i] - mx) * (logd[i] - mx);
  }
  const double trend = sxy / sxx;
  return {cmax / cmin <= 3 && fmin >= escape_floor && trend >= 0,
          fmt("C in [%.4f, %.4f] (ratio %.3f <= 3); min escaped fraction %.4f (floor %.2f, pilot %.4f); "
              "trend in log disc %+.4f",
              cmin, cmax, cmax / cmin, fmin, escape_floor, escape_pilot_min_fraction, trend)};
}

Outcome anosov_closing() {
  // Periodic points y0 (eigenvector columns) of hyperbolic gamma in SL(2, Z).
  const std::vector<std::array<double, 4>> gammas{{2, 1, 1, 1}, {3, 1, 2, 1}, {5, 2, 2, 1}, {4, 1, 3, 1}, {7, 4, 5, 3}};
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  const double eps = 1e-4;
  long failures = 0;
  double worst_residual = 0, worst_distance = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& g = gammas[trial % gammas.size()];
    RealMatrix gamma(2, 2);
    gamma << g[0], g[1], g[2], g[3];
    const double tr = g[0] + g[3];
    const double l1 = (tr + std::sqrt(tr * tr - 4)) / 2, l2 = 1 / l1;
    RealMatrix y0(2, 2);
    y0 << g[1], g[1], l1 - g[0], l2 - g[0];
    y0 = detail::det_normalized(y0);
    const double period = 2 * std::log(l1);
    RealMatrix e(2, 2);
    e << nd(rng), nd(rng), nd(rng), nd(rng);
    const RealMatrix x = y0 * (eps * e / e.norm()).exp();
    try {
      const auto res = anosov_close(x, period, 1e-8);
      const double dist = group_distance(res.y, x);
      worst_residual = std::max(worst_residual, res.residual);
      worst_distance = std::max(worst_distance, dist);
      if (res.residual > 1e-8 || dist > 10 * eps) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0, fmt("100 trials, %ld failures, worst residual %.2e, worst distance %.3e (<= %.0e)", failures,
                             worst_residual, worst_distance, 10 * eps)};
}

Outcome haar_entropy_formula() {
  long failures = 0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> w;
    for (int i = 0; i < n; ++i) w.push_back((n - 1) / 2.0 - i);
    const long expect = static_cast<long>(n + 1) * n * (n - 1) / 6;
    if (haar_entropy(w) != static_cast<double>(expect)) ++failures;
  }
  return {failures == 0, fmt("n = 2..6, %ld mismatches", failures)};
}

Outcome abundance_report() {
  const auto rows = abundance_scan(0.01, 100000, 4);
  std::vector<double> x, inside, all;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0)
      monotone = monotone && rows[i].total_length_all >= rows[i - 1].total_length_all &&
                 rows[i].total_length_inside >= rows[i - 1].total_length_inside;
    if (rows[i].big_delta < 1000) continue;
    x.push_back(static_cast<double>(rows[i].big_delta));
    inside.push_back(rows[i].total_length_inside);
    all.push_back(rows[i].total_length_all);
  }
  const double e_inside = loglog_slope(x, inside), e_all = loglog_slope(x, all);
  bool anti = true;
  std::vector<AbundanceRow> prev;
  for (double d : {0.005, 0.01, 0.02, 0.05, 0.1}) {
    auto cur = d == 0.01 ? rows : abundance_scan(d, 100000, 4);
    if (!prev.empty())
      for (std::size_t i = 0; i < cur.size(); ++i) anti = anti && cur[i].total_length_inside <= prev[i].total_length_inside;
    prev = std::move(cur);
  }
  return {e_inside >= 0.5 && e_all >= 1.3 && e_all <= 1.7 && monotone && anti,
          fmt("exponent inside %.3f (>= 0.5), all %.3f (in [1.3, 1.7]); monotone in Delta %s, in delta %s", e_inside,
              e_all, monotone ? "yes" : "no", anti ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"two-route discriminant identity", two_route_identity},
      {"Minkowski-dynamics identity", minkowski_dynamics_identity},
      {"Minkowski bound", minkowski_bound_check},
      {"n = 2 volume lower bound", volume_lower_bound},
      {"x2 x3 exact entropy floor", entropy_floor},
      {"x2 x3 equidistribution trend", equidistribution_trend},
      {"separation scaling", separation_scaling},
      {"escape of mass", escape_of_mass},
      {"Anosov closing", anosov_closing},
      {"Haar entropy formula", haar_entropy_formula},
      {"abundance report", abundance_report},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
