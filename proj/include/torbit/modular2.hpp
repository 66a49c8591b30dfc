#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "parallel.hpp"
#include "quadratic.hpp"

namespace torbit {

struct QuadraticOrderGeodesic {
  Int disc;
  Int a, b;  ///< eps = (a + b sqrt D) / 2
  int unit_norm = 1;
  double log_eps = 0;
  double length = 0;  ///< 2 log eps_+, eps_+ the least totally positive unit > 1
};

inline QuadraticOrderGeodesic fundamental_unit_cf(const Int& d) {
  QuadraticUnit u = quadratic_fundamental_unit(d);
  QuadraticOrderGeodesic g{d, u.a, u.b, u.norm, u.log(), 0};
  g.length = (u.norm == 1 ? 2.0 : 4.0) * g.log_eps;
  return g;
}

struct VolumeBoundCheck {
  double length = 0, lower_bound = 0;
  bool ok = false;
};

/// length >= log D - 4 log 2.
inline VolumeBoundCheck volume_bound_check(const Int& d) {
  auto g = fundamental_unit_cf(d);
  VolumeBoundCheck c{g.length, std::log(d.get_d()) - 4 * std::log(2.0), false};
  c.ok = c.length >= c.lower_bound;
  return c;
}

/// (p + sqrt d) / q; d == 0 encodes the rational p / q.
struct QuadSurd {
  Int p, q, d;

  static QuadSurd rational(const Int& num, const Int& den) { return {num, den, 0}; }

  bool is_rational() const { return d == 0 || is_square(d); }

  long double value() const {
    const long double root = d == 0 ? 0.0L : std::sqrt(static_cast<long double>(d.get_d()));
    return (static_cast<long double>(p.get_d()) + root) / static_cast<long double>(q.get_d());
  }
};

struct CFExpansion {
  double value = 0;
  std::vector<Int> partial_quotients;  ///< a_0; a_1, a_2, ...
  std::size_t preperiod = 0;           ///< index where the period starts
  std::size_t period = 0;              ///< 0 for rationals
};

/// Continued fraction of a quadratic surd (exact, with the period found by
/// repetition of the complete quotient) or of a rational.
inline CFExpansion continued_fraction(QuadSurd x) {
  require(x.q != 0, ErrorKind::invalid_argument, "zero denominator");
  CFExpansion cf;
  cf.value = static_cast<double>(x.value());
  if (x.is_rational()) {
    Int num = x.p + (x.d == 0 ? Int(0) : isqrt(x.d)), den = x.q;
    while (den != 0) {
      Int a = floor_div(num, den);
      cf.partial_quotients.push_back(a);
      Int r = num - a * den;
      num = den;
      den = r;
    }
    return cf;
  }
  // Make q | d - p^2 so the complete quotients stay of the same shape.
  if ((x.d - x.p * x.p) % x.q != 0) {
    const Int aq = abs(x.q);
    x.p *= aq;
    x.d *= aq * aq;
    x.q *= aq;
  }
  const Int s = isqrt(x.d);
  std::map<std::pair<Int, Int>, std::size_t> seen;
  Int p = x.p, q = x.q;
  for (;;) {
    auto key = std::make_pair(p, q);
    if (auto it = seen.find(key); it != seen.end()) {
      cf.preperiod = it->second;
      cf.period = cf.partial_quotients.size() - it->second;
      return cf;
    }
    seen.emplace(key, cf.partial_quotients.size());
    Int a = q > 0 ? floor_div(p + s, q) : floor_div(Int(-p - s - 1), Int(-q));
    cf.partial_quotients.push_back(a);
    p = a * q - p;
    q = (x.d - p * p) / q;
  }
}

/// Convergents p_k / q_k of the quotients a_0, a_1, ...
inline std::vector<std::pair<Int, Int>> convergents(const std::vector<Int>& a) {
  std::vector<std::pair<Int, Int>> out;
  Int p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (const Int& ak : a) {
    Int p = ak * p1 + p2, q = ak * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    out.emplace_back(p, q);
  }
  return out;
}

struct BadlyApproximable {
  QuadSurd u;
  std::vector<int> period;  ///< u = [0; period, period, ...]
  double liminf = 0;        ///< liminf m <m u>
  double certified_floor = 0;  ///< 1 / (max_pq + 2)
};

namespace detail {

/// Value of the purely periodic continued fraction [w_0; w_1, ..., w_0, ...].
inline double periodic_cf_value(const std::vector<int>& w) {
  double x = 1.0;
  for (int rep = 0; rep < 80; ++rep)
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = *it + 1.0 / x;
  return x;
}

inline bool is_primitive_word(const std::vector<int>& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool power = true;
    for (std::size_t i = d; i < n && power; ++i) power = w[i] == w[i - d];
    if (power) return false;
  }
  return true;
}

}  // namespace detail

/// The first `count` numbers u = [0; w, w, ...] with w a primitive word over
/// {1..max_pq}, ordered by word length and then lexicographically. For
/// max_pq = 1 only the golden surd exists.
inline std::vector<BadlyApproximable> badly_approximable(int max_pq, int count) {
  require(max_pq >= 1, ErrorKind::invalid_argument, "max_pq must be >= 1");
  std::vector<BadlyApproximable> out;
  for (int len = 1; static_cast<int>(out.size()) < count; ++len) {
    if (max_pq == 1 && len > 1) break;
    require(len <= 64, ErrorKind::search_exhausted, "word length limit reached");
    std::vector<int> w(len, 1);
    for (;;) {
      if (detail::is_primitive_word(w)) {
        // [[p, p'], [q, q']] = prod [[a, 1], [1, 0]]; u solves p' u^2 + (p - q') u - q = 0.
        Int p = 1, pp = 0, q = 0, qq = 1;
        for (int a : w) {
          Int np = a * p + pp, nq = a * q + qq;
          pp = p;
          qq = q;
          p = np;
          q = nq;
        }
        // After the loop (p, q) is the last convergent and (pp, qq) the previous one.
        BadlyApproximable b;
        const Int disc = (p - qq) * (p - qq) + 4 * pp * q;
        b.u = {qq - p, 2 * pp, disc};
        b.period = w;
        b.certified_floor = 1.0 / (max_pq + 2);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < len; ++i) {
          std::vector<int> fwd, back;
          for (int k = 0; k < len; ++k) fwd.push_back(w[(i + k) % len]);
          for (int k = 1; k <= len; ++k) back.push_back(w[((i - k) % len + len) % len]);
          best = std::min(best, 1.0 / (detail::periodic_cf_value(fwd) + 1.0 / detail::periodic_cf_value(back)));
        }
        b.liminf = best;
        out.push_back(std::move(b));
        if (static_cast<int>(out.size()) == count) return out;
      }
      int pos = len - 1;
      while (pos >= 0 && w[pos] == max_pq) w[pos--] = 1;
      if (pos < 0) break;
      ++w[pos];
    }
  }
  return out;
}

namespace detail {

/// |q u - p| for u = (P + sqrt D) / Q, without cancellation.
inline long double approx_error(const QuadSurd& u, const Int& q, const Int& p) {
  const long double den = std::fabs(static_cast<long double>(u.q.get_d()));
  if (u.d == 0) return std::fabs(static_cast<long double>(Int(q * u.p - p * u.q).get_d())) / den;
  const Int a = q * u.p - p * u.q;  // q u - p = (a + q sqrt D) / Q
  const Int num = a * a - q * q * u.d;
  const long double conj = static_cast<long double>(a.get_d()) -
                           static_cast<long double>(q.get_d()) * std::sqrt(static_cast<long double>(u.d.get_d()));
  if (conj == 0) return 0;
  return std::fabs(static_cast<long double>(num.get_d()) / conj) / den;
}

}  // namespace detail

/// Whether Z^2 [[1, -u], [0, 1]] diag(e^{-t/2}, e^{t/2}) stays in Omega'_delta
/// at the sample times t_k = t_max k / steps. The shortest sup-norm vector of
/// these lattices is (0, 1) or comes from a convergent of u.
inline bool forward_orbit_stays(const QuadSurd& u, double delta, double t_max, int steps) {
  require(steps >= 1 && t_max >= 0, ErrorKind::invalid_argument, "need steps >= 1 and t_max >= 0");
  const double qmax = std::exp(t_max / 2) + 2;
  // Convergents of u up to denominator qmax.
  std::vector<std::pair<Int, Int>> conv;
  {
    CFExpansion cf;
    std::vector<Int> quotients;
    if (u.is_rational()) {
      quotients = continued_fraction(u).partial_quotients;
    } else {
      cf = continued_fraction(u);
      quotients = cf.partial_quotients;
      while (true) {
        auto c = convergents(quotients);
        if (c.back().second.get_d() > qmax) break;
        for (std::size_t i = 0; i < cf.period; ++i) quotients.push_back(cf.partial_quotients[cf.preperiod + i]);
      }
    }
    for (auto& c : convergents(quotients)) {
      conv.push_back(c);
      if (c.second.get_d() > qmax) break;
    }
  }
  std::vector<long double> err;
  for (auto& [p, q] : conv) err.push_back(detail::approx_error(u, q, p));
  for (int k = 0; k <= steps; ++k) {
    const long double t = static_cast<long double>(t_max) * k / steps;
    const long double shrink = std::exp(-t / 2), grow = std::exp(t / 2);
    long double best = grow;  // the vector (0, 1)
    for (std::size_t i = 0; i < conv.size(); ++i) {
      const long double s = std::max(std::fabs(static_cast<long double>(conv[i].second.get_d())) * shrink, err[i] * grow);
      best = std::min(best, s);
    }
    if (best * best < delta) return false;
  }
  return true;
}

struct ClosingResult {
  RealMatrix y;
  double period = 0;  ///< T
  RealMatrix gamma;   ///< integral matrix with gamma y = y h_T
  double residual = 0;
};

struct ClosingOptions {
  double rho_c = 1e-2;
  double eta_c = 1e-1;
};

inline RealMatrix h_flow(double t) {
  RealMatrix h = RealMatrix::Zero(2, 2);
  h(0, 0) = std::exp(t / 2);
  h(1, 1) = std::exp(-t / 2);
  return h;
}

/// Closes an almost-periodic point x (x h_N close to gamma x) to a periodic
/// point y near x with gamma y = y h_T, by conjugating x^{-1} gamma x to a
/// diagonal matrix with an upper and then a lower unipotent.
inline ClosingResult anosov_close(const RealMatrix& x0, double n, double tol, const ClosingOptions& opt = {}) {
  require(x0.rows() == 2 && x0.cols() == 2, ErrorKind::invalid_argument, "closing is implemented for 2 x 2 matrices");
  require(tol > 0, ErrorKind::invalid_argument, "tol must be positive");
  const RealMatrix x = detail::det_normalized(x0);
  const RealMatrix hn = h_flow(n);
  RealMatrix gamma = (x * hn * x.inverse()).array().round().matrix();
  if (std::fabs(gamma.determinant() - 1.0) > 1e-9) fail(ErrorKind::closing_failed, "no unimodular return element");
  const RealMatrix pm = x.inverse() * gamma * x;
  if (auto d = detail::pgl_log(hn.inverse() * pm); !d || d->norm() > opt.rho_c)
    fail(ErrorKind::closing_failed, "x is not returning at time N");
  const double a = pm(0, 0), b = pm(0, 1), c = pm(1, 0), d = pm(1, 1);
  // -c u^2 + (a - d) u + b = 0, root near 0.
  double u;
  if (c == 0) {
    u = -b / (a - d);
  } else {
    const double disc = (a - d) * (a - d) + 4 * c * b;
    if (disc < 0) fail(ErrorKind::closing_failed, "conjugating quadratic has no real root");
    const double sq = std::sqrt(disc);
    const double big = (a - d) + std::copysign(sq, a - d);
    u = -2 * b / big;
  }
  if (!std::isfinite(u) || std::fabs(u) > opt.rho_c * 10) fail(ErrorKind::closing_failed, "no small root");
  RealMatrix np = RealMatrix::Identity(2, 2), npi = RealMatrix::Identity(2, 2);
  np(0, 1) = u;
  npi(0, 1) = -u;
  const RealMatrix p1 = npi * pm * np;  // lower triangular
  const double v = p1(1, 0) / (p1(0, 0) - p1(1, 1));
  if (!std::isfinite(v) || std::fabs(v) > opt.rho_c * 10) fail(ErrorKind::closing_failed, "no small lower correction");
  RealMatrix nm = RealMatrix::Identity(2, 2);
  nm(1, 0) = v;
  ClosingResult res;
  res.y = x * np * nm;
  const RealMatrix diag = res.y.inverse() * gamma * res.y;
  if (diag(0, 0) <= 0) fail(ErrorKind::closing_failed, "return element is not hyperbolic with positive eigenvalues");
  res.period = 2 * std::log(diag(0, 0));
  if (std::fabs(res.period - n) > opt.eta_c) fail(ErrorKind::closing_failed, "period outside the window");
  res.gamma = gamma;
  auto r = detail::pgl_log(res.y.inverse() * gamma.inverse() * res.y * h_flow(res.period));
  res.residual = r ? r->norm() : std::numeric_limits<double>::infinity();
  if (res.residual > tol) fail(ErrorKind::closing_failed, "closing residual above tolerance");
  return res;
}

struct AbundanceRow {
  long big_delta = 0;
  double delta = 0;
  long n_orbits_inside = 0;
  long n_orbits_all = 0;
  double total_length_inside = 0;
  double total_length_all = 0;
};

struct DiscriminantSummary {
  long d = 0;
  long orbits = 0, inside = 0;
  double length = 0;  ///< length of each closed geodesic of discriminant d
};

/// Primitive form cycles of each discriminant D <= max_d (the narrow classes
/// of invertible ideals of the order of discriminant D, i.e. the closed
/// geodesics of discriminant D), with how many stay in Omega'_delta.
inline std::vector<DiscriminantSummary> discriminant_summaries(double delta, long max_d) {
  std::vector<long> discs;
  for (long d = 5; d <= max_d; ++d)
    if ((d % 4 == 0 || d % 4 == 1) && !is_square(static_cast<std::int64_t>(d))) discs.push_back(d);
  const auto spf = smallest_prime_factors(max_d / 4 + 1);
  std::vector<DiscriminantSummary> out(discs.size());
  parallel_for(discs.size(), [&](std::size_t i) {
    const long d = discs[i];
    DiscriminantSummary s{d, 0, 0, fundamental_unit_cf(Int(d)).length};
    const double root = std::sqrt(static_cast<double>(d));
    for (auto& c : primitive_form_cycles(d, spf)) {
      ++s.orbits;
      // Closed condition delta* = min |a| / sqrt(D) >= delta.
      if (static_cast<double>(c.min_abs_a) >= delta * root) ++s.inside;
    }
    out[i] = s;
  });
  return out;
}

/// Log-spaced grid of Delta values from 10 to max_d, `per_decade` points per
/// decade, always ending at max_d.
inline std::vector<long> abundance_grid(long max_d, int per_decade) {
  std::vector<long> g;
  for (int k = 0;; ++k) {
    const long v = std::lround(10.0 * std::pow(10.0, static_cast<double>(k) / per_decade));
    if (v >= max_d) break;
    if (g.empty() || v > g.back()) g.push_back(v);
  }
  g.push_back(max_d);
  return g;
}

inline std::vector<AbundanceRow> abundance_scan(double delta, long max_d, int per_decade = 4) {
  require(delta > 0, ErrorKind::invalid_argument, "delta must be positive");
  require(max_d >= 5 && max_d <= 1000000, ErrorKind::invalid_argument, "Delta_max must lie in [5, 10^6]");
  require(per_decade >= 1, ErrorKind::invalid_argument, "grid density must be >= 1");
  auto sums = discriminant_summaries(delta, max_d);
  std::vector<AbundanceRow> rows;
  AbundanceRow acc{0, delta, 0, 0, 0, 0};
  std::size_t i = 0;
  for (long big : abundance_grid(max_d, per_decade)) {
    for (; i < sums.size() && sums[i].d <= big; ++i) {
      acc.n_orbits_all += sums[i].orbits;
      acc.n_orbits_inside += sums[i].inside;
      acc.total_length_all += sums[i].orbits * sums[i].length;
      acc.total_length_inside += sums[i].inside * sums[i].length;
    }
    acc.big_delta = big;
    rows.push_back(acc);
  }
  return rows;
}

/// Least-squares slope of log y against log x over points with y > 0.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  require(m >= 2, ErrorKind::insufficient_input, "need two points for a slope");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace torbit
