#pragma once

#include <algorithm>
#include <vector>

#include "arith.hpp"

namespace torbit {

/// Integer polynomial, coefficients from the constant term upward.
using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

inline int degree(const RatPoly& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d >= 0 && p[d] == 0) --d;
  return d;
}

inline int degree(const IntPoly& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d >= 0 && p[d] == 0) --d;
  return d;
}

inline RatPoly to_rat(const IntPoly& p) {
  RatPoly r;
  r.reserve(p.size());
  for (auto& c : p) r.emplace_back(c);
  return r;
}

template <class Coeff, class X>
X horner(const std::vector<Coeff>& p, const X& x) {
  X acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + X(*it);
  return acc;
}

inline double eval(const IntPoly& p, double x) {
  double acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

inline int sign_at(const IntPoly& p, const Rat& x) {
  Rat v = horner<Int, Rat>(p, x);
  return sgn(v);
}

inline RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  if (d.empty()) d.push_back(0);
  return d;
}

/// Remainder of a modulo b over Q.
inline RatPoly poly_rem(RatPoly a, const RatPoly& b) {
  int db = degree(b);
  require(db >= 0, ErrorKind::invalid_argument, "division by zero polynomial");
  for (int da = degree(a); da >= db; da = degree(a)) {
    Rat f = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    a[da] = 0;
  }
  a.resize(std::max(1, degree(a) + 1));
  return a;
}

/// Discriminant of a monic polynomial of degree 2 or 3.
inline Int poly_discriminant(const IntPoly& f) {
  int d = degree(f);
  require(f[d] == 1, ErrorKind::invalid_argument, "expected monic polynomial");
  if (d == 2) return f[1] * f[1] - 4 * f[0];
  if (d == 3) {
    const Int &a = f[2], &b = f[1], &c = f[0];
    return a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
  }
  fail(ErrorKind::degree_unsupported, "discriminant only for degree 2 or 3");
}

/// Degree <= 3 monic integer polynomials are irreducible over Q iff they have
/// no integer root (any rational root of a monic integer polynomial is integral).
inline bool is_irreducible(const IntPoly& f) {
  int d = degree(f);
  require(d >= 1 && d <= 3 && f[d] == 1, ErrorKind::degree_unsupported, "irreducibility test for monic degree <= 3");
  if (d == 1) return true;
  if (f[0] == 0) return false;
  // Enumerate divisors of the constant term.
  std::vector<Int> divs{1};
  for (auto& [p, e] : factorize(f[0])) {
    std::size_t base = divs.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  for (auto& dv : divs)
    for (int s : {1, -1}) {
      Int x = dv * s;
      if (horner<Int, Int>(f, x) == 0) return false;
    }
  return true;
}

/// Rational isolating interval (lo, hi) of a simple real root.
struct RootInterval {
  Rat lo, hi;
  double approx() const { return Rat((lo + hi) / 2).get_d(); }
};

namespace detail {

inline std::vector<RatPoly> sturm_chain(const IntPoly& f) {
  std::vector<RatPoly> chain{to_rat(f)};
  chain.push_back(derivative(chain[0]));
  while (degree(chain.back()) > 0) {
    RatPoly r = poly_rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (degree(r) < 0) break;
    chain.push_back(r);
  }
  return chain;
}

inline int sign_changes(const std::vector<RatPoly>& chain, const Rat& x) {
  int changes = 0, last = 0;
  for (auto& p : chain) {
    int s = sgn(horner<Rat, Rat>(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

/// Certified isolation of all real roots of a squarefree integer polynomial,
/// each refined by exact-sign bisection to width <= 2^-bits. Ascending order.
inline std::vector<RootInterval> isolate_real_roots(const IntPoly& f, int bits) {
  const int d = degree(f);
  require(d >= 1, ErrorKind::invalid_argument, "constant polynomial");
  auto chain = detail::sturm_chain(f);
  Int bound = 1;
  for (int i = 0; i < d; ++i) bound = std::max(bound, Int(abs(f[i]) / abs(f[d]) + 1));
  bound += 1;
  std::vector<std::pair<Rat, Rat>> work{{Rat(-bound), Rat(bound)}};
  std::vector<RootInterval> roots;
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int count = detail::sign_changes(chain, lo) - detail::sign_changes(chain, hi);
    if (count == 0) continue;
    if (count == 1 && sign_at(f, lo) * sign_at(f, hi) < 0) {
      roots.push_back({lo, hi});
      continue;
    }
    Rat mid = (lo + hi) / 2;
    require(sign_at(f, mid) != 0, ErrorKind::reducible_input, "polynomial has a rational root");
    work.emplace_back(lo, mid);
    work.emplace_back(mid, hi);
  }
  Rat width = 1;
  mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), static_cast<unsigned long>(bits));
  for (auto& r : roots) {
    int slo = sign_at(f, r.lo);
    while (r.hi - r.lo > width) {
      Rat mid = (r.lo + r.hi) / 2;
      int s = sign_at(f, mid);
      require(s != 0, ErrorKind::reducible_input, "polynomial has a rational root");
      if (s == slo)
        r.lo = mid;
      else
        r.hi = mid;
    }
  }
  std::sort(roots.begin(), roots.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  return roots;
}

}  // namespace torbit
