#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "arith.hpp"

namespace torbit {

inline bool is_valid_quadratic_disc(const Int& d) {
  if (d <= 0 || is_square(d)) return false;
  Int r = floor_mod(d, Int(4));
  return r == 0 || r == 1;
}

/// Unit (a + b sqrt(D)) / 2 of the quadratic order of discriminant D, with
/// a^2 - D b^2 = 4 * norm.
struct QuadraticUnit {
  Int a, b;
  int norm = 1;

  /// log of the unit, accurate even when a has hundreds of digits.
  double log() const {
    // (a + sqrt(a^2 - 4 norm)) / 2 = a * (1 + sqrt(1 - 4 norm / a^2)) / 2.
    double inv = std::exp(-2.0 * log_abs(a));
    return log_abs(a) + std::log((1.0 + std::sqrt(1.0 - 4.0 * norm * inv)) / 2.0);
  }
};

/// Fundamental unit eps > 1 of the order of discriminant D, read off the
/// first continued-fraction convergent p/q of w = (D mod 2 + sqrt D)/2 whose
/// element p - q w has norm +-1.
inline QuadraticUnit quadratic_fundamental_unit(const Int& d) {
  require(is_valid_quadratic_disc(d), ErrorKind::invalid_discriminant,
          "not a positive non-square discriminant: " + d.get_str());
  const Int sigma = floor_mod(d, Int(2));
  const Int s = isqrt(d);
  // Complete quotients (P + sqrt D) / Q, starting from w.
  Int P = sigma, Q = 2;
  Int p = 1, p_prev = 0, q = 0, q_prev = 1;  // convergent recurrences seeded at k = -1, -2
  const Int nconst = (sigma * sigma - d) / 4;  // w * w' for the norm form
  for (;;) {
    Int a = Q > 0 ? floor_div(P + s, Q) : Int(-(floor_div(P + s, Int(-Q)) + 1));
    Int pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    Int norm = p * p - sigma * p * q + nconst * q * q;
    if (norm == 1 || norm == -1) {
      QuadraticUnit u;
      u.a = 2 * p - q * sigma;
      u.b = q;
      u.norm = norm == 1 ? 1 : -1;
      if (u.a < 0) u.a = -u.a;
      return u;
    }
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
}

inline std::int64_t iabs(std::int64_t x) { return x < 0 ? -x : x; }

/// Binary quadratic form a x^2 + b xy + c y^2.
struct Form {
  std::int64_t a = 0, b = 0, c = 0;

  std::int64_t disc() const { return b * b - 4 * a * c; }
  friend bool operator==(const Form&, const Form&) = default;
  friend auto operator<=>(const Form&, const Form&) = default;
};

/// Reduced indefinite form: |sqrt D - 2|a|| < b < sqrt D, tested exactly.
inline bool is_reduced(const Form& f, std::int64_t d) {
  if (f.b <= 0) return false;
  const std::int64_t s = isqrt(d);  // sqrt D is irrational
  if (f.b > s) return false;
  const std::int64_t two_a = 2 * iabs(f.a);
  // |sqrt D - 2|a|| < b  <=>  sqrt D - b < 2|a| < sqrt D + b
  // sqrt D - b < 2|a|  <=>  2|a| + b > sqrt D  <=>  (2|a| + b) >= s + 1
  // 2|a| < sqrt D + b  <=>  2|a| - b <= s
  return two_a + f.b >= s + 1 && two_a - f.b <= s;
}

/// One reduction step rho(a, b, c) = (c, b', (b'^2 - D) / 4c) with
/// b' = -b mod 2|c| placed in the reduced window.
inline Form rho(const Form& f, std::int64_t d) {
  const std::int64_t s = isqrt(d);
  const std::int64_t c = f.c, two_c = 2 * iabs(c);
  std::int64_t bp = mod(-f.b, two_c);
  if (iabs(c) > s) {
    // -|c| < b' <= |c|
    if (bp > iabs(c)) bp -= two_c;
  } else {
    // sqrt D - 2|c| < b' < sqrt D: largest representative <= s
    bp += ((s - bp) / two_c) * two_c;
    if (bp > s) bp -= two_c;
  }
  return {c, bp, (bp * bp - d) / (4 * c)};
}

inline Form reduce_form(Form f) {
  const std::int64_t d = f.disc();
  require(d > 0 && !is_square(d), ErrorKind::invalid_discriminant, "indefinite form with non-square discriminant required");
  for (int guard = 0; !is_reduced(f, d); ++guard) {
    require(guard < 100000, ErrorKind::invalid_argument, "form reduction did not converge");
    f = rho(f, d);
  }
  return f;
}

/// The reduction cycle of a reduced form.
inline std::vector<Form> form_cycle(const Form& start) {
  const std::int64_t d = start.disc();
  std::vector<Form> cyc{start};
  for (Form g = rho(start, d); !(g == start); g = rho(g, d)) cyc.push_back(g);
  return cyc;
}

/// All reduced forms of discriminant D, sorted. `spf` is a smallest-prime-
/// factor table covering D / 4.
inline std::vector<Form> reduced_forms(std::int64_t d, const std::vector<std::int32_t>& spf) {
  std::vector<Form> out;
  const std::int64_t s = isqrt(d);
  std::vector<std::int64_t> divs;
  for (std::int64_t b = (d % 2 == 0 ? 2 : 1); b <= s; b += 2) {
    const std::int64_t m = (d - b * b) / 4;  // = |a| |c|, a c < 0
    if (m <= 0) continue;
    divs.assign(1, 1);
    for (std::int64_t r = m; r > 1;) {
      const std::int64_t p = spf[r];
      int e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      const std::size_t base = divs.size();
      std::int64_t pk = 1;
      for (int k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
      }
    }
    for (std::int64_t a : divs) {
      if (2 * a + b < s + 1 || 2 * a - b > s) continue;
      const std::int64_t c = m / a;
      out.push_back({a, b, -c});
      out.push_back({-a, b, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::int32_t> smallest_prime_factors(std::int64_t n) {
  std::vector<std::int32_t> spf(static_cast<std::size_t>(std::max<std::int64_t>(n + 1, 2)), 0);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (std::int64_t j = i; j <= n; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::int32_t>(i);
  }
  return spf;
}

struct FormCycleInfo {
  Form representative;   ///< smallest form in the cycle
  std::int64_t min_abs_a;  ///< min |f(x, y)| over nonzero integer vectors
  std::size_t length;
};

/// Reduction cycles of primitive forms of discriminant D, i.e. the narrow
/// classes of invertible ideals of the order of discriminant D.
inline std::vector<FormCycleInfo> primitive_form_cycles(std::int64_t d, const std::vector<std::int32_t>& spf) {
  auto forms = reduced_forms(d, spf);
  std::vector<char> seen(forms.size(), 0);
  std::vector<FormCycleInfo> out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (seen[i]) continue;
    const Form& f = forms[i];
    const bool primitive = std::gcd(std::gcd(f.a, f.b), f.c) == 1;
    FormCycleInfo info{f, iabs(f.a), 0};
    Form g = f;
    do {
      auto it = std::lower_bound(forms.begin(), forms.end(), g);
      seen[static_cast<std::size_t>(it - forms.begin())] = 1;
      info.min_abs_a = std::min(info.min_abs_a, iabs(g.a));
      ++info.length;
      g = rho(g, d);
    } while (!(g == f));
    if (primitive) out.push_back(info);
  }
  return out;
}

}  // namespace torbit
