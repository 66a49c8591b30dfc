#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace torbit {

using Int = mpz_class;
using Rat = mpq_class;

inline Int abs(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

/// Exact quotient a / b in lowest terms.
inline Rat ratio(const Int& a, const Int& b) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Int& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) {
  Rat y = x;
  y.canonicalize();
  return y.get_str();
}

inline Int isqrt(const Int& n) {
  require(n >= 0, ErrorKind::invalid_argument, "isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline std::int64_t isqrt(std::int64_t n) {
  require(n >= 0, ErrorKind::invalid_argument, "isqrt of negative");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(std::int64_t n) {
  if (n < 0) return false;
  auto r = isqrt(n);
  return r * r == n;
}

inline bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  auto r = a % m;
  return r < 0 ? r + m : r;
}

/// Floor division for signed 64-bit values.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_mod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Int, Int, Int> xgcd(const Int& a, const Int& b) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {g, s, t};
}

inline Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

inline std::int64_t to_i64(const Int& x) {
  require(x.fits_slong_p(), ErrorKind::invalid_argument, "integer does not fit 64 bits: " + x.get_str());
  return x.get_si();
}

inline std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  __int128 r = 1, x = mod(b, m);
  while (e > 0) {
    if (e & 1) r = (r * x) % m;
    x = (x * x) % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

/// Prime factorization by trial division; adequate for the desk-scale
/// discriminants handled here (< 10^14).
inline std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> out;
  n = abs(n);
  if (n < 2) return out;
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<bool> sieve(static_cast<std::size_t>(std::max<std::int64_t>(n + 1, 2)), true);
  std::vector<std::int64_t> ps;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    ps.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return ps;
}

inline bool is_squarefree(std::int64_t n) {
  for (auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return n != 0;
}

inline Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline double to_double(const Int& x) { return x.get_d(); }
inline double to_double(const Rat& x) { return x.get_d(); }

/// log|x| for big integers without overflow.
inline double log_abs(const Int& x) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace torbit
