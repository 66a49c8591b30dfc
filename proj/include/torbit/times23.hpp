#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "arith.hpp"

namespace torbit {

/// A subset of (Z/q)^x closed under x -> 2x and x -> 3x.
struct MultOrbitSet {
  std::int64_t q = 1;
  std::vector<std::int64_t> s;  ///< sorted residues
  std::int64_t group_order = 1;  ///< order of <2, 3> in (Z/q)^x
};

/// Multiplicative order of a mod q (gcd(a, q) = 1).
inline std::int64_t multiplicative_order(std::int64_t a, std::int64_t q) {
  if (q == 1) return 1;
  std::int64_t x = a % q, k = 1;
  while (x != 1) {
    x = x * a % q;
    ++k;
  }
  return k;
}

/// |<2, 3>| = ord(2) ord(3) / |<2> cap <3>|, the intersection being the
/// subgroup of <3> generated by the least power of 3 that lies in <2>.
inline std::int64_t group_order_23(std::int64_t q) {
  require(q >= 1 && std::gcd(q, std::int64_t{6}) == 1, ErrorKind::invalid_modulus, "q must be coprime to 6");
  if (q == 1) return 1;
  const std::int64_t o2 = multiplicative_order(2, q), o3 = multiplicative_order(3, q);
  std::vector<char> in2(static_cast<std::size_t>(q), 0);
  for (std::int64_t x = 1, k = 0; k < o2; ++k, x = x * 2 % q) in2[x] = 1;
  std::int64_t j = 1;
  for (std::int64_t y = 3 % q; !in2[y]; y = y * 3 % q) ++j;
  return o2 * j;
}

inline MultOrbitSet orbit_closure_23(std::int64_t q, std::int64_t seed) {
  require(q >= 1 && std::gcd(q, std::int64_t{6}) == 1, ErrorKind::invalid_modulus, "q must be coprime to 6");
  seed = mod(seed, q);
  require(std::gcd(seed, q) == 1 || q == 1, ErrorKind::invalid_argument, "seed must be a unit mod q");
  MultOrbitSet m;
  m.q = q;
  std::vector<char> seen(static_cast<std::size_t>(q), 0);
  std::vector<std::int64_t> queue{seed};
  seen[seed] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (std::int64_t k : {2, 3}) {
      const std::int64_t y = queue[i] * k % q;
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  m.s.reserve(queue.size());
  for (std::int64_t x = 0; x < q; ++x)
    if (seen[x]) m.s.push_back(x);
  m.group_order = group_order_23(q);
  return m;
}

/// Uniform probability measure on S / q.
struct EmpiricalMeasure {
  MultOrbitSet support;
  std::size_t size() const { return support.s.size(); }
};

inline EmpiricalMeasure uniform_measure(MultOrbitSet s) { return {std::move(s)}; }

/// Cell counts of the level-n dyadic partition [j/2^n, (j+1)/2^n).
inline std::vector<std::int64_t> dyadic_counts(const MultOrbitSet& s, int n) {
  require(n >= 0 && n <= 40, ErrorKind::invalid_argument, "dyadic level must lie in [0, 40]");
  std::vector<std::int64_t> counts;
  if (n <= 20) counts.assign(std::size_t{1} << n, 0);
  std::vector<std::int64_t> cells;
  for (std::int64_t x : s.s) {
    // floor(2^n x / q) without overflow for q < 2^22.
    const std::int64_t cell = static_cast<std::int64_t>((static_cast<__int128>(x) << n) / s.q);
    if (n <= 20)
      ++counts[cell];
    else
      cells.push_back(cell);
  }
  if (n > 20) {
    std::sort(cells.begin(), cells.end());
    for (std::size_t i = 0; i < cells.size();) {
      std::size_t j = i;
      while (j < cells.size() && cells[j] == cells[i]) ++j;
      counts.push_back(static_cast<std::int64_t>(j - i));
      i = j;
    }
  }
  return counts;
}

/// Entropy of the measure on the n-fold refinement of {[0,1/2), [1/2,1)}
/// under x -> 2x; its atoms are the dyadic intervals of length 2^-n.
inline double partition_entropy(const EmpiricalMeasure& m, int n) {
  require(n >= 1, ErrorKind::invalid_argument, "n must be >= 1");
  // H = log N - sum_c (c / N) log c over the cell counts c, grouped by value
  // so that equal masses contribute one exact term.
  std::map<std::int64_t, std::int64_t> multiplicity;
  for (std::int64_t c : dyadic_counts(m.support, n))
    if (c > 1) ++multiplicity[c];
  const double total = static_cast<double>(m.size());
  double weighted = 0;
  for (auto [c, k] : multiplicity) weighted += static_cast<double>(k * c) * std::log(static_cast<double>(c));
  return std::log(total) - weighted / total;
}

/// n_q = min{n : 2^n > q}.
inline int separation_level(std::int64_t q) {
  int n = 0;
  while ((std::int64_t{1} << n) <= q) ++n;
  return n;
}

struct EntropyCheck {
  double h1 = 0, floor = 0;
  bool ok = false;
};

inline EntropyCheck entropy_lower_bound_check(const EmpiricalMeasure& m) {
  EntropyCheck c;
  c.h1 = partition_entropy(m, 1);
  c.floor = std::log(static_cast<double>(m.size())) / separation_level(m.support.q);
  c.ok = c.h1 >= c.floor - 1e-9;
  return c;
}

/// | #(S cap q [a, b)) / |S| - (b - a) |, counted exactly.
inline double discrepancy(const EmpiricalMeasure& m, const Rat& a, const Rat& b) {
  require(a >= 0 && a < b && b <= 1, ErrorKind::invalid_argument, "need 0 <= a < b <= 1");
  std::int64_t count = 0;
  for (std::int64_t x : m.support.s) {
    const Rat v(x, m.support.q);
    if (v >= a && v < b) ++count;
  }
  const Rat diff = Rat(count, static_cast<long>(m.size())) - (b - a);
  return std::fabs(diff.get_d());
}

/// max over dyadic intervals of levels 1..max_level of the discrepancy.
inline double max_dyadic_discrepancy(const EmpiricalMeasure& m, int max_level = 8) {
  const double total = static_cast<double>(m.size());
  auto fine = dyadic_counts(m.support, max_level);
  double worst = 0;
  for (int level = max_level; level >= 1; --level) {
    const double len = std::ldexp(1.0, -level);
    for (std::int64_t c : fine) worst = std::max(worst, std::fabs(c / total - len));
    std::vector<std::int64_t> coarse(fine.size() / 2);
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = fine[2 * j] + fine[2 * j + 1];
    fine = std::move(coarse);
  }
  return worst;
}

struct ExpSumProfile {
  std::int64_t q = 0;
  std::int64_t group_order = 0;
  double max_normalized_sum = 0;
};

/// max over a in (Z/q)^x of |sum_{x in G} e(a x / q)| / |G|, G = <2, 3>.
/// The sum only depends on the coset aG, so one representative per coset
/// is evaluated.
inline ExpSumProfile exp_sum_profile(std::int64_t q) {
  require(q >= 5 && is_prime(q), ErrorKind::invalid_modulus, "exponential sums need a prime q >= 5");
  auto g = orbit_closure_23(q, 1);
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) roots[k] = std::polar(1.0, 2 * std::numbers::pi * k / q);
  std::vector<char> covered(static_cast<std::size_t>(q), 0);
  ExpSumProfile p{q, static_cast<std::int64_t>(g.s.size()), 0};
  for (std::int64_t a = 1; a < q; ++a) {
    if (covered[a]) continue;
    std::complex<double> sum = 0;
    for (std::int64_t x : g.s) {
      const std::int64_t ax = a * x % q;
      covered[ax] = 1;
      sum += roots[ax];
    }
    p.max_normalized_sum = std::max(p.max_normalized_sum, std::abs(sum) / static_cast<double>(g.s.size()));
  }
  return p;
}

}  // namespace torbit
