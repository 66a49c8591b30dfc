#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "fields.hpp"
#include "units.hpp"

namespace torbit {

/// Fractional ideal of an order: the lattice (1/den) * rows(num), with num in
/// lower Hermite form over the order basis. The pair (num, den) is canonical.
class FractionalIdeal {
 public:
  FractionalIdeal() = default;

  /// Ideal spanned over Z by the given elements (coordinates over the order
  /// basis); they must span a rank-n lattice stable under the order.
  static FractionalIdeal from_generators(const Order& o, const RatMatrix& gens) {
    FractionalIdeal i;
    i.order_ = o;
    i.lat_ = canonical_lattice(gens);
    require(i.lat_.num.rows() == static_cast<std::size_t>(o.degree()), ErrorKind::invalid_lattice,
            "ideal lattice has rank < n");
    require(i.is_stable(), ErrorKind::invalid_lattice, "lattice is not stable under the order");
    return i;
  }

  static FractionalIdeal unit(const Order& o) {
    return from_generators(o, RatMatrix::identity(o.degree()));
  }

  /// x * O for a field element x != 0.
  static FractionalIdeal principal(const Order& o, const FieldElem& x) {
    const int n = o.degree();
    RatMatrix gens(n, n);
    for (int i = 0; i < n; ++i) {
      auto prod = o.field().mul(x, o.basis().row_vec(i));
      auto c = o.coords(prod);
      for (int j = 0; j < n; ++j) gens(i, j) = c[j];
    }
    return from_generators(o, gens);
  }

  const Order& order() const { return order_; }
  int degree() const { return order_.degree(); }
  const IntMatrix& numerator() const { return lat_.num; }
  const Int& denominator() const { return lat_.den; }

  Rat norm() const {
    Int d = 1;
    for (int i = 0; i < degree(); ++i) d *= lat_.num(i, i);
    return ratio(d, ipow(lat_.den, degree()));
  }

  bool is_integral() const { return lat_.den == 1; }

  /// Basis rows over the order basis.
  RatMatrix basis() const { return lat_.basis(); }

  /// Basis rows over the power basis of the field.
  RatMatrix field_basis() const { return basis() * order_.basis(); }

  FractionalIdeal scaled(const Rat& q) const {
    RatMatrix b = basis();
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= q;
    return from_generators(order_, b);
  }

  friend bool operator==(const FractionalIdeal& a, const FractionalIdeal& b) {
    return a.order_ == b.order_ && a.lat_ == b.lat_;
  }

  friend FractionalIdeal operator*(const FractionalIdeal& a, const FractionalIdeal& b) {
    const int n = a.degree();
    RatMatrix gens(n * n, n);
    RatMatrix ba = a.basis(), bb = b.basis();
    const auto& mult = a.order_.mult_table();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p) {
          if (ba(i, p) == 0) continue;
          for (int q = 0; q < n; ++q) {
            if (bb(j, q) == 0) continue;
            Rat c = ba(i, p) * bb(j, q);
            for (int k = 0; k < n; ++k) gens(i * n + j, k) += c * mult[(p * n + q) * n + k];
          }
        }
    return from_generators(a.order_, gens);
  }

  /// Colon ideal (O : I) = {x in K : x I in O}; the inverse when I is invertible.
  FractionalIdeal inverse() const {
    const int n = degree();
    const IntMatrix& h = lat_.num;
    Int m = 1;
    for (int i = 0; i < n; ++i) m *= h(i, i);  // index of rows(num) in O; m O lies in it
    // y in O with y * h_r in m O for all rows h_r.
    IntMatrix cond(n, n * n);
    const auto& mult = order_.mult_table();
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r)
        for (int q = 0; q < n; ++q) {
          if (h(r, q) == 0) continue;
          for (int k = 0; k < n; ++k) cond(i, r * n + k) += h(r, q) * mult[(i * n + q) * n + k];
        }
    IntMatrix ys = solve_mod_lattice(cond, m);
    RatMatrix gens = to_rat(ys);
    Rat scale = Rat(lat_.den) / Rat(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gens(i, j) *= scale;
    return from_generators(order_, gens);
  }

  /// Exact norm of an element given by integer coordinates over basis().
  Rat element_norm(std::span<const Int> c) const {
    auto x = order_coords(c);
    return ratio(order_.norm(x), ipow(lat_.den, degree()));
  }

  /// Numerator coordinates (over the order basis, times den) of sum c_i b_i.
  std::vector<Int> order_coords(std::span<const Int> c) const {
    const int n = degree();
    std::vector<Int> x(n, 0);
    for (int i = 0; i < n; ++i) {
      if (c[i] == 0) continue;
      for (int j = 0; j <= i; ++j) x[j] += c[i] * lat_.num(i, j);
    }
    return x;
  }

  FieldElem element(std::span<const Int> c) const {
    auto x = order_coords(c);
    FieldElem f = order_.to_field(std::span<const Int>(x));
    for (auto& v : f) v /= lat_.den;
    return f;
  }

  /// Real embedding of the basis: rows sigma(b_i).
  RealMatrix embedding_matrix() const {
    const int n = degree();
    RealMatrix e(n, n);
    const double inv_den = 1.0 / lat_.den.get_d();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k <= i; ++k) s += lat_.num(i, k).get_d() * order_.embedding(k, j);
        e(i, j) = s * inv_den;
      }
    return e;
  }

 private:
  bool is_stable() const {
    const int n = degree();
    RatMatrix b = basis();
    RatMatrix inv = inverse_rat(b);
    const auto& mult = order_.mult_table();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        std::vector<Rat> prod(n, Rat(0));
        for (int q = 0; q < n; ++q) {
          if (b(i, q) == 0) continue;
          for (int t = 0; t < n; ++t) prod[t] += b(i, q) * mult[(k * n + q) * n + t];
        }
        for (auto& c : row_times<Rat>(prod, inv))
          if (!is_integer(c)) return false;
      }
    return true;
  }

  static RatMatrix inverse_rat(const RatMatrix& m) { return ::torbit::inverse(m); }

  Order order_;
  RatLattice lat_;
};

/// Rows sigma(b_i) of an ideal basis.
inline EmbeddedLattice minkowski_embedding(const FractionalIdeal& i, int precision_bits = 53) {
  require(precision_bits <= i.order().field().root_bits(), ErrorKind::precision_insufficient,
          "requested precision exceeds certified root precision");
  return EmbeddedLattice::from_basis(i.embedding_matrix());
}

/// Multiplier ring {x in K : x L in L} of a lattice L, as an order.
/// Such x satisfy x f_0 in L, so x = sum y_a g_a with g_a = f_a / f_0 and
/// y integral; the remaining conditions x f_i in L are congruences on y.
inline Order multiplier_ring(const FractionalIdeal& l) {
  const int n = l.degree();
  const auto& k = l.order().field();
  RatMatrix f = l.field_basis();
  RatMatrix finv = inverse(f);
  FieldElem f0_inv = k.inverse(f.row_vec(0));
  RatMatrix g(n, n);
  for (int a = 0; a < n; ++a) {
    auto ga = k.mul(f.row_vec(a), f0_inv);
    for (int j = 0; j < n; ++j) g(a, j) = ga[j];
  }
  RatMatrix cond(n, n * n);
  Int s = 1;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      auto c = row_times<Rat>(k.mul(g.row_vec(a), f.row_vec(i)), finv);
      for (int j = 0; j < n; ++j) {
        cond(a, i * n + j) = c[j];
        s = lcm(s, c[j].get_den());
      }
    }
  IntMatrix icond(n, n * n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n * n; ++j) icond(a, j) = Rat(cond(a, j) * s).get_num();
  IntMatrix ys = solve_mod_lattice(icond, s);
  return Order::from_basis(k, to_rat(ys) * g);
}

/// Calls `visit(coords, |N(x)|)` for every nonzero x in the lattice with
/// |N(x)| <= bound, at least once per orbit under the units of `units`
/// (coordinates over l.basis(), exact norm). The log vector of some unit
/// multiple of x, shifted by log|N(x)|/n, lies in the fundamental
/// parallelepiped of the log-unit lattice; that parallelepiped is covered by
/// small cells and each cell contributes one box of the embedded lattice.
/// The parallelepiped is centred at the origin, which keeps the coefficients
/// of the visited elements small. Double precision limits this to units of
/// moderate size; quadratic lattices go through binary forms instead.
inline void for_each_small_norm(const FractionalIdeal& l, const UnitGroup& units, const Rat& bound,
                                const std::function<void(const std::vector<Int>&, const Rat&)>& visit) {
  const int n = l.degree();
  const RealMatrix emb = l.embedding_matrix();
  const RealMatrix& u = units.log_lattice;
  constexpr double cell = 0.5;
  std::vector<int> m(n - 1);
  double radius = 0;
  for (int i = 0; i < n - 1; ++i) {
    m[i] = std::max(1, static_cast<int>(std::ceil(u.row(i).norm() / cell)));
    radius += 0.5 * u.row(i).norm() / m[i];
  }
  std::vector<RealVector> centers;
  std::vector<int> idx(n - 1, 0);
  while (true) {
    RealVector c = RealVector::Zero(n);
    for (int i = 0; i < n - 1; ++i) c += ((idx[i] + 0.5) / m[i] - 0.5) * u.row(i).transpose();
    centers.push_back(c);
    int pos = 0;
    while (pos < n - 1 && ++idx[pos] == m[pos]) idx[pos++] = 0;
    if (pos == n - 1) break;
  }
  const double b = bound.get_d();
  const double shift = std::log(b) / n;
  // Small elements of a skewed lattice come out of heavy cancellation, so
  // their embeddings carry relative errors far above machine precision.
  const double pad = 1e-5;
  for_each_in_log_cells(emb, centers, radius + pad, shift, [&](const CoeffVector& c, const RealVector& v) {
    double prod = 1;
    for (int j = 0; j < n; ++j) prod *= std::fabs(v(j));
    if (prod > b * (1 + 1e-4)) return;
    std::vector<Int> coords(c.begin(), c.end());
    Rat nx = abs(l.element_norm(coords));
    if (nx <= bound) visit(coords, nx);
  });
}

struct NormMinimum {
  Rat norm;                 ///< min |N(x)| over nonzero x in the lattice
  std::vector<Int> witness; ///< coordinates over the lattice basis
};

namespace detail {

/// Degree 2: |N(x)| / N(L) on the lattice basis is an integral binary form
/// whose minimum is the least |a| along its reduction cycle. The cycle is
/// walked with the substitution matrix so the minimiser is exact.
inline NormMinimum quadratic_minimal_norm(const FractionalIdeal& l) {
  const Rat nl = l.norm();
  auto value = [&](long x, long y) {
    std::vector<Int> c{Int(x), Int(y)};
    return Rat(l.element_norm(c) / nl);
  };
  const Rat fa = value(1, 0), fc = value(0, 1), fb = value(1, 1) - fa - fc;
  require(is_integer(fa) && is_integer(fb) && is_integer(fc), ErrorKind::invalid_lattice,
          "norm form of the lattice is not integral");
  Form f{to_i64(fa.get_num()), to_i64(fb.get_num()), to_i64(fc.get_num())};
  const std::int64_t d = f.disc();
  // (x, y) = M (X, Y); the first column of M realises the current a.
  Int m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  auto step = [&]() {
    Form g = rho(f, d);
    const std::int64_t t = (g.b + f.b) / (2 * f.c);
    // M <- M [[0, -1], [1, t]]
    Int n00 = m01, n01 = -m00 + t * m01, n10 = m11, n11 = -m10 + t * m11;
    m00 = n00, m01 = n01, m10 = n10, m11 = n11;
    f = g;
  };
  NormMinimum best{Rat(iabs(f.a)), {m00, m10}};
  auto consider = [&]() {
    if (Rat(iabs(f.a)) < best.norm) best = {Rat(iabs(f.a)), {m00, m10}};
  };
  for (int guard = 0; !is_reduced(f, d); ++guard) {
    require(guard < 100000, ErrorKind::invalid_argument, "form reduction did not converge");
    step();
    consider();
  }
  const Form start = f;
  do {
    step();
    consider();
  } while (!(f == start));
  best.norm *= nl;
  return best;
}

}  // namespace detail

/// Exact minimum of |N(x)| over nonzero x in the lattice.
inline NormMinimum minimal_norm(const FractionalIdeal& l, const UnitGroup& units) {
  if (l.degree() == 2) return detail::quadratic_minimal_norm(l);
  // Start from the best basis vector of an LLL-reduced basis.
  const int n = l.degree();
  RealMatrix b = l.embedding_matrix();
  Eigen::Matrix<std::int64_t, -1, -1> t;
  lll_reduce(b, 0.99, &t);
  NormMinimum best;
  for (int i = 0; i < n; ++i) {
    std::vector<Int> c(n);
    for (int j = 0; j < n; ++j) c[j] = static_cast<long>(t(i, j));
    Rat nx = abs(l.element_norm(c));
    if (best.witness.empty() || nx < best.norm) best = {nx, c};
  }
  for_each_small_norm(l, units, best.norm, [&](const std::vector<Int>& c, const Rat& nx) {
    if (nx < best.norm || (nx == best.norm && c < best.witness)) best = {nx, c};
  });
  return best;
}

/// Generator x with x O = I when the ideal is principal. For an invertible
/// ideal every nonzero element has |N(x)| >= N(I), with equality exactly for
/// generators.
inline std::optional<FieldElem> principal_generator(const FractionalIdeal& i, const UnitGroup& units) {
  if (i.degree() == 2) {
    auto mn = detail::quadratic_minimal_norm(i);
    if (mn.norm != i.norm()) return std::nullopt;
    return i.element(mn.witness);
  }
  std::optional<FieldElem> gen;
  const Rat target = i.norm();
  for_each_small_norm(i, units, target, [&](const std::vector<Int>& c, const Rat& nx) {
    if (gen || nx != target) return;
    FieldElem x = i.element(c);
    if (FractionalIdeal::principal(i.order(), x) == i) gen = x;
  });
  return gen;
}

struct ClassTest {
  bool equal = false;
  std::optional<FieldElem> witness;  ///< x with x I = J when equal
};

/// Whether x I = J for some field element x, with the witness.
inline ClassTest class_equal(const FractionalIdeal& i, const FractionalIdeal& j, const UnitGroup& units) {
  require(i.order() == j.order(), ErrorKind::invalid_argument, "ideals over different orders");
  FractionalIdeal a = j * i.inverse();
  auto g = principal_generator(a, units);
  if (!g) return {};
  // Confirm x I = J exactly (a is J I^{-1}; for invertible I this is J).
  if (FractionalIdeal::principal(i.order(), *g) * i == j) return {true, g};
  return {};
}

inline ClassTest class_equal(const FractionalIdeal& i, const FractionalIdeal& j) {
  return class_equal(i, j, unit_group(i.order()));
}

/// All integral ideals of the order with norm <= bound, sorted by norm and
/// then by Hermite form.
inline std::vector<FractionalIdeal> enumerate_integral_ideals(const Order& o, long bound) {
  require(bound >= 1, ErrorKind::invalid_argument, "norm bound must be >= 1");
  const int n = o.degree();
  std::vector<std::int64_t> mult(o.mult_table().size());
  for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = to_i64(o.mult_table()[i]);
  std::vector<FractionalIdeal> out;
  std::vector<std::int64_t> h(n * n, 0), prod(n);
  std::vector<std::int64_t> diag(n);

  // Row-lattice membership for lower-triangular h, from the last column.
  auto member = [&](std::vector<std::int64_t> y) {
    for (int c = n - 1; c >= 0; --c) {
      const std::int64_t d = h[c * n + c];
      if (y[c] % d != 0) return false;
      const std::int64_t q = y[c] / d;
      if (q != 0)
        for (int k = 0; k <= c; ++k) y[k] -= q * h[c * n + k];
    }
    return true;
  };
  auto stable = [&]() {
    for (int r = 0; r < n; ++r)
      for (int e = 0; e < n; ++e) {
        for (int t = 0; t < n; ++t) {
          std::int64_t s = 0;
          for (int q = 0; q <= r; ++q) s += h[r * n + q] * mult[(e * n + q) * n + t];
          prod[t] = s;
        }
        if (!member(prod)) return false;
      }
    return true;
  };
  std::function<void(int, int)> fill = [&](int row, int col) {
    if (row == n) {
      if (stable()) {
        IntMatrix num(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) num(i, j) = h[i * n + j];
        out.push_back(FractionalIdeal::from_generators(o, to_rat(num)));
      }
      return;
    }
    if (col == row) {
      fill(row + 1, 0);
      return;
    }
    for (std::int64_t v = 0; v < diag[col]; ++v) {
      h[row * n + col] = v;
      fill(row, col + 1);
    }
    h[row * n + col] = 0;
  };
  std::function<void(int, long)> choose_diag = [&](int i, long prod_so_far) {
    if (i == n) {
      for (int k = 0; k < n; ++k) h[k * n + k] = diag[k];
      fill(0, 0);
      return;
    }
    for (long d = 1; prod_so_far * d <= bound; ++d) {
      diag[i] = d;
      choose_diag(i + 1, prod_so_far * d);
    }
  };
  choose_diag(0, 1);
  std::sort(out.begin(), out.end(), [](const FractionalIdeal& a, const FractionalIdeal& b) {
    if (a.norm() != b.norm()) return a.norm() < b.norm();
    const auto &x = a.numerator(), &y = b.numerator();
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j)
        if (x(i, j) != y(i, j)) return x(i, j) < y(i, j);
    return false;
  });
  return out;
}

/// Classical Minkowski bound (n! / n^n) sqrt(disc) for totally real fields.
inline double minkowski_bound(const Order& o) {
  const int n = o.degree();
  return factorial(n).get_d() / std::pow(n, n) * std::sqrt(o.disc().get_d());
}

struct IdealClass {
  FractionalIdeal representative;
  Int min_norm;  ///< m([J], K)
};

/// One representative per ideal class of a maximal order, each the first
/// (smallest norm, then Hermite order) integral ideal of its class.
inline std::vector<IdealClass> class_representatives(const Order& o, const UnitGroup& units) {
  require(o.is_maximal(), ErrorKind::unsupported, "class representatives need the maximal order");
  const long bound = static_cast<long>(std::floor(minkowski_bound(o) + 1e-9));
  std::vector<IdealClass> classes;
  for (auto& i : enumerate_integral_ideals(o, std::max(1L, bound))) {
    bool known = false;
    for (auto& c : classes)
      if (class_equal(c.representative, i, units).equal) {
        known = true;
        break;
      }
    if (!known) classes.push_back({i, i.norm().get_num()});
  }
  return classes;
}

inline std::vector<IdealClass> class_representatives(const Order& o) {
  return class_representatives(o, unit_group(o));
}

/// m([J], K): the least norm of an integral ideal in the class of J, found by
/// ascending-norm enumeration up to the Minkowski bound.
inline Int minimal_class_norm(const FractionalIdeal& j, const UnitGroup& units) {
  const Order& o = j.order();
  require(o.is_maximal(), ErrorKind::unsupported, "minimal class norm needs the maximal order");
  const long bound = static_cast<long>(std::floor(minkowski_bound(o) + 1e-9));
  for (auto& i : enumerate_integral_ideals(o, std::max(1L, bound)))
    if (class_equal(j, i, units).equal) return i.norm().get_num();
  fail(ErrorKind::search_exhausted, "no integral ideal below the Minkowski bound in the class");
}

inline Int minimal_class_norm(const IdealClass& c, const UnitGroup& units) {
  return minimal_class_norm(c.representative, units);
}

struct MinkowskiStat {
  Int m_k;            ///< max over classes of m([J], K)
  std::size_t classes = 0;
  std::size_t bad_classes = 0;  ///< h_delta(K)
  std::vector<Int> class_min_norms;
};

/// m(K), class count, and h_delta(K) = #{classes with m([J],K) > delta sqrt(disc)}.
inline MinkowskiStat field_minkowski_stat(const Order& o, double delta, const UnitGroup& units) {
  auto classes = class_representatives(o, units);
  MinkowskiStat st;
  st.classes = classes.size();
  st.m_k = 0;
  const double thresh = delta * std::sqrt(o.disc().get_d());
  for (auto& c : classes) {
    st.m_k = std::max(st.m_k, c.min_norm);
    st.class_min_norms.push_back(c.min_norm);
    if (c.min_norm.get_d() > thresh) ++st.bad_classes;
  }
  return st;
}

inline MinkowskiStat field_minkowski_stat(const Order& o, double delta) {
  return field_minkowski_stat(o, delta, unit_group(o));
}

}  // namespace torbit
