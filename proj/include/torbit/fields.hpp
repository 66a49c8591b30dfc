#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "arith.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace torbit {

/// Element of K = Q[x]/(f) in the power basis 1, x, ..., x^{n-1}.
using FieldElem = std::vector<Rat>;

/// Lower-triangular Hermite form of a full-rank integer lattice: row i has its
/// pivot (positive) on the diagonal and entries strictly left of it; entries
/// below a pivot are reduced into [0, pivot). Canonical for the lattice.
inline IntMatrix hnf_lower(const IntMatrix& gens) {
  const std::size_t n = gens.cols();
  IntMatrix rev(gens.rows(), n);
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) rev(i, j) = gens(i, n - 1 - j);
  IntMatrix h = hnf(rev);
  require(h.rows() == n, ErrorKind::invalid_lattice, "lattice is not of full rank");
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(n - 1 - i, n - 1 - j) = h(i, j);
  return out;
}

/// Canonical (denominator, lower HNF numerator) form of a full-rank Q-lattice.
struct RatLattice {
  Int den = 1;
  IntMatrix num;

  RatMatrix basis() const {
    RatMatrix b = to_rat(num);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) /= den;
    return b;
  }

  friend bool operator==(const RatLattice&, const RatLattice&) = default;
};

inline RatLattice canonical_lattice(const RatMatrix& gens) {
  Int den = 1;
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) den = lcm(den, gens(i, j).get_den());
  IntMatrix num(gens.rows(), gens.cols());
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      Rat v = gens(i, j) * den;
      num(i, j) = v.get_num();
    }
  IntMatrix h = hnf_lower(num);
  Int g = 0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) g = gcd(g, h(i, j));
  g = gcd(g, den);
  if (g > 1) {
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) /= g;
    den /= g;
  }
  return {den, h};
}

namespace detail {

/// Product in Q[x]/(f), f monic.
inline FieldElem poly_mulmod(const FieldElem& a, const FieldElem& b, const IntPoly& f) {
  const std::size_t n = f.size() - 1;
  std::vector<Rat> prod(2 * n - 1, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
  }
  for (std::size_t d = prod.size() - 1; d >= n; --d) {
    if (prod[d] != 0) {
      Rat c = prod[d];
      for (std::size_t k = 0; k < n; ++k) prod[d - n + k] -= c * Rat(f[k]);
      prod[d] = 0;
    }
  }
  prod.resize(n);
  return prod;
}

/// Characteristic polynomial coefficients (c1, c2, ..., cn) of an integer
/// matrix, so that charpoly = x^n - c1 x^{n-1} + c2 x^{n-2} - ...; n <= 3.
inline std::vector<Int> char_coeffs(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<Int> c;
  Int tr = 0;
  for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
  c.push_back(tr);
  if (n >= 2) {
    Int s2 = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s2 += m(i, i) * m(j, j) - m(i, j) * m(j, i);
    c.push_back(s2);
  }
  if (n >= 3) c.push_back(det(m));
  require(n <= 3, ErrorKind::degree_unsupported, "char_coeffs supports n <= 3");
  return c;
}

/// Kernel of an n x n matrix over F_p (row-vector convention x M = 0).
inline std::vector<std::vector<std::int64_t>> kernel_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  const std::size_t n = m.size();
  // Column-reduce M^T to find the left kernel: solve x M = 0 <=> M^T x^T = 0.
  std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = mod(m[j][i], p);
  std::vector<int> pivot_col(n, -1);
  std::size_t r = 0;
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[r]);
    std::int64_t inv = powmod(a[r][c], p - 2, p);
    for (auto& v : a[r]) v = (v * inv) % p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      std::int64_t f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) a[i][j] = mod(a[i][j] - f * a[r][j], p);
    }
    pivot_col[r] = static_cast<int>(c);
    is_pivot[c] = true;
    ++r;
  }
  std::vector<std::vector<std::int64_t>> ker;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::int64_t> v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = mod(-a[i][free], p);
    ker.push_back(v);
  }
  return ker;
}

}  // namespace detail

/// Exact structure of an order: basis over the power basis plus integral
/// multiplication constants e_i e_j = sum_k c_{ijk} e_k.
struct OrderData {
  IntPoly min_poly;
  RatLattice lattice;
  RatMatrix basis;
  RatMatrix basis_inv;
  std::vector<Int> mult;  // (i*n + j)*n + k
  Int disc;
};

inline std::vector<Int> order_mult_table(const IntPoly& f, const RatMatrix& basis, const RatMatrix& inv) {
  const std::size_t n = basis.rows();
  std::vector<Int> table(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      FieldElem prod = detail::poly_mulmod(basis.row_vec(i), basis.row_vec(j), f);
      auto coords = row_times<Rat>(prod, inv);
      for (std::size_t k = 0; k < n; ++k) {
        require(is_integer(coords[k]), ErrorKind::invalid_lattice, "basis is not closed under multiplication");
        table[(i * n + j) * n + k] = coords[k].get_num();
        table[(j * n + i) * n + k] = coords[k].get_num();
      }
    }
  return table;
}

inline Int trace_form_disc(std::size_t n, const std::vector<Int>& mult) {
  // Tr(e_k) = trace of multiplication by e_k.
  std::vector<Int> tr(n, 0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) tr[k] += mult[(k * n + i) * n + i];
  IntMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int t = 0;
      for (std::size_t k = 0; k < n; ++k) t += mult[(i * n + j) * n + k] * tr[k];
      gram(i, j) = t;
    }
  return det(gram);
}

inline OrderData make_order_data(const IntPoly& f, const RatMatrix& gens) {
  OrderData d;
  d.min_poly = f;
  d.lattice = canonical_lattice(gens);
  d.basis = d.lattice.basis();
  d.basis_inv = inverse(d.basis);
  d.mult = order_mult_table(f, d.basis, d.basis_inv);
  d.disc = trace_form_disc(d.basis.rows(), d.mult);
  return d;
}

namespace detail {

inline IntMatrix mult_matrix(std::size_t n, const std::vector<Int>& mult, std::span<const Int> x) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] == 0) continue;
      for (std::size_t k = 0; k < n; ++k) m(i, k) += x[j] * mult[(i * n + j) * n + k];
    }
  return m;
}

inline std::vector<Int> mul_coords(std::size_t n, const std::vector<Int>& mult, std::span<const Int> a,
                                   std::span<const Int> b) {
  std::vector<Int> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      Int ab = a[i] * b[j];
      for (std::size_t k = 0; k < n; ++k) out[k] += ab * mult[(i * n + j) * n + k];
    }
  }
  return out;
}

/// One round-2 step at p: the multiplier ring {x : x I_p in I_p} of the
/// p-radical I_p = {y : y^q in pO}, q = p^k >= n. Returned as generators over
/// the power basis, or nullopt when it equals O (O is then p-maximal).
inline std::optional<RatMatrix> p_enlargement(const OrderData& o, std::int64_t p) {
  const std::size_t n = o.basis.rows();
  std::int64_t q = p;
  while (q < static_cast<std::int64_t>(n)) q *= p;
  std::vector<Rat> one_power(n, Rat(0));
  one_power[0] = 1;
  std::vector<Int> one;
  for (auto& c : row_times<Rat>(one_power, o.basis_inv)) one.push_back(c.get_num());
  // Image of each basis vector under the F_p-linear map y -> y^q on O/pO.
  std::vector<std::vector<std::int64_t>> frob(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> base(n, 0), acc = one;
    base[i] = 1;
    std::int64_t e = q;
    while (e > 0) {
      if (e & 1) {
        acc = mul_coords(n, o.mult, acc, base);
        for (auto& v : acc) v = floor_mod(v, Int(p));
      }
      base = mul_coords(n, o.mult, base, base);
      for (auto& v : base) v = floor_mod(v, Int(p));
      e >>= 1;
    }
    for (std::size_t k = 0; k < n; ++k) frob[i][k] = acc[k].get_si();
  }
  auto ker = kernel_mod_p(frob, p);
  if (ker.empty()) return std::nullopt;
  IntMatrix rad_gens(ker.size() + n, n);
  for (std::size_t t = 0; t < ker.size(); ++t)
    for (std::size_t k = 0; k < n; ++k) rad_gens(t, k) = ker[t][k];
  for (std::size_t k = 0; k < n; ++k) rad_gens(ker.size() + k, k) = p;
  IntMatrix rad = hnf(rad_gens);
  RatMatrix rad_inv = inverse(to_rat(rad));
  // y in Z^n with y * b_j in p I_p for every radical basis vector b_j.
  IntMatrix cond(n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> ei(n, 0);
    ei[i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      auto prod = mul_coords(n, o.mult, ei, rad.row(j));
      std::vector<Rat> pr(prod.begin(), prod.end());
      auto c = row_times<Rat>(pr, rad_inv);
      for (std::size_t k = 0; k < n; ++k) cond(i, j * n + k) = c[k].get_num();
    }
  }
  IntMatrix ys = solve_mod_lattice(cond, Int(p));
  Int idx = abs(det(ys));
  if (idx == ipow(Int(p), n)) return std::nullopt;
  RatMatrix gens = to_rat(ys) * o.basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gens(i, j) /= p;
  return gens;
}

}  // namespace detail

/// Maximal order of Q[x]/(f) (f monic, irreducible, degree 2 or 3), grown
/// from Z[x] by p-enlargements at every prime whose square divides disc(f).
inline OrderData maximal_order_data(const IntPoly& f) {
  const std::size_t n = f.size() - 1;
  OrderData o = make_order_data(f, RatMatrix::identity(n));
  Int pd = poly_discriminant(f);
  for (auto& [p, e] : factorize(pd)) {
    if (e < 2) continue;
    std::int64_t pi = to_i64(p);
    while (auto gens = detail::p_enlargement(o, pi)) {
      o = make_order_data(f, *gens);
    }
  }
  return o;
}

/// A totally real number field of degree 2 or 3 with certified real roots.
class TotallyRealField {
 public:
  struct Data {
    IntPoly min_poly;
    std::vector<RootInterval> root_intervals;
    std::vector<double> roots;
    int root_bits = 80;
    OrderData maximal;
  };

  TotallyRealField() = default;

  static TotallyRealField from_polynomial(const IntPoly& f, int root_bits = 80) {
    int d = ::torbit::degree(f);
    require(d == 2 || d == 3, ErrorKind::degree_unsupported, "degree must be 2 or 3");
    require(f[d] == 1, ErrorKind::invalid_argument, "minimal polynomial must be monic");
    require(is_irreducible(f), ErrorKind::reducible_input, "polynomial is reducible");
    require(poly_discriminant(f) > 0, ErrorKind::invalid_argument, "polynomial is not totally real");
    auto data = std::make_shared<Data>();
    data->min_poly = IntPoly(f.begin(), f.begin() + d + 1);
    data->root_intervals = isolate_real_roots(data->min_poly, root_bits);
    require(static_cast<int>(data->root_intervals.size()) == d, ErrorKind::invalid_argument,
            "polynomial is not totally real");
    for (auto& r : data->root_intervals) data->roots.push_back(r.approx());
    data->root_bits = root_bits;
    data->maximal = ::torbit::maximal_order_data(data->min_poly);
    TotallyRealField k;
    k.data_ = std::move(data);
    return k;
  }

  int degree() const { return static_cast<int>(data_->min_poly.size()) - 1; }
  const IntPoly& min_poly() const { return data_->min_poly; }
  const std::vector<double>& roots() const { return data_->roots; }
  const std::vector<RootInterval>& root_intervals() const { return data_->root_intervals; }
  int root_bits() const { return data_->root_bits; }
  const Int& disc() const { return data_->maximal.disc; }
  const OrderData& maximal_order_data() const { return data_->maximal; }
  bool valid() const { return data_ != nullptr; }

  FieldElem mul(const FieldElem& a, const FieldElem& b) const { return detail::poly_mulmod(a, b, data_->min_poly); }

  FieldElem one() const {
    FieldElem e(degree(), Rat(0));
    e[0] = 1;
    return e;
  }

  /// Matrix of multiplication by a on the power basis (row i = x^i * a).
  RatMatrix mult_matrix(const FieldElem& a) const {
    const int n = degree();
    RatMatrix m(n, n);
    FieldElem xi = one();
    FieldElem x(n, Rat(0));
    x[1] = 1;
    for (int i = 0; i < n; ++i) {
      auto row = mul(xi, a);
      for (int j = 0; j < n; ++j) m(i, j) = row[j];
      xi = mul(xi, x);
    }
    return m;
  }

  Rat norm(const FieldElem& a) const { return det(mult_matrix(a)); }

  Rat trace(const FieldElem& a) const {
    auto m = mult_matrix(a);
    Rat t = 0;
    for (int i = 0; i < degree(); ++i) t += m(i, i);
    return t;
  }

  FieldElem inverse(const FieldElem& a) const {
    auto m = mult_matrix(a);
    require(det(m) != 0, ErrorKind::singular, "inverse of zero");
    return solve_row(one(), m);
  }

  std::vector<double> embed(const FieldElem& a) const {
    std::vector<double> out;
    for (double r : data_->roots) {
      double acc = 0;
      for (int k = degree() - 1; k >= 0; --k) acc = acc * r + a[k].get_d();
      out.push_back(acc);
    }
    return out;
  }

  friend bool operator==(const TotallyRealField& a, const TotallyRealField& b) {
    return a.data_ == b.data_ || a.data_->min_poly == b.data_->min_poly;
  }

 private:
  std::shared_ptr<const Data> data_;
};

/// A finite-index subring of a totally real field, with integer structure
/// constants and the real embedding matrix emb(i, j) = sigma_j(e_i).
class Order {
 public:
  Order() = default;

  static Order from_basis(const TotallyRealField& k, const RatMatrix& gens) {
    require(k.valid(), ErrorKind::invalid_argument, "order over an empty field");
    Order o;
    o.field_ = k;
    o.data_ = std::make_shared<OrderData>(make_order_data(k.min_poly(), gens));
    auto one = row_times<Rat>(k.one(), o.data_->basis_inv);
    for (auto& c : one) require(is_integer(c), ErrorKind::invalid_lattice, "module does not contain 1");
    o.finish();
    return o;
  }

  static Order maximal(const TotallyRealField& k) {
    Order o;
    o.field_ = k;
    o.data_ = std::make_shared<OrderData>(k.maximal_order_data());
    o.finish();
    return o;
  }

  /// Z[x] for the defining polynomial.
  static Order equation_order(const TotallyRealField& k) {
    return from_basis(k, RatMatrix::identity(k.degree()));
  }

  const TotallyRealField& field() const { return field_; }
  int degree() const { return field_.degree(); }
  const RatMatrix& basis() const { return data_->basis; }
  const RatLattice& lattice() const { return data_->lattice; }
  const Int& disc() const { return data_->disc; }
  const std::vector<Int>& mult_table() const { return data_->mult; }
  const std::vector<double>& embedding() const { return emb_; }
  double embedding(std::size_t i, std::size_t j) const { return emb_[i * degree() + j]; }
  const std::vector<Int>& one() const { return one_; }

  Int index() const {
    Rat r = Rat(disc()) / Rat(field_.disc());
    require(is_integer(r), ErrorKind::invalid_lattice, "order discriminant not a multiple of field discriminant");
    Int idx = isqrt(r.get_num());
    require(idx * idx == r.get_num(), ErrorKind::invalid_lattice, "index is not integral");
    return idx;
  }

  bool is_maximal() const { return disc() == field_.disc(); }

  std::vector<Int> mul(std::span<const Int> a, std::span<const Int> b) const {
    return detail::mul_coords(degree(), data_->mult, a, b);
  }

  IntMatrix mult_matrix(std::span<const Int> x) const { return detail::mult_matrix(degree(), data_->mult, x); }

  Int norm(std::span<const Int> x) const { return det(mult_matrix(x)); }

  Int trace(std::span<const Int> x) const {
    auto m = mult_matrix(x);
    Int t = 0;
    for (int i = 0; i < degree(); ++i) t += m(i, i);
    return t;
  }

  FieldElem to_field(std::span<const Rat> coords) const { return row_times<Rat>(coords, data_->basis); }

  FieldElem to_field(std::span<const Int> coords) const {
    std::vector<Rat> c(coords.begin(), coords.end());
    return to_field(std::span<const Rat>(c));
  }

  std::vector<Rat> coords(const FieldElem& x) const { return row_times<Rat>(x, data_->basis_inv); }

  bool contains(const FieldElem& x) const {
    for (auto& c : coords(x))
      if (!is_integer(c)) return false;
    return true;
  }

  std::vector<double> embed(std::span<const Int> x) const {
    const int n = degree();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      double xi = x[i].get_d();
      for (int j = 0; j < n; ++j) out[j] += xi * emb_[i * n + j];
    }
    return out;
  }

  friend bool operator==(const Order& a, const Order& b) {
    return a.field_ == b.field_ && a.data_->lattice == b.data_->lattice;
  }

 private:
  void finish() {
    const int n = degree();
    emb_.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
      auto e = field_.embed(data_->basis.row_vec(i));
      for (int j = 0; j < n; ++j) emb_[i * n + j] = e[j];
    }
    auto one = row_times<Rat>(field_.one(), data_->basis_inv);
    one_.clear();
    for (auto& c : one) one_.push_back(c.get_num());
  }

  TotallyRealField field_;
  std::shared_ptr<const OrderData> data_;
  std::vector<double> emb_;
  std::vector<Int> one_;
};

/// Exact trace-form discriminant det{Tr(e_i e_j)}.
inline Int order_discriminant(const Order& o) { return o.disc(); }

/// x^3 - a x^2 - (a+3) x - 1: cyclic totally real cubic with unit roots.
inline TotallyRealField simplest_cubic(long a, int root_bits = 80) {
  require(a >= -1, ErrorKind::invalid_argument, "simplest cubic parameter must be >= -1");
  IntPoly f{Int(-1), Int(-(a + 3)), Int(-a), Int(1)};
  require(is_irreducible(f), ErrorKind::reducible_input, "simplest cubic polynomial is reducible");
  return TotallyRealField::from_polynomial(f, root_bits);
}

namespace detail {

/// Exact test that Q[x]/(f) and Q[x]/(g) are isomorphic: find a root of g
/// expressed in the power basis of f (numerical guess, exact verification).
inline bool fields_isomorphic(const TotallyRealField& kf, const TotallyRealField& kg) {
  if (kf.degree() != kg.degree() || kf.disc() != kg.disc()) return false;
  const int n = kf.degree();
  const auto& r = kf.roots();
  const auto& s = kg.roots();
  Int scale = abs(poly_discriminant(kf.min_poly()));
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    // Solve Vandermonde system sum_k c_k r_j^k = s_perm(j).
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
    for (int j = 0; j < n; ++j) {
      double p = 1;
      for (int k = 0; k < n; ++k) {
        a[j][k] = p;
        p *= r[j];
      }
      a[j][n] = s[perm[j]];
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int i = c + 1; i < n; ++i)
        if (std::fabs(a[i][c]) > std::fabs(a[piv][c])) piv = i;
      std::swap(a[c], a[piv]);
      for (int i = 0; i < n; ++i) {
        if (i == c) continue;
        double f = a[i][c] / a[c][c];
        for (int k = c; k <= n; ++k) a[i][k] -= f * a[c][k];
      }
    }
    FieldElem cand(n);
    bool ok = true;
    for (int k = 0; k < n; ++k) {
      double v = a[k][n] / a[k][k] * scale.get_d();
      if (!std::isfinite(v) || std::fabs(v) > 1e15) {
        ok = false;
        break;
      }
      cand[k] = ratio(Int(static_cast<long>(std::llround(v))), scale);
    }
    if (!ok) continue;
    // g(cand) == 0 in K_f?
    FieldElem acc(n, Rat(0));
    for (int d = kg.degree(); d >= 0; --d) {
      acc = kf.mul(acc, cand);
      acc[0] += Rat(kg.min_poly()[d]);
    }
    if (std::all_of(acc.begin(), acc.end(), [](const Rat& v) { return v == 0; })) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline bool poly_less(const IntPoly& a, const IntPoly& b) {
  Int da = abs(poly_discriminant(a)), db = abs(poly_discriminant(b));
  if (da != db) return da < db;
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    if (abs(a[i]) != abs(b[i])) return abs(a[i]) < abs(b[i]);
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

inline std::vector<TotallyRealField> enumerate_quadratic(const Int& bound, int root_bits) {
  std::vector<TotallyRealField> out;
  for (long d = 5; d <= bound; ++d) {
    IntPoly f;
    if (d % 4 == 1 && is_squarefree(d)) {
      f = {Int(-(d - 1) / 4), Int(-1), Int(1)};
    } else if (d % 4 == 0) {
      long m = d / 4;
      if ((m % 4 == 2 || m % 4 == 3) && is_squarefree(m)) f = {Int(-m), Int(0), Int(1)};
    }
    if (f.empty()) continue;
    out.push_back(TotallyRealField::from_polynomial(f, root_bits));
  }
  return out;
}

/// Hunter search: every totally real cubic field of discriminant <= X has an
/// integral generator with trace in {0, 1} and T2 <= t^2/3 + (2/3) sqrt(X).
inline std::vector<TotallyRealField> enumerate_cubic(const Int& bound, int root_bits) {
  const double x = bound.get_d();
  std::map<Int, std::vector<IntPoly>> by_disc;
  for (long s1 = 0; s1 <= 1; ++s1) {
    const double t2max = static_cast<double>(s1 * s1) / 3.0 + (2.0 / 3.0) * std::sqrt(x) + 1e-9;
    const long s2_lo = static_cast<long>(std::ceil((static_cast<double>(s1 * s1) - t2max) / 2.0));
    const long s3_max = static_cast<long>(std::floor(std::pow(t2max / 3.0, 1.5) + 1e-9));
    for (long s2 = s2_lo; 3 * s2 < s1 * s1; ++s2) {
      for (long s3 = (s1 == 0 ? 0 : -s3_max); s3 <= s3_max; ++s3) {
        // x^3 - s1 x^2 + s2 x - s3
        IntPoly f{Int(-s3), Int(s2), Int(-s1), Int(1)};
        Int pd = poly_discriminant(f);
        if (pd <= 0) continue;
        if (!is_irreducible(f)) continue;
        // Early cut: field disc = pd / index^2 must be <= X; index^2 | pd.
        bool possible = false;
        Int sq = 1;
        for (auto& [p, e] : factorize(pd))
          for (int k = 0; k < e / 2; ++k) sq *= p;
        if (pd / (sq * sq) <= bound) possible = true;
        if (!possible) continue;
        OrderData mo = maximal_order_data(f);
        if (mo.disc > bound) continue;
        by_disc[mo.disc].push_back(f);
      }
    }
  }
  std::vector<TotallyRealField> out;
  for (auto& [disc, polys] : by_disc) {
    std::sort(polys.begin(), polys.end(), poly_less);
    std::vector<TotallyRealField> reps;
    for (auto& f : polys) {
      auto k = TotallyRealField::from_polynomial(f, root_bits);
      bool seen = false;
      for (auto& r : reps)
        if (fields_isomorphic(r, k)) {
          seen = true;
          break;
        }
      if (!seen) reps.push_back(k);
    }
    for (auto& r : reps) out.push_back(r);
  }
  return out;
}

}  // namespace detail

/// Every totally real field of the given degree with discriminant <= bound,
/// once per isomorphism class, sorted by discriminant.
inline std::vector<TotallyRealField> enumerate_totally_real_fields(int degree, const Int& disc_bound,
                                                                   int root_bits = 80) {
  require(degree == 2 || degree == 3, ErrorKind::degree_unsupported, "degree must be 2 or 3");
  require(disc_bound >= 1, ErrorKind::invalid_argument, "discriminant bound must be >= 1");
  auto out = degree == 2 ? detail::enumerate_quadratic(disc_bound, root_bits)
                         : detail::enumerate_cubic(disc_bound, root_bits);
  std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.disc() < b.disc(); });
  return out;
}

/// Defining polynomials x^3 + a x^2 + b x + c (a in {0, -1}, c >= 0 when
/// a = 0) of every irreducible totally real cubic with 0 < disc <= bound and
/// |b| <= bound^{2/3}. Each gives the monogenic order Z[x]; translation and
/// sign changes of the generator are factored out.
inline std::vector<IntPoly> monogenic_cubic_polynomials(const Int& bound) {
  const std::int64_t x = to_i64(bound);
  const auto bmax = static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(x), 2.0 / 3.0)));
  std::vector<IntPoly> out;
  for (std::int64_t a : {std::int64_t{0}, std::int64_t{-1}}) {
    for (std::int64_t b = -bmax; b <= 1; ++b) {
      const auto cmax = static_cast<std::int64_t>(std::sqrt(4.0 * std::fabs(static_cast<double>(b * b * b)) / 27.0)) + 3;
      for (std::int64_t c = (a == 0 ? 0 : -cmax); c <= cmax; ++c) {
        const std::int64_t pd = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
        if (pd <= 0 || pd > x) continue;
        IntPoly f{Int(c), Int(b), Int(a), Int(1)};
        if (!is_irreducible(f)) continue;
        out.push_back(f);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](auto& f, auto& g) {
    Int df = poly_discriminant(f), dg = poly_discriminant(g);
    if (df != dg) return df < dg;
    return f < g;
  });
  return out;
}

}  // namespace torbit
