#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ideals.hpp"

namespace torbit {

/// Basis of t cap g_Z for the torus attached to a lattice, and the Gram
/// determinant of the trace form on it.
struct LieTorusData {
  std::vector<IntMatrix> t_basis;  ///< n x n integer matrices, last diagonal entry 0
  Int wedge_gram;
};

struct CuspExcursion {
  Rat min_norm_ratio;  ///< min |N(x)| / N(L) over nonzero x in L
  Int disc;            ///< discriminant of the order of L; delta* = ratio / sqrt(disc)
  std::vector<Int> witness;

  double value() const { return min_norm_ratio.get_d() / std::sqrt(disc.get_d()); }
  /// delta*^2 * disc, an exact rational.
  Rat squared_times_disc() const { return min_norm_ratio * min_norm_ratio; }
};

struct TorusOrbit {
  TotallyRealField field;
  FractionalIdeal lattice;
  std::vector<int> theta;  ///< row j of the embedded lattice uses root theta[j]
  Order lattice_order;     ///< multiplier ring O_L
  Int disc_order_route;
  Int disc_wedge_route;
  double volume = 0;  ///< covolume regulator of O_L
  double classical_regulator = 0;
  CuspExcursion cusp;
  UnitGroup units;  ///< units of O_L
};

namespace detail {

/// Left multiplication by y on the rows of the lattice basis f, written in
/// that basis.
inline RatMatrix lattice_mult_matrix(const TotallyRealField& k, const RatMatrix& f, const RatMatrix& finv,
                                     const FieldElem& y) {
  return f * k.mult_matrix(y) * finv;
}

/// Entries of X - X_nn Id at positions (i, j) != (n, n): coordinates on g.
inline std::vector<Rat> g_coords(const RatMatrix& x) {
  const std::size_t n = x.rows();
  std::vector<Rat> out;
  out.reserve(n * n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == n - 1 && j == n - 1) continue;
      out.push_back(i == j ? Rat(x(i, j) - x(n - 1, n - 1)) : x(i, j));
    }
  return out;
}

inline Int matrix_trace(const IntMatrix& m) {
  Int t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// B(X, Y) = n Tr(XY) - Tr X Tr Y, which vanishes on scalars.
inline Int trace_form(const IntMatrix& x, const IntMatrix& y) {
  const Int n = static_cast<long>(x.rows());
  return n * matrix_trace(x * y) - matrix_trace(x) * matrix_trace(y);
}

}  // namespace detail

/// t cap g_Z for the torus of the lattice L: the elements y of K whose
/// multiplication matrix on a basis of L is integral modulo scalars. Found
/// as the rational solutions y (power-basis coordinates 1..n-1) of
/// y A in Z^m, with A the g-coordinates of x^1..x^{n-1}.
inline LieTorusData lie_torus_data(const FractionalIdeal& l) {
  const auto& k = l.order().field();
  const int n = k.degree();
  const int r = n - 1;
  const int m = n * n - 1;
  RatMatrix f = l.field_basis();
  RatMatrix finv = inverse(f);
  std::vector<RatMatrix> gens;  // multiplication by x^1 .. x^{n-1}
  RatMatrix a(r, m);
  for (int p = 1; p < n; ++p) {
    FieldElem xp(n, Rat(0));
    xp[p] = 1;
    gens.push_back(detail::lattice_mult_matrix(k, f, finv, xp));
    auto c = detail::g_coords(gens.back());
    for (int j = 0; j < m; ++j) a(p - 1, j) = c[j];
  }
  Int s = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m; ++j) s = lcm(s, a(i, j).get_den());
  // y A in Z^m  <=>  y (sA) in s Z^m. Column-reduce sA = [H 0] V^{-1}; then
  // the condition reads y H in s Z^r, i.e. y in s Z^r H^{-1}.
  IntMatrix at(m, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m; ++j) at(j, i) = Rat(a(i, j) * s).get_num();
  auto red = hnf_with_transform(at);
  require(red.rank == static_cast<std::size_t>(r), ErrorKind::invalid_lattice, "torus has the wrong rank");
  RatMatrix h(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) h(i, j) = red.h(j, i);
  RatMatrix ys = inverse(h);
  LieTorusData out;
  for (int i = 0; i < r; ++i) {
    RatMatrix x(n, n);
    for (int p = 0; p < r; ++p) {
      Rat coef = ys(i, p) * s;
      if (coef == 0) continue;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) x(u, v) += coef * gens[p](u, v);
    }
    const Rat shift = x(n - 1, n - 1);
    IntMatrix xi(n, n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        Rat e = u == v ? Rat(x(u, v) - shift) : x(u, v);
        require(is_integer(e), ErrorKind::invalid_lattice, "torus lattice element is not integral");
        xi(u, v) = e.get_num();
      }
    out.t_basis.push_back(xi);
  }
  IntMatrix gram(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) gram(i, j) = detail::trace_form(out.t_basis[i], out.t_basis[j]);
  out.wedge_gram = det(gram);
  return out;
}

inline Int discriminant_wedge_route(const FractionalIdeal& l) { return lie_torus_data(l).wedge_gram; }

inline Int discriminant_order_route(const FractionalIdeal& l) { return multiplier_ring(l).disc(); }

/// delta* of the orbit of L: min |N(x)| / covol(theta(L)), kept as the exact
/// ratio min |N(x)| / N(L) together with disc(order of L).
inline CuspExcursion cusp_excursion(const FractionalIdeal& l, const UnitGroup& units) {
  auto mn = minimal_norm(l, units);
  return {mn.norm / l.norm(), l.order().disc(), mn.witness};
}

inline std::vector<int> identity_theta(int n) {
  std::vector<int> t(n);
  std::iota(t.begin(), t.end(), 0);
  return t;
}

inline TorusOrbit orbit_from_triple(const TotallyRealField& k, const FractionalIdeal& l, std::vector<int> theta) {
  const int n = k.degree();
  require(l.order().field() == k, ErrorKind::invalid_argument, "lattice belongs to another field");
  if (theta.empty()) theta = identity_theta(n);
  std::vector<int> sorted = theta;
  std::sort(sorted.begin(), sorted.end());
  require(sorted == identity_theta(n), ErrorKind::invalid_argument, "theta must be a permutation of 0..n-1");
  require(std::fabs(l.embedding_matrix().determinant()) > 0, ErrorKind::invalid_lattice, "degenerate lattice");
  TorusOrbit o;
  o.field = k;
  o.lattice = l;
  o.theta = std::move(theta);
  o.lattice_order = multiplier_ring(l);
  o.disc_order_route = o.lattice_order.disc();
  o.disc_wedge_route = discriminant_wedge_route(l);
  o.units = unit_group(o.lattice_order);
  o.volume = o.units.covolume_regulator;
  o.classical_regulator = o.units.classical_regulator;
  o.cusp = cusp_excursion(l, l.order() == o.lattice_order ? o.units : unit_group(l.order()));
  return o;
}

inline Int discriminant_order_route(const TorusOrbit& o) { return o.disc_order_route; }
inline Int discriminant_wedge_route(const TorusOrbit& o) { return o.disc_wedge_route; }
inline double orbit_volume(const TorusOrbit& o) { return o.volume; }
inline const CuspExcursion& cusp_excursion(const TorusOrbit& o) { return o.cusp; }

/// Closed condition delta* >= delta.
inline bool in_omega_prime(const TorusOrbit& o, double delta) {
  require(delta > 0, ErrorKind::invalid_argument, "delta must be positive");
  return o.cusp.value() >= delta;
}

/// Embedded lattice theta(L): row i is (sigma_theta(0)(b_i), ..., sigma_theta(n-1)(b_i)).
inline RealMatrix orbit_basis(const TorusOrbit& o) {
  RealMatrix e = o.lattice.embedding_matrix();
  RealMatrix out(e.rows(), e.cols());
  for (int j = 0; j < e.cols(); ++j) out.col(j) = e.col(o.theta[j]);
  return out;
}

/// Log-unit lattice of O_L with columns permuted by theta.
inline RealMatrix orbit_log_lattice(const TorusOrbit& o) {
  const RealMatrix& u = o.units.log_lattice;
  RealMatrix out(u.rows(), u.cols());
  for (int j = 0; j < u.cols(); ++j) out.col(j) = u.col(o.theta[j]);
  return out;
}

/// grid^{n-1} points theta(L) exp(x), x on the grid sum_i (k_i / grid) u_i
/// of the fundamental parallelepiped of the log-unit lattice, each
/// normalized to covolume 1.
inline std::vector<EmbeddedLattice> sample_orbit(const TorusOrbit& o, int grid) {
  require(grid >= 1, ErrorKind::invalid_argument, "grid must be >= 1");
  const RealMatrix base = orbit_basis(o);
  const RealMatrix u = orbit_log_lattice(o);
  const int n = static_cast<int>(base.rows());
  const EmbeddedLattice base_lattice = EmbeddedLattice::from_basis(base).normalized();
  std::vector<EmbeddedLattice> out;
  std::vector<int> idx(n - 1, 0);
  while (true) {
    RealVector x = RealVector::Zero(n);
    for (int i = 0; i < n - 1; ++i) x += (static_cast<double>(idx[i]) / grid) * u.row(i).transpose();
    RealMatrix b = base_lattice.basis;
    for (int j = 0; j < n; ++j) b.col(j) *= std::exp(x(j));
    out.push_back({b, 1.0, false});
    int pos = 0;
    while (pos < n - 1 && ++idx[pos] == grid) idx[pos++] = 0;
    if (pos == n - 1) break;
  }
  return out;
}

/// Whether the covolume-1 lattice has a nonzero v with |v|_inf^n < delta.
inline bool escapes(const EmbeddedLattice& l, double delta) {
  const double s = shortest_sup_vector(l).norm;
  return std::pow(s, l.dim()) < delta;
}

inline double escaped_mass_fraction(const TorusOrbit& o, double delta, int grid) {
  require(delta > 0 && delta <= 1, ErrorKind::invalid_argument, "delta must lie in (0, 1]");
  require(grid >= 10, ErrorKind::invalid_argument, "grid must be >= 10");
  auto samples = sample_orbit(o, grid);
  std::size_t out = 0;
  for (auto& s : samples)
    if (escapes(s, delta)) ++out;
  return static_cast<double>(out) / static_cast<double>(samples.size());
}

/// Sum over ordered pairs i != j of max(0, w_i - w_j).
inline double haar_entropy(const std::vector<double>& weights) {
  double sum = 0, scale = 0;
  for (double w : weights) {
    sum += w;
    scale = std::max(scale, std::fabs(w));
  }
  require(std::fabs(sum) <= 1e-12 * std::max(1.0, scale), ErrorKind::invalid_argument, "weights must sum to 0");
  double h = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (std::size_t j = 0; j < weights.size(); ++j)
      if (i != j) h += std::max(0.0, weights[i] - weights[j]);
  return h;
}

namespace detail {

/// Real matrix (rows) of v -> coordinates of g^{-1} v g on g, for v running
/// over the basis E_ij, (i, j) != (n, n), of g_Z.
inline RealMatrix adjoint_lattice(const RealMatrix& g) {
  const int n = static_cast<int>(g.rows());
  const RealMatrix ginv = g.inverse();
  const int m = n * n - 1;
  RealMatrix out(m, m);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == n - 1 && j == n - 1) continue;
      RealMatrix y = ginv.col(i) * g.row(j);  // g^{-1} E_ij g
      int col = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == n - 1 && b == n - 1) continue;
          out(row, col++) = a == b ? y(a, b) - y(n - 1, n - 1) : y(a, b);
        }
      ++row;
    }
  return out;
}

inline RealMatrix det_normalized(const RealMatrix& g) {
  const double d = g.determinant();
  require(std::isfinite(d) && d != 0, ErrorKind::invalid_argument, "group element must be invertible");
  return g / std::pow(std::fabs(d), 1.0 / static_cast<double>(g.rows()));
}

}  // namespace detail

/// min over nonzero v in g_Z of |Ad(g^{-1}) v|, the norm being the Euclidean
/// norm of the coordinates of X - X_nn Id.
inline double adjoint_systole(const RealMatrix& g) {
  const RealMatrix a = detail::adjoint_lattice(detail::det_normalized(g));
  return shortest_vector(EmbeddedLattice::from_basis(a)).norm;
}

inline bool omega_R_membership(const RealMatrix& g, double r) {
  require(r > 0, ErrorKind::invalid_argument, "R must be positive");
  return adjoint_systole(g) >= 1.0 / r;
}

}  // namespace torbit
