#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "fields.hpp"
#include "lattice.hpp"
#include "quadratic.hpp"

namespace torbit {

/// Rows sigma(e_i) of an order basis: the Minkowski lattice of the order.
inline EmbeddedLattice minkowski_embedding(const Order& o, int precision_bits = 53) {
  require(o.degree() >= 2, ErrorKind::degree_unsupported, "degree must be at least 2");
  require(precision_bits <= o.field().root_bits(), ErrorKind::precision_insufficient,
          "requested precision exceeds certified root precision");
  const int n = o.degree();
  RealMatrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = o.embedding(i, j);
  return EmbeddedLattice::from_basis(b);
}

struct UnitGroup {
  Order order;
  std::vector<std::vector<Int>> unit_coords;  ///< fundamental units over the order basis
  std::vector<FieldElem> fundamental_units;   ///< same units over the power basis
  RealMatrix log_lattice;                     ///< rows log|sigma_j(u_i)|
  double classical_regulator = 0;
  double covolume_regulator = 0;
  double search_radius = 0;  ///< log-radius certified by the cubic search (0 for quadratics)
};

struct UnitSearchOptions {
  double initial_radius = 1.0;  ///< first log-radius searched
  double max_radius = 200.0;    ///< search-exhausted beyond this log-radius
};

/// Orthonormal basis (rows) of the sum-zero hyperplane of R^n.
inline RealMatrix log_plane_basis(int n) {
  RealMatrix e = RealMatrix::Zero(n - 1, n);
  for (int k = 0; k < n - 1; ++k) {
    for (int j = 0; j <= k; ++j) e(k, j) = 1.0;
    e(k, k + 1) = -(k + 1.0);
    e.row(k).normalize();
  }
  return e;
}

/// Calls `visit` for every nonzero vector v (up to sign) of the lattice with
/// basis rows `basis` such that log|v_j| <= shift + c_j + r for all j, for
/// some listed cell center c, where r bounds the distance from a center to
/// any point of its cell. Each vector is visited once even when several
/// cells contain it.
inline void for_each_in_log_cells(const RealMatrix& basis, const std::vector<RealVector>& centers, double r,
                                  double shift, const std::function<void(const CoeffVector&, const RealVector&)>& visit) {
  const int n = static_cast<int>(basis.cols());
  std::set<CoeffVector> seen;
  std::vector<double> box(n);
  for (const auto& c : centers) {
    for (int j = 0; j < n; ++j) box[j] = std::exp(shift + c(j) + r);
    enumerate_box(basis, box, [&](const CoeffVector& x, const RealVector& v) {
      if (seen.insert(x).second) visit(x, v);
    });
  }
}

/// Centers of the grid cells (side 2h) of the sum-zero hyperplane meeting
/// the ball of the given radius about the origin.
inline std::vector<RealVector> log_ball_cells(int n, double radius, double h) {
  const RealMatrix e = log_plane_basis(n);
  const double r = h * std::sqrt(n - 1.0);
  const int k = static_cast<int>(std::ceil((radius + r) / (2 * h)));
  std::vector<RealVector> out;
  std::vector<int> idx(n - 1, -k);
  while (true) {
    RealVector c = RealVector::Zero(n);
    for (int i = 0; i < n - 1; ++i) c += (2.0 * h * idx[i]) * e.row(i).transpose();
    if (c.norm() <= radius + r) out.push_back(c);
    int pos = 0;
    while (pos < n - 1 && ++idx[pos] > k) idx[pos++] = -k;
    if (pos == n - 1) break;
  }
  return out;
}

namespace detail {

inline void finish_regulators(UnitGroup& g) {
  const int r = static_cast<int>(g.log_lattice.rows());
  g.classical_regulator = std::fabs(g.log_lattice.leftCols(r).determinant());
  g.covolume_regulator = std::sqrt((g.log_lattice * g.log_lattice.transpose()).determinant());
}

inline UnitGroup quadratic_units(const Order& o) {
  const auto& f = o.field().min_poly();
  Int pd = poly_discriminant(f);
  Rat ratio = Rat(o.disc()) / Rat(pd);
  Int tn = isqrt(ratio.get_num()), td = isqrt(ratio.get_den());
  require(tn * tn == ratio.get_num() && td * td == ratio.get_den(), ErrorKind::invalid_lattice,
          "order discriminant is not a square multiple of the polynomial discriminant");
  QuadraticUnit u = quadratic_fundamental_unit(o.disc());
  // sqrt(D) = (tn/td) (2x + f1); eps = (a + b sqrt D) / 2.
  Rat t(tn, td);
  FieldElem eps(2);
  eps[1] = Rat(u.b) * t;
  eps[0] = (Rat(u.a) + Rat(u.b) * t * Rat(f[1])) / 2;
  require(o.contains(eps), ErrorKind::invalid_lattice, "fundamental unit not in order");
  UnitGroup g;
  g.order = o;
  g.fundamental_units.push_back(eps);
  std::vector<Int> coords;
  for (auto& c : o.coords(eps)) coords.push_back(c.get_num());
  require(abs(o.norm(coords)) == 1, ErrorKind::invalid_lattice, "fundamental unit has norm != +-1");
  g.unit_coords.push_back(coords);
  // sqrt D is positive at the larger root, where eps > 1. The exact log
  // avoids the cancellation of evaluating a huge unit in double.
  const double l = u.log();
  g.log_lattice = RealMatrix(1, 2);
  g.log_lattice(0, 0) = -l;
  g.log_lattice(0, 1) = l;
  finish_regulators(g);
  return g;
}

/// Area of the parallelogram spanned by a and b.
inline double area(const RealVector& a, const RealVector& b) {
  const double g = a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b);
  return std::sqrt(std::max(0.0, g));
}

/// Cubic unit group. All units with log vector of length <= L are found by
/// covering the L-ball of the log plane with small cells; once two
/// independent units of length <= L are present, the shortest one and the
/// shortest independent one are the successive minima of the full log
/// lattice and hence a basis of it.
inline UnitGroup cubic_units(const Order& o, const UnitSearchOptions& opt) {
  auto emb = minkowski_embedding(o);
  constexpr double h = 0.35;
  struct Found {
    std::vector<Int> coords;
    RealVector log;
  };
  for (double radius = opt.initial_radius; radius <= opt.max_radius; radius *= 1.5) {
    std::vector<Found> units;
    for_each_in_log_cells(emb.basis, log_ball_cells(3, radius, h), h * std::sqrt(2.0) + 1e-5, 0.0,
                          [&](const CoeffVector& c, const RealVector& v) {
                            const double prod = std::fabs(v(0) * v(1) * v(2));
                            if (std::fabs(prod - 1.0) > 1e-4) return;
                            std::vector<Int> coords(c.begin(), c.end());
                            if (abs(o.norm(coords)) != 1) return;
                            RealVector l(3);
                            for (int j = 0; j < 3; ++j) l(j) = std::log(std::fabs(v(j)));
                            if (l.norm() < 1e-9 || l.norm() > radius) return;
                            units.push_back({coords, l});
                          });
    std::sort(units.begin(), units.end(), [](auto& a, auto& b) { return a.log.norm() < b.log.norm(); });
    if (units.empty()) continue;
    const Found& u1 = units.front();
    const Found* u2 = nullptr;
    for (auto& u : units)
      if (area(u1.log, u.log) > 1e-7 * (1.0 + u.log.norm())) {
        u2 = &u;
        break;
      }
    if (!u2) continue;
    UnitGroup g;
    g.order = o;
    g.search_radius = radius;
    g.log_lattice = RealMatrix(2, 3);
    int row = 0;
    for (const Found* u : {&u1, u2}) {
      g.unit_coords.push_back(u->coords);
      g.fundamental_units.push_back(o.to_field(std::span<const Int>(u->coords)));
      g.log_lattice.row(row++) = u->log.transpose();
    }
    finish_regulators(g);
    return g;
  }
  fail(ErrorKind::search_exhausted, "unit search radius exhausted before a certified basis was found");
}

}  // namespace detail

/// Fundamental units of an order in a totally real quadratic or cubic field.
inline UnitGroup unit_group(const Order& o, const UnitSearchOptions& opt = {}) {
  if (o.degree() == 2) return detail::quadratic_units(o);
  require(o.degree() == 3, ErrorKind::degree_unsupported, "unit groups for degree 2 or 3 only");
  return detail::cubic_units(o, opt);
}

}  // namespace torbit
