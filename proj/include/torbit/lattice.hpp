#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "error.hpp"

namespace torbit {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using CoeffVector = std::vector<std::int64_t>;

/// A real lattice given by the rows of `basis`; the concrete point
/// Z^n * basis of the space of lattices.
struct EmbeddedLattice {
  RealMatrix basis;
  double covolume = 0;
  bool reduced = false;

  static EmbeddedLattice from_basis(const RealMatrix& b) {
    require(b.rows() == b.cols() && b.rows() >= 1, ErrorKind::invalid_argument, "basis must be square");
    double d = std::fabs(b.determinant());
    require(d > 0 && std::isfinite(d), ErrorKind::singular, "degenerate lattice basis");
    return {b, d, false};
  }

  int dim() const { return static_cast<int>(basis.rows()); }

  /// Same lattice rescaled to covolume 1.
  EmbeddedLattice normalized() const {
    const double s = std::pow(covolume, -1.0 / dim());
    return {basis * s, 1.0, reduced};
  }
};

namespace detail {

struct GramSchmidt {
  RealMatrix mu;
  RealVector bstar_sq;
};

inline GramSchmidt gram_schmidt(const RealMatrix& b) {
  const int n = static_cast<int>(b.rows());
  GramSchmidt gs{RealMatrix::Zero(n, n), RealVector::Zero(n)};
  RealMatrix bstar = b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      gs.mu(i, j) = b.row(i).dot(bstar.row(j)) / gs.bstar_sq(j);
      bstar.row(i) -= gs.mu(i, j) * bstar.row(j);
    }
    gs.bstar_sq(i) = bstar.row(i).squaredNorm();
  }
  return gs;
}

}  // namespace detail

/// LLL reduction of the rows of `b` with Lovasz parameter `delta`. If
/// `transform` is given it receives the integer matrix U with U * b_in = b_out.
inline void lll_reduce(RealMatrix& b, double delta = 0.99, Eigen::Matrix<std::int64_t, -1, -1>* transform = nullptr) {
  const int n = static_cast<int>(b.rows());
  Eigen::Matrix<std::int64_t, -1, -1> u = Eigen::Matrix<std::int64_t, -1, -1>::Identity(n, n);
  auto gs = detail::gram_schmidt(b);
  int k = 1;
  int guard = 0;
  while (k < n) {
    require(++guard < 1000000, ErrorKind::singular, "LLL did not terminate");
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(gs.mu(k, j));
      if (q == 0) continue;
      b.row(k) -= q * b.row(j);
      u.row(k) -= static_cast<std::int64_t>(q) * u.row(j);
      gs = detail::gram_schmidt(b);
    }
    if (gs.bstar_sq(k) >= (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.bstar_sq(k - 1)) {
      ++k;
    } else {
      b.row(k).swap(b.row(k - 1));
      u.row(k).swap(u.row(k - 1));
      gs = detail::gram_schmidt(b);
      k = std::max(k - 1, 1);
    }
  }
  if (transform) *transform = u;
}

inline EmbeddedLattice reduce(const EmbeddedLattice& l, double delta = 0.99) {
  require(l.covolume > 0, ErrorKind::singular, "degenerate lattice");
  EmbeddedLattice out = l;
  lll_reduce(out.basis, delta);
  out.reduced = true;
  return out;
}

/// Fincke-Pohst enumeration of every nonzero coefficient vector c (up to
/// sign: the last nonzero entry is positive) with |c * b|^2 <= radius_sq.
/// The callback receives the coefficients and the lattice vector.
inline void enumerate_ball(const RealMatrix& b, double radius_sq,
                           const std::function<void(const CoeffVector&, const RealVector&)>& visit) {
  const int n = static_cast<int>(b.rows());
  auto gs = detail::gram_schmidt(b);
  for (int i = 0; i < n; ++i) require(gs.bstar_sq(i) > 0, ErrorKind::singular, "degenerate lattice basis");
  CoeffVector c(n, 0);
  std::vector<double> partial(n + 1, 0.0);  // squared length contributed by levels >= i
  const double slack = 1e-9 * (1.0 + radius_sq);

  std::function<void(int)> recurse = [&](int i) {
    double ctr = 0;
    for (int j = i + 1; j < n; ++j) ctr -= static_cast<double>(c[j]) * gs.mu(j, i);
    const double rem = radius_sq + slack - partial[i + 1];
    if (rem < 0) return;
    const double w = std::sqrt(rem / gs.bstar_sq(i));
    const auto lo = static_cast<std::int64_t>(std::ceil(ctr - w));
    const auto hi = static_cast<std::int64_t>(std::floor(ctr + w));
    for (std::int64_t x = lo; x <= hi; ++x) {
      c[i] = x;
      const double d = static_cast<double>(x) - ctr;
      partial[i] = partial[i + 1] + d * d * gs.bstar_sq(i);
      if (i == 0) {
        bool zero = true, positive = false;
        for (int j = n - 1; j >= 0; --j)
          if (c[j] != 0) {
            zero = false;
            positive = c[j] > 0;
            break;
          }
        if (zero || !positive) continue;
        RealVector v = RealVector::Zero(b.cols());
        for (int j = 0; j < n; ++j)
          if (c[j] != 0) v += static_cast<double>(c[j]) * b.row(j).transpose();
        visit(c, v);
      } else {
        recurse(i - 1);
      }
    }
    c[i] = 0;
  };
  recurse(n - 1);
}

struct ShortVector {
  CoeffVector coeffs;
  RealVector vector;
  double norm = 0;
};

/// Exact (up to floating point) shortest nonzero vector in the Euclidean norm.
inline ShortVector shortest_vector(const EmbeddedLattice& l) {
  RealMatrix b = l.basis;
  Eigen::Matrix<std::int64_t, -1, -1> u;
  lll_reduce(b, 0.99, &u);
  double best = b.row(0).squaredNorm();
  ShortVector sv;
  enumerate_ball(b, best, [&](const CoeffVector& c, const RealVector& v) {
    double s = v.squaredNorm();
    if (sv.coeffs.empty() || s < best) {
      best = s;
      sv.coeffs = c;
      sv.vector = v;
    }
  });
  // Express coefficients over the input basis.
  CoeffVector orig(l.dim(), 0);
  for (int j = 0; j < l.dim(); ++j)
    for (int i = 0; i < l.dim(); ++i) orig[j] += sv.coeffs[i] * u(i, j);
  sv.coeffs = orig;
  sv.norm = std::sqrt(best);
  return sv;
}

/// Shortest nonzero vector in the sup norm.
inline ShortVector shortest_sup_vector(const EmbeddedLattice& l) {
  RealMatrix b = l.basis;
  Eigen::Matrix<std::int64_t, -1, -1> u;
  lll_reduce(b, 0.99, &u);
  double best = b.row(0).cwiseAbs().maxCoeff();
  for (int i = 1; i < b.rows(); ++i) best = std::min(best, b.row(i).cwiseAbs().maxCoeff());
  ShortVector sv;
  const double n = static_cast<double>(b.cols());
  double found = std::numeric_limits<double>::infinity();
  enumerate_ball(b, n * best * best, [&](const CoeffVector& c, const RealVector& v) {
    double s = v.cwiseAbs().maxCoeff();
    if (s < found) {
      found = s;
      sv.coeffs = c;
      sv.vector = v;
    }
  });
  best = found;
  CoeffVector orig(l.dim(), 0);
  for (int j = 0; j < l.dim(); ++j)
    for (int i = 0; i < l.dim(); ++i) orig[j] += sv.coeffs[i] * u(i, j);
  sv.coeffs = orig;
  sv.norm = best;
  return sv;
}

/// Every nonzero lattice vector (up to sign) with |v_j| <= box[j] for all j.
/// Enumerated as a Euclidean ball in coordinates rescaled by the box.
inline void enumerate_box(const RealMatrix& b, const std::vector<double>& box,
                          const std::function<void(const CoeffVector&, const RealVector&)>& visit) {
  const int n = static_cast<int>(b.rows());
  RealMatrix scaled = b;
  for (int j = 0; j < b.cols(); ++j) scaled.col(j) /= box[j];
  Eigen::Matrix<std::int64_t, -1, -1> u;
  lll_reduce(scaled, 0.99, &u);
  enumerate_ball(scaled, static_cast<double>(b.cols()), [&](const CoeffVector& c, const RealVector& v) {
    for (int j = 0; j < v.size(); ++j)
      if (std::fabs(v(j)) > 1.0 + 1e-12) return;
    CoeffVector orig(n, 0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) orig[j] += c[i] * u(i, j);
    RealVector w = RealVector::Zero(b.cols());
    for (int i = 0; i < n; ++i)
      if (orig[i] != 0) w += static_cast<double>(orig[i]) * b.row(i).transpose();
    visit(orig, w);
  });
}

}  // namespace torbit
