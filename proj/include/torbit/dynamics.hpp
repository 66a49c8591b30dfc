#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "orbits.hpp"

namespace torbit {

/// A regular or singular element of the diagonal Lie algebra.
struct FlowDirection {
  std::vector<double> weights;

  static FlowDirection from_weights(std::vector<double> w) {
    double sum = 0;
    for (double x : w) sum += x;
    require(w.size() >= 2 && std::fabs(sum) <= 1e-12, ErrorKind::invalid_argument, "weights must sum to 0");
    return {std::move(w)};
  }

  /// min over i != j of |w_i - w_j|; positive iff the direction is regular.
  double kappa() const {
    double k = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < weights.size(); ++i)
      for (std::size_t j = i + 1; j < weights.size(); ++j) k = std::min(k, std::fabs(weights[i] - weights[j]));
    return k;
  }

  bool regular() const { return kappa() > 0; }
};

namespace detail {

/// Principal matrix logarithm when the spectrum avoids (-inf, 0].
inline std::optional<RealMatrix> principal_log(const RealMatrix& h) {
  Eigen::EigenSolver<RealMatrix> es(h, false);
  const double scale = std::max(1.0, h.norm());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::fabs(ev.imag()) <= 1e-12 * scale && ev.real() <= 1e-12 * scale) return std::nullopt;
  }
  RealMatrix l = h.log();
  if (!l.allFinite()) return std::nullopt;
  return l;
}

/// log of the PGL element of h: the shorter of log(h), log(-h).
inline std::optional<RealMatrix> pgl_log(const RealMatrix& h) {
  std::optional<RealMatrix> best;
  for (double sign : {1.0, -1.0}) {
    auto l = principal_log(sign * h);
    if (l && (!best || l->norm() < best->norm())) best = l;
  }
  return best;
}

}  // namespace detail

/// |log(g1^{-1} g2)|_F on determinant +-1 representatives, minimized over
/// the scalar -1.
inline double group_distance(const RealMatrix& g1, const RealMatrix& g2) {
  const RealMatrix h = detail::det_normalized(g1).inverse() * detail::det_normalized(g2);
  auto l = detail::pgl_log(h);
  require(l.has_value(), ErrorKind::distance_undefined, "g1^{-1} g2 lies outside the domain of the logarithm");
  return l->norm();
}

/// Operator norm of Ad(g) on M_n: sigma_max(g) sigma_max(g^{-1}).
inline double adjoint_norm(const RealMatrix& g) {
  Eigen::JacobiSVD<RealMatrix> svd(g);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

namespace detail {

/// Distance from Gamma g1 to the H-orbit through Gamma g2, for nearby
/// points: the Gamma element is read off by rounding and the diagonal part
/// of the logarithm is removed. Empty when the points are not close.
inline std::optional<double> transverse_distance(const RealMatrix& g1, const RealMatrix& g1_inv, const RealMatrix& g2,
                                                  const RealMatrix& g2_inv, double cutoff) {
  const int n = static_cast<int>(g1.rows());
  const RealMatrix p = g1 * g2_inv;
  RealMatrix gamma = p.array().round().matrix();
  if ((p - gamma).norm() > cutoff) return std::nullopt;
  if (std::fabs(std::fabs(gamma.determinant()) - 1.0) > 1e-9) return std::nullopt;
  const RealMatrix h = g1_inv * gamma * g2;
  auto y = pgl_log(h);
  if (!y) return std::nullopt;
  RealMatrix diag = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) diag(i, i) = -(*y)(i, i);
  auto z = pgl_log(h * diag.exp());
  if (!z) return std::nullopt;
  return z->norm();
}

}  // namespace detail

struct SeparationPair {
  std::size_t first = 0, second = 0;
  double min_dist = std::numeric_limits<double>::infinity();
  Int disc_product;
  double scaled_stat() const { return min_dist * std::sqrt(disc_product.get_d()); }
};

struct SeparationResult {
  double min_dist = std::numeric_limits<double>::infinity();
  std::size_t first = 0, second = 0;
  Int disc_product;
  double scaled_stat = 0;
  std::vector<SeparationPair> pairs;  ///< one entry per pair of distinct orbits with a finite distance
};

namespace detail {

/// Orbits related by theta (the Weyl group) or equal count as one.
inline bool same_orbit_up_to_weyl(const TorusOrbit& a, const TorusOrbit& b) {
  return a.field == b.field && a.lattice == b.lattice;
}

struct OrbitSamples {
  std::vector<RealMatrix> g, g_inv;
};

/// Reduced covolume-1 samples with |Ad(g)| <= window_r, about `density`
/// points per unit of classical regulator (at least `density`).
inline OrbitSamples windowed_samples(const TorusOrbit& o, double window_r, int density) {
  const int n = o.field.degree();
  int grid = density;
  if (n == 2) grid = std::max(density, static_cast<int>(std::ceil(density * o.classical_regulator)));
  OrbitSamples s;
  for (auto& l : sample_orbit(o, grid)) {
    RealMatrix b = l.basis;
    lll_reduce(b);
    if (adjoint_norm(b) > window_r) continue;
    s.g.push_back(b);
    s.g_inv.push_back(b.inverse());
  }
  return s;
}

}  // namespace detail

/// Minimum distance between sampled points of distinct orbits inside the
/// window |Ad(g)| <= window_r. `grid` is the number of samples per unit of
/// regulator along each quadratic orbit (per side of the grid for cubics).
inline SeparationResult min_orbit_separation(const std::vector<TorusOrbit>& orbits, double window_r, int grid) {
  require(grid >= 1, ErrorKind::invalid_argument, "grid must be >= 1");
  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    bool dup = false;
    for (std::size_t j : distinct) dup = dup || detail::same_orbit_up_to_weyl(orbits[i], orbits[j]);
    if (!dup) distinct.push_back(i);
  }
  require(distinct.size() >= 2, ErrorKind::insufficient_input, "need at least two distinct orbits");
  std::vector<detail::OrbitSamples> samples;
  for (std::size_t i : distinct) samples.push_back(detail::windowed_samples(orbits[i], window_r, grid));
  SeparationResult res;
  for (std::size_t a = 0; a < distinct.size(); ++a)
    for (std::size_t b = a + 1; b < distinct.size(); ++b) {
      SeparationPair pair{distinct[a], distinct[b], std::numeric_limits<double>::infinity(),
                          orbits[distinct[a]].disc_order_route * orbits[distinct[b]].disc_order_route};
      for (std::size_t i = 0; i < samples[a].g.size(); ++i)
        for (std::size_t j = 0; j < samples[b].g.size(); ++j) {
          const double cutoff = std::min(0.5, 2.0 * pair.min_dist * window_r);
          auto d = detail::transverse_distance(samples[a].g[i], samples[a].g_inv[i], samples[b].g[j],
                                               samples[b].g_inv[j], cutoff);
          if (d && *d < pair.min_dist) pair.min_dist = *d;
        }
      if (!std::isfinite(pair.min_dist)) continue;
      if (pair.min_dist < res.min_dist) {
        res.min_dist = pair.min_dist;
        res.first = pair.first;
        res.second = pair.second;
        res.disc_product = pair.disc_product;
        res.scaled_stat = pair.scaled_stat();
      }
      res.pairs.push_back(pair);
    }
  return res;
}

struct WeightedLattice {
  EmbeddedLattice lattice;
  double weight = 1;
};

/// Whether y = base g with g in B^{(-t, t)}: log g has diagonal entries of
/// size <= r and the (i, j) entry of size <= r exp(-t |w_i - w_j|), so that
/// conjugating by a(t) and by a(-t) both keep it in the box of radius r.
inline bool in_tube(const RealMatrix& y, const RealMatrix& base, const FlowDirection& dir, double t, double r) {
  const int n = static_cast<int>(y.rows());
  const RealMatrix yn = detail::det_normalized(y), bn = detail::det_normalized(base);
  const RealMatrix gamma = (yn * bn.inverse()).array().round().matrix();
  if (std::fabs(std::fabs(gamma.determinant()) - 1.0) > 1e-9) return false;
  auto x = detail::pgl_log(bn.inverse() * gamma.inverse() * yn);
  if (!x) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double bound = i == j ? r : r * std::exp(-t * std::fabs(dir.weights[i] - dir.weights[j]));
      if (std::fabs((*x)(i, j)) > bound) return false;
    }
  return true;
}

/// Weighted fraction of samples lying in base B^{(-t, t)}.
inline double tube_mass(const std::vector<WeightedLattice>& samples, const EmbeddedLattice& base,
                        const FlowDirection& dir, double t, double b_radius) {
  require(t >= 0, ErrorKind::invalid_argument, "t must be >= 0");
  require(dir.regular(), ErrorKind::invalid_argument, "flow direction must be regular");
  require(static_cast<int>(dir.weights.size()) == base.dim(), ErrorKind::invalid_argument, "dimension mismatch");
  RealMatrix b = base.basis;
  lll_reduce(b);
  double total = 0, inside = 0;
  for (auto& s : samples) {
    total += s.weight;
    RealMatrix y = s.lattice.basis;
    lll_reduce(y);
    if (in_tube(y, b, dir, t, b_radius)) inside += s.weight;
  }
  return total > 0 ? inside / total : 0.0;
}

}  // namespace torbit
