#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "arith.hpp"

namespace torbit {

/// Dense row-major matrix over an exact ring (Int, Rat, std::int64_t).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (auto& r : init) {
      require(r.size() == cols_, ErrorKind::invalid_argument, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> row_vec(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block_rows(std::size_t first, std::size_t count) const {
    Matrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  require(a.cols() == b.rows(), ErrorKind::invalid_argument, "matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <class T>
std::vector<T> row_times(std::span<const T> v, const Matrix<T>& m) {
  require(v.size() == m.rows(), ErrorKind::invalid_argument, "vector-matrix shape mismatch");
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[k] * m(k, j);
  }
  return out;
}

inline RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(IntMatrix m) {
  require(m.rows() == m.cols(), ErrorKind::invalid_argument, "det of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline Rat det(RatMatrix m) {
  require(m.rows() == m.cols(), ErrorKind::invalid_argument, "det of non-square matrix");
  const std::size_t n = m.rows();
  Rat d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      m.swap_rows(k, p);
      d = -d;
    }
    d *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rat f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return d;
}

inline RatMatrix inverse(RatMatrix m) {
  require(m.rows() == m.cols(), ErrorKind::invalid_argument, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    require(p < n, ErrorKind::singular, "singular matrix");
    m.swap_rows(k, p);
    inv.swap_rows(k, p);
    Rat piv = m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rat f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

struct HnfResult {
  IntMatrix h;          ///< first `rank` rows: echelon basis; remaining rows zero
  IntMatrix transform;  ///< unimodular U with U * input = h
  std::size_t rank = 0;
};

/// Row Hermite normal form: pivots positive, entries above a pivot reduced
/// into [0, pivot). Rows of the transform past `rank` span the left kernel.
inline HnfResult hnf_with_transform(const IntMatrix& a) {
  HnfResult res{a, IntMatrix::identity(a.rows()), 0};
  IntMatrix& h = res.h;
  IntMatrix& u = res.transform;
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    for (std::size_t i = r + 1; i < m; ++i) {
      if (h(i, j) == 0) continue;
      if (h(r, j) == 0) {
        h.swap_rows(r, i);
        u.swap_rows(r, i);
        continue;
      }
      auto [g, s, t] = xgcd(h(r, j), h(i, j));
      Int pa = h(r, j) / g, pb = h(i, j) / g;
      for (std::size_t c = 0; c < n; ++c) {
        Int x = h(r, c), y = h(i, c);
        h(r, c) = s * x + t * y;
        h(i, c) = pa * y - pb * x;
      }
      for (std::size_t c = 0; c < m; ++c) {
        Int x = u(r, c), y = u(i, c);
        u(r, c) = s * x + t * y;
        u(i, c) = pa * y - pb * x;
      }
    }
    if (h(r, j) == 0) continue;
    if (h(r, j) < 0) {
      for (std::size_t c = 0; c < n; ++c) h(r, c) = -h(r, c);
      for (std::size_t c = 0; c < m; ++c) u(r, c) = -u(r, c);
    }
    for (std::size_t k = 0; k < r; ++k) {
      Int q = floor_div(h(k, j), h(r, j));
      if (q == 0) continue;
      for (std::size_t c = 0; c < n; ++c) h(k, c) -= q * h(r, c);
      for (std::size_t c = 0; c < m; ++c) u(k, c) -= q * u(r, c);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

/// HNF basis (rank rows) of the lattice spanned by the rows of `a`.
inline IntMatrix hnf(const IntMatrix& a) {
  auto res = hnf_with_transform(a);
  return res.h.block_rows(0, res.rank);
}

/// Basis of the left integer kernel {x : x a = 0}.
inline IntMatrix left_kernel(const IntMatrix& a) {
  auto res = hnf_with_transform(a);
  return res.transform.block_rows(res.rank, a.rows() - res.rank);
}

/// Lattice {y in Z^n : y m == 0 (mod modulus)} as an n x n HNF basis.
inline IntMatrix solve_mod_lattice(const IntMatrix& m, const Int& modulus) {
  const std::size_t n = m.rows(), k = m.cols();
  IntMatrix stacked(n + k, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) stacked(i, j) = m(i, j);
  for (std::size_t j = 0; j < k; ++j) stacked(n + j, j) = modulus;
  IntMatrix ker = left_kernel(stacked);
  IntMatrix ys(ker.rows(), n);
  for (std::size_t i = 0; i < ker.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) ys(i, j) = ker(i, j);
  return hnf(ys);
}

/// Solve x * b = y for the row vector x (b square, invertible).
inline std::vector<Rat> solve_row(std::span<const Rat> y, const RatMatrix& b) {
  RatMatrix inv = inverse(b);
  return row_times<Rat>(y, inv);
}

}  // namespace torbit
