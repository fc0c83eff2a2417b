// Dense matrices over an exact field with Gaussian elimination.
#pragma once

#include <cstddef>
#include <optional>
#include <type_traits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pdgal3/poly.hpp"

namespace pdgal3 {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (auto& r : init) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      for (auto& v : r) a_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }
  static Matrix column(const std::vector<F>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<F> col(std::size_t j) const {
    std::vector<F> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(std::size_t j, const std::vector<F>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  template <class Fn>
  auto map(Fn&& f) const {
    using G = std::decay_t<decltype(f(std::declval<const F&>()))>;
    Matrix<G> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = f((*this)(i, j));
    return m;
  }

  bool is_zero_matrix() const {
    for (auto& v : a_)
      if (!is_zero(v)) return false;
    return true;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += b.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= b.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.a_) v = -v;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const F& c, const Matrix& b) {
    Matrix r = b;
    for (auto& v : r.a_) v = c * v;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  F trace() const {
    F s(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
  }

  /// Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && is_zero((*this)(p, c))) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
      const F inv = F(1) / (*this)(r, c);
      for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || is_zero((*this)(i, c))) continue;
        const F f = (*this)(i, c);
        for (std::size_t j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
      }
      piv.push_back(c);
      ++r;
    }
    return piv;
  }

  std::size_t rank() const {
    Matrix m = *this;
    return m.rref().size();
  }

  /// Basis of the right kernel, one vector per free column, in RREF order.
  std::vector<std::vector<F>> nullspace() const {
    Matrix m = *this;
    auto piv = m.rref();
    std::vector<bool> is_piv(cols_, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (is_piv[f]) continue;
      std::vector<F> v(cols_, F(0));
      v[f] = F(1);
      for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  F det() const {
    if (!is_square()) throw DimensionError("determinant of non-square matrix");
    Matrix m = *this;
    F d(1);
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t p = c;
      while (p < rows_ && is_zero(m(p, c))) ++p;
      if (p == rows_) return F(0);
      if (p != c) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap(m(p, j), m(c, j));
        d = -d;
      }
      d *= m(c, c);
      const F inv = F(1) / m(c, c);
      for (std::size_t i = c + 1; i < rows_; ++i) {
        if (is_zero(m(i, c))) continue;
        const F f = m(i, c) * inv;
        for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
      }
    }
    return d;
  }

  std::optional<Matrix> inverse() const {
    if (!is_square()) throw DimensionError("inverse of non-square matrix");
    const std::size_t n = rows_;
    Matrix aug(n, 2 * n);
    aug.set_block(0, 0, *this);
    aug.set_block(0, n, identity(n));
    auto piv = aug.rref();
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    return aug.block(0, n, n, n);
  }

  /// Solve this * X = rhs; empty if inconsistent. Free variables set to 0.
  std::optional<Matrix> solve(const Matrix& rhs) const {
    if (rhs.rows() != rows_) throw DimensionError("solve shape mismatch");
    Matrix aug(rows_, cols_ + rhs.cols());
    aug.set_block(0, 0, *this);
    aug.set_block(0, cols_, rhs);
    auto piv = aug.rref();
    Matrix x(cols_, rhs.cols());
    for (std::size_t r = 0; r < piv.size(); ++r) {
      if (piv[r] >= cols_) return std::nullopt;
      for (std::size_t j = 0; j < rhs.cols(); ++j) x(piv[r], j) = aug(r, cols_ + j);
    }
    return x;
  }

  /// Characteristic polynomial det(z I - this) by reduction to Hessenberg form.
  Poly<F> charpoly() const {
    if (!is_square()) throw DimensionError("charpoly of non-square matrix");
    const std::size_t n = rows_;
    Matrix h = *this;
    for (std::size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
      std::size_t i = m;
      while (i < n && is_zero(h(i, m - 1))) ++i;
      if (i == n) continue;
      if (i != m) {
        for (std::size_t j = 0; j < n; ++j) std::swap(h(i, j), h(m, j));
        for (std::size_t j = 0; j < n; ++j) std::swap(h(j, i), h(j, m));
      }
      const F inv = F(1) / h(m, m - 1);
      for (std::size_t k = m + 1; k < n; ++k) {
        if (is_zero(h(k, m - 1))) continue;
        const F u = h(k, m - 1) * inv;
        for (std::size_t j = 0; j < n; ++j) h(k, j) -= u * h(m, j);
        for (std::size_t j = 0; j < n; ++j) h(j, m) += u * h(j, k);
      }
    }
    // Recurrence on leading principal submatrices of the Hessenberg form.
    std::vector<Poly<F>> p(n + 1);
    p[0] = Poly<F>(F(1));
    const Poly<F> z = Poly<F>::var();
    for (std::size_t m = 1; m <= n; ++m) {
      p[m] = (z - Poly<F>(h(m - 1, m - 1))) * p[m - 1];
      F prod(1);
      for (std::size_t i = 1; i < m; ++i) {
        prod *= h(m - i, m - i - 1);
        p[m] -= Poly<F>(prod * h(m - i - 1, m - 1)) * p[m - i - 1];
      }
    }
    return p[n];
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix shape mismatch");
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<F> a_;
};

/// Kronecker product.
template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return r;
}

}  // namespace pdgal3
