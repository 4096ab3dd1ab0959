#pragma once

#include "meromat/error.hpp"
#include "meromat/exact.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace meromat {

// Dense row-major matrix over a ring T. T() must be the zero and T(1) the one.
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : r_(rows), c_(cols), d_(std::move(data)) {
    if (d_.size() != r_ * c_)
      throw DimensionError("matrix data length does not match dimensions");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (auto &row : rows) {
      if (row.size() != c_)
        throw DimensionError("ragged matrix literal");
      d_.insert(d_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = T(1);
    return m;
  }
  static Matrix diagonal(const std::vector<T> &d, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < d.size() && i < rows && i < cols; ++i)
      m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }
  T &operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  const std::vector<T> &data() const { return d_; }

  Matrix block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const {
    if (i0 + nr > r_ || j0 + nc > c_)
      throw DimensionError("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }
  void set_block(std::size_t i0, std::size_t j0, const Matrix &b) {
    if (i0 + b.r_ > r_ || j0 + b.c_ > c_)
      throw DimensionError("block out of range");
    for (std::size_t i = 0; i < b.r_; ++i)
      for (std::size_t j = 0; j < b.c_; ++j)
        (*this)(i0 + i, j0 + j) = b(i, j);
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (auto &x : d_)
      if (!(x == T()))
        return false;
    return true;
  }

  template <class F> auto map(F f) const {
    using U = decltype(f(std::declval<const T &>()));
    Matrix<U> out(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j)
        out(i, j) = f((*this)(i, j));
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t j = 0; j < c_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b)
      return;
    for (std::size_t i = 0; i < r_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }
  // row dst += f * row src
  void add_row(std::size_t dst, std::size_t src, const T &f) {
    for (std::size_t j = 0; j < c_; ++j)
      if (!((*this)(src, j) == T()))
        (*this)(dst, j) += f * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T &f) {
    for (std::size_t i = 0; i < r_; ++i)
      if (!((*this)(i, src) == T()))
        (*this)(i, dst) += (*this)(i, src) * f;
  }
  void scale_row(std::size_t i, const T &f) {
    for (std::size_t j = 0; j < c_; ++j)
      (*this)(i, j) = f * (*this)(i, j);
  }
  void scale_col(std::size_t j, const T &f) {
    for (std::size_t i = 0; i < r_; ++i)
      (*this)(i, j) = (*this)(i, j) * f;
  }

  Matrix &operator+=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k)
      d_[k] += o.d_[k];
    return *this;
  }
  Matrix &operator-=(const Matrix &o) {
    check_same(o);
    for (std::size_t k = 0; k < d_.size(); ++k)
      d_[k] -= o.d_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  Matrix operator-() const {
    Matrix m = *this;
    for (auto &x : m.d_)
      x = -x;
    return m;
  }
  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.c_ != b.r_)
      throw DimensionError("matrix product dimension mismatch: " + a.dims() + " * " + b.dims());
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T &x = a(i, k);
        if (x == T())
          continue;
        for (std::size_t j = 0; j < b.c_; ++j)
          if (!(b(k, j) == T()))
            m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend Matrix operator*(const T &s, Matrix a) {
    for (auto &x : a.d_)
      x = s * x;
    return a;
  }
  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Matrix &a, const Matrix &b) { return !(a == b); }

  std::string dims() const { return std::to_string(r_) + "x" + std::to_string(c_); }

private:
  void check_same(const Matrix &o) const {
    if (r_ != o.r_ || c_ != o.c_)
      throw DimensionError("matrix dimension mismatch: " + dims() + " vs " + o.dims());
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

template <class T> Matrix<T> hstack(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.rows() != b.rows())
    throw DimensionError("hstack row mismatch: " + a.dims() + " | " + b.dims());
  Matrix<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class T> Matrix<T> vstack(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.cols() != b.cols())
    throw DimensionError("vstack column mismatch: " + a.dims() + " / " + b.dims());
  Matrix<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

// [[a, b], [c, d]] with consistent block sizes.
template <class T>
Matrix<T> blocks(const Matrix<T> &a, const Matrix<T> &b, const Matrix<T> &c, const Matrix<T> &d) {
  return vstack(hstack(a, b), hstack(c, d));
}

template <class T> Matrix<T> direct_sum(const Matrix<T> &a, const Matrix<T> &b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

using PolyMat = Matrix<Poly>;
using RatMat = Matrix<RatFn>;
using ScalarMat = Matrix<GaussRat>;

inline RatMat to_ratmat(const PolyMat &p) {
  return p.map([](const Poly &x) { return RatFn(x); });
}

// Throws InputError if some entry has a nonconstant denominator.
inline PolyMat to_polymat(const RatMat &m) {
  return m.map([](const RatFn &x) {
    if (!x.is_poly())
      throw InputError("matrix entry is not a polynomial: " + x.str());
    return x.num();
  });
}

inline PolyMat to_polymat(const ScalarMat &m) {
  return m.map([](const GaussRat &x) { return Poly(x); });
}

} // namespace meromat
