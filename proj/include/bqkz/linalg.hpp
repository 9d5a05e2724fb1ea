#pragma once

// Small dense complex linear algebra. Every matrix in this project is tiny
// (dimension well under 100), so the implementations below favour clarity
// over blocking: partial-pivot LU for solves/determinants and Householder QR
// for overdetermined least squares.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"
#include "qseries.hpp"

namespace bqkz {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  Complex operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator*(const Matrix& o) const {
    assert(cols_ == o.rows_);
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Complex aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }

  Matrix& operator*=(Complex s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend Matrix operator*(Complex s, Matrix m) {
    m *= s;
    return m;
  }

  std::vector<Complex> apply(std::span<const Complex> v) const {
    assert(static_cast<int>(v.size()) == cols_);
    std::vector<Complex> r(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      Complex s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& v : a_) s = std::max(s, std::abs(v));
    return s;
  }

  double norm_1() const {
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      double col = 0.0;
      for (int i = 0; i < rows_; ++i) col += std::abs((*this)(i, j));
      best = std::max(best, col);
    }
    return best;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

// ||x - y||_F / max(||x||_F, ||y||_F), zero when both vanish.
inline double rel_diff(const Matrix& x, const Matrix& y) {
  const double scale = std::max(x.frobenius(), y.frobenius());
  if (scale == 0.0) return 0.0;
  return (x - y).frobenius() / scale;
}

struct LUFactors {
  Matrix lu;
  std::vector<int> piv;
  int sign = 1;
  bool singular = false;
};

inline LUFactors lu_factor(Matrix a) {
  assert(a.rows() == a.cols());
  const int n = a.rows();
  LUFactors f{std::move(a), std::vector<int>(n), 1, false};
  for (int i = 0; i < n; ++i) f.piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > best) { best = std::abs(f.lu(i, k)); p = i; }
    if (best == 0.0) { f.singular = true; continue; }
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      std::swap(f.piv[k], f.piv[p]);
      f.sign = -f.sign;
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      const Complex lik = f.lu(i, k);
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  return f;
}

inline std::vector<Complex> lu_solve(const LUFactors& f, std::span<const Complex> b) {
  if (f.singular) throw IllConditioned("lu_solve: singular matrix");
  const int n = f.lu.rows();
  std::vector<Complex> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.piv[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

inline Complex determinant(const Matrix& a) {
  LUFactors f = lu_factor(a);
  if (f.singular) return 0.0;
  Complex d = static_cast<double>(f.sign);
  for (int i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

inline Matrix inverse(const Matrix& a) {
  const int n = a.rows();
  LUFactors f = lu_factor(a);
  Matrix inv(n, n);
  std::vector<Complex> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    auto col = lu_solve(f, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

inline double condition_1(const Matrix& a) {
  return a.norm_1() * inverse(a).norm_1();
}

// Householder-QR least squares: minimizes ||A x - b|| columnwise for the
// right-hand sides stacked in B (A is m x n with m >= n). cond_estimate, when
// requested, reports max|R_ii| / min|R_ii| of the triangular factor.
inline Matrix lstsq(Matrix a, Matrix b, double* cond_estimate = nullptr) {
  const int m = a.rows(), n = a.cols(), p = b.cols();
  assert(b.rows() == m && m >= n);
  for (int k = 0; k < n; ++k) {
    double xnorm = 0.0;
    for (int i = k; i < m; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex akk = a(k, k);
    const Complex phase = (akk == 0.0) ? Complex(1.0) : akk / std::abs(akk);
    const Complex alpha = -phase * xnorm;
    std::vector<Complex> v(m - k);
    v[0] = akk - alpha;
    for (int i = k + 1; i < m; ++i) v[i - k] = a(i, k);
    double vnorm2 = 0.0;
    for (const auto& c : v) vnorm2 += std::norm(c);
    if (vnorm2 == 0.0) continue;
    auto reflect = [&](Matrix& mat, int col0) {
      for (int j = col0; j < mat.cols(); ++j) {
        Complex dot = 0.0;
        for (int i = k; i < m; ++i) dot += std::conj(v[i - k]) * mat(i, j);
        dot *= 2.0 / vnorm2;
        for (int i = k; i < m; ++i) mat(i, j) -= dot * v[i - k];
      }
    };
    reflect(a, k);
    reflect(b, 0);
  }
  if (cond_estimate) {
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(a(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    *cond_estimate = (dmin == 0.0) ? std::numeric_limits<double>::infinity() : dmax / dmin;
  }
  Matrix x(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = n - 1; i >= 0; --i) {
      Complex s = b(i, j);
      for (int l = i + 1; l < n; ++l) s -= a(i, l) * x(l, j);
      if (a(i, i) == 0.0) throw IllConditioned("lstsq: rank-deficient system");
      x(i, j) = s / a(i, i);
    }
  return x;
}

}  // namespace bqkz
