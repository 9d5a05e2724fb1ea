#pragma once

// R-, K- and L-operators on truncated weight spaces.
//
// The R-operator on V^{l1} (x) V^{l2} is fixed by its normalization on the
// highest-weight pair together with the intertwining property for the
// evaluated coproducts. Both f_1 and e_0 raise the total weight by one, so
// the weight blocks of R can be built inductively: block 0 is the scalar 1,
// and block w solves the overdetermined linear system
//     R_w . G = G' . R_{w-1}
// stacked over the two raising generators, where G / G' are the evaluated
// images of Delta(a) / Delta^op(a). The full family of generators
// (e_1, f_1, e_0, f_0, h_1) is then re-checked and the relative residual is
// gated.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "tensor.hpp"
#include "weightspace.hpp"

namespace bqkz {

namespace detail {

// One summand of an evaluated coproduct on a pair of legs: shifts the two
// depths and multiplies by a coefficient evaluated at the source depths.
struct PairTerm {
  int shift1;
  int shift2;
  std::function<Complex(int, int)> coeff;
};

// Matrix of a sum of such terms from pair block w_in to block w_out,
// in the bases used by PairOperator.
inline Matrix pair_term_matrix(const std::vector<PairTerm>& terms, int w_in, int w_out,
                               int cap1, int cap2) {
  PairOperator shape{cap1, cap2, {}};
  const int lo_in = shape.d1_lo(w_in), hi_in = shape.d1_hi(w_in);
  const int lo_out = shape.d1_lo(w_out), hi_out = shape.d1_hi(w_out);
  Matrix m(hi_out - lo_out + 1, hi_in - lo_in + 1);
  for (int d1 = lo_in; d1 <= hi_in; ++d1) {
    const int d2 = w_in - d1;
    for (const PairTerm& t : terms) {
      const int e1 = d1 + t.shift1, e2 = d2 + t.shift2;
      if (e1 < lo_out || e1 > hi_out || e2 < 0 || e1 + e2 != w_out) continue;
      m(e1 - lo_out, d1 - lo_in) += t.coeff(d1, d2);
    }
  }
  return m;
}

enum class Gen { f1, e0, e1, f0 };

// Evaluated coproduct (op = false) or opposite coproduct (op = true) of a
// generator, with evaluation points (x, 0) on the two legs.
inline std::vector<PairTerm> coproduct_terms(Gen g, bool op, Complex l1, Complex l2,
                                             Complex eta, Complex x) {
  const Complex ex = std::exp(x);
  auto w1 = [l1, eta](int d1) { return std::exp(2.0 * (l1 - static_cast<double>(d1)) * eta); };
  auto w2 = [l2, eta](int d2) { return std::exp(2.0 * (l2 - static_cast<double>(d2)) * eta); };
  auto e1c = [l1, eta](int d1) { return verma_e_coeff(l1, eta, d1); };
  auto e2c = [l2, eta](int d2) { return verma_e_coeff(l2, eta, d2); };
  switch (g) {
    case Gen::f1:
      // Delta(f1) = f1 (x) e^{eta h1} + 1 (x) f1;  Delta^op swaps the legs.
      if (!op)
        return {{1, 0, [ex, w2](int, int d2) { return ex * w2(d2); }},
                {0, 1, [](int, int) { return Complex(1.0); }}};
      return {{1, 0, [ex](int, int) { return ex; }},
              {0, 1, [w1](int d1, int) { return w1(d1); }}};
    case Gen::e0:
      // Delta(e0) = e0 (x) 1 + e^{-eta h0} (x) e0, with phi_x(e0) = e^{-x} f1
      // and phi_x(e^{-eta h0}) = e^{eta h1}.
      if (!op)
        return {{1, 0, [ex](int, int) { return 1.0 / ex; }},
                {0, 1, [w1](int d1, int) { return w1(d1); }}};
      return {{0, 1, [](int, int) { return Complex(1.0); }},
              {1, 0, [ex, w2](int, int d2) { return w2(d2) / ex; }}};
    case Gen::e1:
      // Delta(e1) = e1 (x) 1 + e^{-eta h1} (x) e1, phi_x(e1) = e^{-x} e1.
      if (!op)
        return {{-1, 0, [ex, e1c](int d1, int) { return e1c(d1) / ex; }},
                {0, -1, [w1, e2c](int d1, int d2) { return e2c(d2) / w1(d1); }}};
      return {{0, -1, [e2c](int, int d2) { return e2c(d2); }},
              {-1, 0, [ex, w2, e1c](int d1, int d2) { return e1c(d1) / (ex * w2(d2)); }}};
    case Gen::f0:
      // Delta(f0) = f0 (x) e^{eta h0} + 1 (x) f0, phi_x(f0) = e^x e1,
      // phi_x(e^{eta h0}) = e^{-eta h1}.
      if (!op)
        return {{-1, 0, [ex, w2, e1c](int d1, int d2) { return ex * e1c(d1) / w2(d2); }},
                {0, -1, [e2c](int, int d2) { return e2c(d2); }}};
      return {{0, -1, [w1, e2c](int d1, int d2) { return e2c(d2) / w1(d1); }},
              {-1, 0, [ex, e1c](int d1, int) { return ex * e1c(d1); }}};
  }
  return {};
}

// Dense matrix of an evaluated coproduct on the graded 2-leg space.
inline Matrix coproduct_dense(Gen g, bool op, Complex l1, Complex l2, Complex eta,
                              Complex x, const TensorSpace& sp2) {
  const auto terms = coproduct_terms(g, op, l1, l2, eta, x);
  Matrix m(sp2.dim(), sp2.dim());
  for (int col = 0; col < sp2.dim(); ++col) {
    const auto& d = sp2.state(col);
    for (const PairTerm& t : terms) {
      std::vector<int> e = {d[0] + t.shift1, d[1] + t.shift2};
      if (e[0] < 0 || e[1] < 0) continue;
      const int row = sp2.index_of(e);
      if (row < 0) continue;
      m(row, col) += t.coeff(d[0], d[1]);
    }
  }
  return m;
}

}  // namespace detail

struct RSolveOptions {
  double residual_tol = 1e-10;
  double cond_limit = 1e8;
  bool check_full_family = true;
};

// Relative residual of R against the evaluated intertwining relations of all
// five generators, measured on the graded space up to the stored blocks.
inline double intertwining_residual(const PairOperator& r, Complex l1, Complex l2,
                                    Complex eta, Complex x) {
  TensorSpace sp2({r.cap1, r.cap2}, r.max_weight());
  const Matrix rd = pair_dense(r, sp2);
  double worst = 0.0;
  using detail::Gen;
  for (Gen g : {Gen::f1, Gen::e0, Gen::e1, Gen::f0}) {
    const Matrix gd = detail::coproduct_dense(g, false, l1, l2, eta, x, sp2);
    const Matrix gop = detail::coproduct_dense(g, true, l1, l2, eta, x, sp2);
    worst = std::max(worst, rel_diff(rd * gd, gop * rd));
  }
  return worst;
}

// R^{l1 l2}(x) on V^{l1} (x) V^{l2}, blocks 0..m_max, normalized by
// R (v_0 (x) v_0) = v_0 (x) v_0.
inline PairOperator solve_R(Complex l1, Complex l2, Complex eta, Complex x, int m_max,
                            const RSolveOptions& opt = {}) {
  PairOperator r{m_max, m_max, {}};
  r.blocks.emplace_back(1, 1);
  r.blocks[0](0, 0) = 1.0;
  using detail::Gen;
  for (int w = 1; w <= m_max; ++w) {
    const int n = w + 1, np = w;
    Matrix s(n, 2 * np), tgt(n, 2 * np);
    int off = 0;
    for (Gen g : {Gen::f1, Gen::e0}) {
      Matrix gd = detail::pair_term_matrix(
          detail::coproduct_terms(g, false, l1, l2, eta, x), w - 1, w, m_max, m_max);
      Matrix gop = detail::pair_term_matrix(
          detail::coproduct_terms(g, true, l1, l2, eta, x), w - 1, w, m_max, m_max);
      // the intertwining relation is homogeneous in (G, G'): equilibrate each
      // generator so spectral points with large |Re x| stay well scaled
      const double scale = std::max(gd.frobenius(), gop.frobenius());
      if (scale > 0.0) {
        gd *= 1.0 / scale;
        gop *= 1.0 / scale;
      }
      const Matrix rhs = gop * r.blocks[w - 1];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < np; ++j) {
          s(i, off + j) = gd(i, j);
          tgt(i, off + j) = rhs(i, j);
        }
      off += np;
    }
    // R_w . S = T  ->  S^T . R_w^T = T^T, solved columnwise by least squares
    double cond = 0.0;
    Matrix rw;
    try {
      rw = lstsq(s.transpose(), tgt.transpose(), &cond).transpose();
    } catch (const IllConditioned&) {
      throw IllConditioned("solve_R: intertwining system is rank deficient (resonant x?)");
    }
    if (cond > opt.cond_limit)
      throw IllConditioned("solve_R: intertwining system badly conditioned (resonant x?)");
    r.blocks.push_back(std::move(rw));
  }
  if (opt.check_full_family && m_max >= 1) {
    const double res = intertwining_residual(r, l1, l2, eta, x);
    if (!(res < opt.residual_tol))
      throw ResidualTooLarge("solve_R: intertwining residual above tolerance");
  }
  return r;
}

// Spin-half R-matrix in closed form.
inline PairOperator rbar_spinhalf(Complex eta, Complex x) {
  const Complex den = std::sinh(x + eta);
  if (std::abs(den) < 1e-12)
    throw SingularPoint("rbar_spinhalf: sinh(x + eta) vanishes");
  PairOperator r{1, 1, {}};
  r.blocks.emplace_back(1, 1);
  r.blocks[0](0, 0) = 1.0;
  Matrix b(2, 2);
  b(0, 0) = std::sinh(x) / den;
  b(1, 1) = b(0, 0);
  b(0, 1) = std::sinh(eta) / den;
  b(1, 0) = b(0, 1);
  r.blocks.push_back(std::move(b));
  Matrix top(1, 1);
  top(0, 0) = 1.0;
  r.blocks.push_back(std::move(top));
  return r;
}

// Diagonal K-operator: K v_d = prod_{j=1}^{d} sinh(xi - x + (l + 1/2 - j) eta)
//                                             / sinh(xi + x + (l + 1/2 - j) eta) v_d.
inline std::vector<Complex> k_diag(Complex ell, Complex eta, Complex x, Complex xi,
                                   int d_max) {
  std::vector<Complex> vals(d_max + 1);
  Complex acc = 1.0;
  vals[0] = acc;
  for (int d = 1; d <= d_max; ++d) {
    const Complex shift = (ell + 0.5 - static_cast<double>(d)) * eta;
    const Complex den = std::sinh(xi + x + shift);
    if (std::abs(den) < 1e-12)
      throw SingularPoint("k_diag: vanishing denominator");
    acc *= std::sinh(xi - x + shift) / den;
    vals[d] = acc;
  }
  return vals;
}

// L-operator: the R-operator with the first leg pushed to the two-dimensional
// quotient of V^{1/2}.
inline PairOperator l_op(Complex ell, Complex eta, Complex x, int m_max,
                         const RSolveOptions& opt = {}) {
  return quotient_leg1(solve_R(0.5, ell, eta, x, m_max, opt), 1);
}

// Inverse through unitarity: R^{l1 l2}(x)^{-1} = P R^{l2 l1}(-x) P.
inline PairOperator r_inverse(Complex l1, Complex l2, Complex eta, Complex x, int m_max,
                              const RSolveOptions& opt = {}) {
  return flip_conjugate(solve_R(l2, l1, eta, -x, m_max, opt));
}

inline PairOperator l_op_inverse(Complex ell, Complex eta, Complex x, int m_max,
                                 const RSolveOptions& opt = {}) {
  return quotient_leg1(r_inverse(0.5, ell, eta, x, m_max, opt), 1);
}

// x -> +infty limits:
//   R_inf (v_{d1} (x) v_{d2}) = e^{2(d1 d2 - l1 d2 - d1 l2) eta} v_{d1} (x) v_{d2}
//   K_inf(xi) v_d = (-1)^d e^{-d (2 xi + (2 l - d) eta)} v_d
inline Complex r_infinity_coeff(Complex l1, Complex l2, Complex eta, int d1, int d2) {
  const double dd1 = d1, dd2 = d2;
  return std::exp(2.0 * (dd1 * dd2 - l1 * dd2 - dd1 * l2) * eta);
}

inline PairOperator r_infinity(Complex l1, Complex l2, Complex eta, int m_max) {
  PairOperator r{m_max, m_max, {}};
  for (int w = 0; w <= m_max; ++w) {
    const int n = w + 1;
    Matrix b(n, n);
    for (int d1 = 0; d1 <= w; ++d1)
      b(d1, d1) = r_infinity_coeff(l1, l2, eta, d1, w - d1);
    r.blocks.push_back(std::move(b));
  }
  return r;
}

inline std::vector<Complex> k_infinity(Complex ell, Complex eta, Complex xi, int d_max) {
  std::vector<Complex> vals(d_max + 1);
  for (int d = 0; d <= d_max; ++d) {
    const double dd = d;
    vals[d] = ((d % 2 == 0) ? 1.0 : -1.0) *
              std::exp(-dd * (2.0 * xi + (2.0 * ell - dd) * eta));
  }
  return vals;
}

}  // namespace bqkz
