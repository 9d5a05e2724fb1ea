#pragma once

// Combinatorics of weight subspaces of tensor products of truncated Verma
// modules: compositions d of total weight M, the ordered multisets k with
// 1 <= k_1 <= ... <= k_M <= N labelling the tensor basis Omega_k, the
// occupancy bijection zeta between them, and the generator matrices of
// quantum sl2 in the weight basis v_0, v_1, ....

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "linalg.hpp"
#include "qseries.hpp"

namespace bqkz {

using MultiIndex = std::vector<int>;   // weakly increasing entries in 1..N
using Composition = std::vector<int>;  // occupation numbers per leg

// Model data: step size tau (through QBase), anisotropy eta, boundary
// parameters xi_+/xi_-, highest weights ell_1..ell_N and total weight M.
struct Params {
  QBase base;
  Complex eta;
  Complex xi_plus;
  Complex xi_minus;
  std::vector<Complex> ell;
  int M = 0;

  Params(Complex tau, Complex eta_in, Complex xi_p, Complex xi_m,
         std::vector<Complex> ell_in, int m_in)
      : base(tau), eta(eta_in), xi_plus(xi_p), xi_minus(xi_m),
        ell(std::move(ell_in)), M(m_in) {
    validate();
  }

  int N() const { return static_cast<int>(ell.size()); }
  Complex xi_tilde_plus() const { return xi_plus - 0.5 * eta - 0.5 * base.tau; }
  Complex xi_tilde_minus() const { return xi_minus - 0.5 * eta; }

  // Genericity pre-check: e^eta must stay away from the roots of unity probed
  // by the depths in play, otherwise the representation data degenerates.
  void validate() const {
    if (M < 0) throw DomainError("Params: M must be nonnegative");
    if (ell.empty()) throw DomainError("Params: need at least one leg");
    for (int k = 1; k <= 2 * M + 2; ++k) {
      if (std::abs(std::exp(static_cast<double>(k) * eta) - 1.0) <= 1e-8)
        throw DomainError("Params: e^eta too close to a root of unity");
    }
  }
};

// All weakly increasing M-tuples over {1..N} in lexicographic order.
inline std::vector<MultiIndex> enumerate_multi_indices(int M, int N) {
  if (M < 0 || N < 1) throw OutOfRange("enumerate_multi_indices: need M >= 0, N >= 1");
  std::vector<MultiIndex> out;
  MultiIndex k(M, 1);
  if (M == 0) {
    out.push_back(k);
    return out;
  }
  while (true) {
    out.push_back(k);
    int i = M - 1;
    while (i >= 0 && k[i] == N) --i;
    if (i < 0) break;
    const int v = k[i] + 1;
    for (int j = i; j < M; ++j) k[j] = v;
  }
  return out;
}

inline int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

// n_k(r) = #{ i : k_i = r }
inline int occupation(const MultiIndex& k, int r) {
  return static_cast<int>(std::count(k.begin(), k.end(), r));
}

inline Composition zeta(const MultiIndex& k, int N) {
  Composition d(N, 0);
  for (int v : k) {
    if (v < 1 || v > N) throw OutOfRange("zeta: entry outside 1..N");
    ++d[v - 1];
  }
  return d;
}

inline MultiIndex zeta_inv(const Composition& d) {
  MultiIndex k;
  for (int r = 0; r < static_cast<int>(d.size()); ++r)
    for (int c = 0; c < d[r]; ++c) k.push_back(r + 1);
  return k;
}

// i_k(m; r) = sum_{s<r} n_k(s) + m, the position of the m-th entry equal to r.
inline int position_index(const MultiIndex& k, int m, int r) {
  const int n = occupation(k, r);
  if (m < 1 || m > n) throw OutOfRange("position_index: m outside 1..n_k(r)");
  int before = 0;
  for (int v : k)
    if (v < r) ++before;
  return before + m;
}

// Matrices of e^{z h_1}, e_1, f_1 on span{v_0, ..., v_{d_max}}:
//   e^{z h1} v_d = e^{2(ell-d) z} v_d
//   e_1 v_d = sinh(d eta) sinh((2 ell + 1 - d) eta) / sinh(eta)^2 v_{d-1}
//   f_1 v_d = v_{d+1}  (with f_1 v_{d_max} = 0 at the truncation edge)
struct VermaGenerators {
  Matrix exp_h;
  Matrix e;
  Matrix f;
};

inline Complex verma_e_coeff(Complex ell, Complex eta, int d) {
  const Complex sh = std::sinh(eta);
  return std::sinh(static_cast<double>(d) * eta) *
         std::sinh((2.0 * ell + 1.0 - static_cast<double>(d)) * eta) / (sh * sh);
}

inline VermaGenerators verma_generators(Complex ell, Complex z, Complex eta, int d_max) {
  if (d_max < 0) throw OutOfRange("verma_generators: d_max must be >= 0");
  const int n = d_max + 1;
  VermaGenerators g{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (int d = 0; d <= d_max; ++d) {
    g.exp_h(d, d) = std::exp(2.0 * (ell - static_cast<double>(d)) * z);
    if (d >= 1) g.e(d - 1, d) = verma_e_coeff(ell, eta, d);
    if (d + 1 <= d_max) g.f(d + 1, d) = 1.0;
  }
  return g;
}

// Element of the total-weight-M subspace, as coefficients over the basis
// Omega_k indexed by the ordered multisets k.
struct WeightVector {
  std::map<MultiIndex, Complex> coeffs;

  Complex coeff(const MultiIndex& k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? Complex(0.0) : it->second;
  }

  WeightVector& operator+=(const WeightVector& o) {
    for (const auto& [k, c] : o.coeffs) coeffs[k] += c;
    return *this;
  }

  WeightVector& operator-=(const WeightVector& o) {
    for (const auto& [k, c] : o.coeffs) coeffs[k] -= c;
    return *this;
  }

  WeightVector& operator*=(Complex s) {
    for (auto& [k, c] : coeffs) c *= s;
    return *this;
  }

  double norm_inf() const {
    double m = 0.0;
    for (const auto& [k, c] : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

inline WeightVector operator*(Complex s, WeightVector v) {
  v *= s;
  return v;
}

inline WeightVector operator-(WeightVector a, const WeightVector& b) {
  a -= b;
  return a;
}

// max_k |a_k - b_k| / max_k max(|a_k|, |b_k|)
inline double rel_diff(const WeightVector& a, const WeightVector& b) {
  const double scale = std::max(a.norm_inf(), b.norm_inf());
  if (scale == 0.0) return 0.0;
  WeightVector d = a;
  d -= b;
  return d.norm_inf() / scale;
}

inline bool is_positive_half_integer(Complex ell, double tol = 1e-12) {
  const double two = 2.0 * ell.real();
  return std::abs(ell.imag()) <= tol && two > 0.5 &&
         std::abs(two - std::round(two)) <= tol;
}

// Projection onto the finite-dimensional quotient: kills every coefficient
// whose occupation exceeds 2 ell_r on some leg.
inline WeightVector project_finite(const WeightVector& v, std::span<const Complex> ell) {
  for (const Complex& l : ell)
    if (!is_positive_half_integer(l))
      throw NotHalfInteger("project_finite: weights must lie in (1/2) Z_{>0}");
  WeightVector out;
  const int N = static_cast<int>(ell.size());
  for (const auto& [k, c] : v.coeffs) {
    bool keep = true;
    for (int r = 1; r <= N; ++r) {
      const int cap = static_cast<int>(std::lround(2.0 * ell[r - 1].real()));
      if (occupation(k, r) > cap) { keep = false; break; }
    }
    if (keep) out.coeffs[k] = c;
  }
  return out;
}

}  // namespace bqkz
