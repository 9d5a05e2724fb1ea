#pragma once

// Monodromy operators, boundary Bethe-vector operators and their scalar
// decompositions.
//
// T(x; t) = L_{0 1}(x - t_1) ... L_{0 N}(x - t_N) acts on the auxiliary
// two-dimensional leg 0 tensored with the chain. Its 2x2 auxiliary entries
// A, B, C, D act on the chain alone; B raises the total weight by one and D
// preserves it. The boundary operator is assembled without any operator
// inversion as
//   B~(x; t) = sum_{eps = +-} eps sinh(xi~_- - eps x)/sinh(eta)
//                B(-eps x - eta/2; t) D(eps x - eta/2; t).

#include <bit>
#include <span>
#include <vector>

#include "rkmat.hpp"
#include "tensor.hpp"
#include "weightspace.hpp"

namespace bqkz {

// Chain space: N Verma legs truncated to total weight M.
inline TensorSpace chain_space(const Params& p) {
  return TensorSpace::verma(p.N(), p.M);
}

// Auxiliary leg (cap 1) in front of the chain; total cap M + 1 so that the
// weight-raising entry B stays exact on chain weights up to M - 1 and maps
// weight M to the truncation.
inline TensorSpace combined_space(const Params& p) {
  std::vector<int> caps(p.N() + 1, p.M + 1);
  caps[0] = 1;
  return TensorSpace(caps, p.M + 1);
}

// Product of L-operators along the given chain legs, acting on sp with the
// auxiliary slot at aux_leg. With inverted = true the factors are replaced by
// their unitarity inverses in reverse order, yielding T(x; t)^{-1}.
inline Matrix monodromy_on(const Params& p, const TensorSpace& sp, int aux_leg,
                           std::span<const int> legs, Complex x,
                           std::span<const Complex> t, bool inverted = false) {
  Matrix m = Matrix::identity(sp.dim());
  const int n = static_cast<int>(legs.size());
  int pair_cap = 0;
  for (int i = 0; i < sp.dim(); ++i) pair_cap = std::max(pair_cap, sp.weight(i));
  for (int idx = 0; idx < n; ++idx) {
    const int s = inverted ? n - 1 - idx : idx;
    const PairOperator l =
        inverted ? l_op_inverse(p.ell[s], p.eta, x - t[s], pair_cap)
                 : l_op(p.ell[s], p.eta, x - t[s], pair_cap);
    // normal: L_1 L_2 ... L_N; inverted: L_N^{-1} ... L_1^{-1}
    m = m * embed_pair(sp, aux_leg, legs[s], l);
  }
  return m;
}

struct MonodromyEntries {
  Matrix a, b, c, d;  // operators on the chain space
};

// Entries of T(x; t) with respect to the auxiliary basis: T(v_bar_in (x) u) =
// sum_out v_bar_out (x) X_{out,in}(u).
inline MonodromyEntries monodromy_entries(const Params& p, Complex x,
                                          std::span<const Complex> t) {
  const TensorSpace cs = combined_space(p);
  const TensorSpace chain = chain_space(p);
  std::vector<int> legs(p.N());
  for (int s = 0; s < p.N(); ++s) legs[s] = s + 1;
  const Matrix tm = monodromy_on(p, cs, 0, legs, x, t);

  auto extract = [&](int aux_out, int aux_in) {
    Matrix e(chain.dim(), chain.dim());
    std::vector<int> tup(p.N() + 1);
    for (int col = 0; col < chain.dim(); ++col) {
      tup[0] = aux_in;
      for (int s = 0; s < p.N(); ++s) tup[s + 1] = chain.state(col)[s];
      const int cin = cs.index_of(tup);
      if (cin < 0) continue;
      for (int row = 0; row < chain.dim(); ++row) {
        tup[0] = aux_out;
        for (int s = 0; s < p.N(); ++s) tup[s + 1] = chain.state(row)[s];
        const int cout = cs.index_of(tup);
        if (cout < 0) continue;
        e(row, col) = tm(cout, cin);
      }
    }
    return e;
  };
  return {extract(0, 0), extract(0, 1), extract(1, 0), extract(1, 1)};
}

// B~(x; t) on the chain space (raises total weight by one; weight M is
// annihilated by the truncation).
inline Matrix btilde_matrix(const Params& p, Complex x, std::span<const Complex> t) {
  const Complex xtm = p.xi_tilde_minus();
  const Complex sh_eta = std::sinh(p.eta);
  const MonodromyEntries plus = monodromy_entries(p, x - 0.5 * p.eta, t);
  const MonodromyEntries minus = monodromy_entries(p, -x - 0.5 * p.eta, t);
  // eps = +: B(-x - eta/2) D(x - eta/2); eps = -: -... B(x - eta/2) D(-x - eta/2)
  Matrix m = (std::sinh(xtm - x) / sh_eta) * (minus.b * plus.d);
  m = m - (std::sinh(xtm + x) / sh_eta) * (plus.b * minus.d);
  return m;
}

// Highest-weight vector of the chain space as a dense coefficient vector.
inline std::vector<Complex> omega_vector(const TensorSpace& chain) {
  std::vector<Complex> v(chain.dim(), 0.0);
  v[chain.index_of(std::vector<int>(chain.legs(), 0))] = 1.0;
  return v;
}

// Coefficients of the total-weight-M slice of a dense chain vector over the
// Omega_k basis.
inline WeightVector top_weight_slice(const Params& p, const TensorSpace& chain,
                                     std::span<const Complex> v) {
  WeightVector out;
  for (int i = 0; i < chain.dim(); ++i) {
    if (chain.weight(i) != p.M) continue;
    out.coeffs[zeta_inv(chain.state(i))] = v[i];
  }
  return out;
}

// B~(x_1) ... B~(x_M) Omega as a weight-M vector.
inline WeightVector bethe_vector(const Params& p, std::span<const Complex> xs,
                                 std::span<const Complex> t) {
  if (static_cast<int>(xs.size()) != p.M)
    throw OutOfRange("bethe_vector: need exactly M spectral points");
  const TensorSpace chain = chain_space(p);
  std::vector<Complex> v = omega_vector(chain);
  for (int i = p.M - 1; i >= 0; --i)
    v = btilde_matrix(p, xs[i], t).apply(v);
  return top_weight_slice(p, chain, v);
}

namespace detail {

// Distinct rearrangements of a weakly increasing tuple.
inline std::vector<std::vector<int>> distinct_rearrangements(const MultiIndex& k) {
  std::vector<std::vector<int>> out;
  std::vector<int> m = k;
  std::sort(m.begin(), m.end());
  do {
    out.push_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

}  // namespace detail

// Closed-form coefficient beta_k(x; t) of the boundary Bethe vector over
// Omega_k: a sum over distinct rearrangements m of k and signs eps in {+-}^M.
inline Complex beta_coeff(const Params& p, const MultiIndex& k,
                          std::span<const Complex> xs, std::span<const Complex> t) {
  const int M = static_cast<int>(k.size());
  if (static_cast<int>(xs.size()) != M)
    throw OutOfRange("beta_coeff: |xs| must equal |k|");
  if (M == 0) return 1.0;
  const Complex eta = p.eta;
  const Complex xtm = p.xi_tilde_minus();
  Complex pref = 0.0;
  for (int i = 0; i < M; ++i)
    pref += (0.5 * static_cast<double>(occupation(k, k[i])) - p.ell[k[i] - 1]) * eta;
  pref = std::exp(pref);

  Complex total = 0.0;
  for (const auto& m : detail::distinct_rearrangements(k)) {
    for (unsigned mask = 0; mask < (1u << M); ++mask) {
      std::vector<double> eps(M);
      for (int i = 0; i < M; ++i) eps[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      Complex term = 1.0;
      for (int i = 0; i < M; ++i) {
        const Complex ex = eps[i] * xs[i];
        const Complex den = std::sinh(t[m[i] - 1] + ex - p.ell[m[i] - 1] * eta);
        if (std::abs(den) < 1e-14) throw SingularPoint("beta_coeff: pole hit");
        term *= eps[i] * std::sinh(ex - xtm) / den;
        for (int s = m[i] + 1; s <= p.N(); ++s)
          term *= std::sinh(t[s - 1] + ex + p.ell[s - 1] * eta) /
                  std::sinh(t[s - 1] + ex - p.ell[s - 1] * eta);
        for (int s = 1; s <= p.N(); ++s)
          term *= std::sinh(t[s - 1] - ex + p.ell[s - 1] * eta) /
                  std::sinh(t[s - 1] - ex - p.ell[s - 1] * eta);
      }
      for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
          const Complex sum = eps[i] * xs[i] + eps[j] * xs[j];
          term *= std::sinh(sum + eta) / std::sinh(sum);
        }
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
          if (m[i] >= m[j]) continue;
          const Complex dif = eps[i] * xs[i] - eps[j] * xs[j];
          term *= std::sinh(dif - eta) / std::sinh(dif);
        }
      total += term;
    }
  }
  return pref * total;
}

inline WeightVector bethe_vector_closed_form(const Params& p, std::span<const Complex> xs,
                                             std::span<const Complex> t) {
  WeightVector out;
  for (const MultiIndex& k : enumerate_multi_indices(p.M, p.N()))
    out.coeffs[k] = beta_coeff(p, k, xs, t);
  return out;
}

enum class TypeAMethod { recursion, closed_form };

namespace detail {

inline Complex type_a_recursion(std::span<const Complex> ell, const Composition& d,
                                std::span<const Complex> xs, std::span<const Complex> t,
                                Complex eta) {
  const int n = static_cast<int>(ell.size());
  const int m = static_cast<int>(xs.size());
  if (n == 0) return m == 0 ? 1.0 : 0.0;
  const int dn = d[n - 1];
  if (dn < 0 || dn > m) return 0.0;
  const Complex ln = ell[n - 1];
  const Complex tn = t[n - 1];
  const Complex pref =
      std::exp(static_cast<double>(dn) * (0.5 * static_cast<double>(dn) - ln) * eta);
  const std::vector<Complex> sub_ell(ell.begin(), ell.end() - 1);
  const std::vector<Complex> sub_t(t.begin(), t.end() - 1);
  const Composition sub_d(d.begin(), d.end() - 1);

  Complex total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != m - dn) continue;  // mask marks J, |J^c| = d_N
    Complex term = 1.0;
    std::vector<Complex> xj;
    for (int i = 0; i < m; ++i) {
      const Complex low = std::sinh(tn - xs[i] - (0.5 + ln) * eta);
      if (mask >> i & 1) {
        term *= std::sinh(tn - xs[i] - (0.5 - ln) * eta) / low;
        xj.push_back(xs[i]);
      } else {
        term *= -std::sinh(eta) / low;
      }
    }
    for (int i = 0; i < m; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int j = 0; j < m; ++j) {
        if (mask >> j & 1) continue;
        term *= std::sinh(xs[i] - xs[j] + eta) / std::sinh(xs[i] - xs[j]);
      }
    }
    total += term * type_a_recursion(sub_ell, sub_d, xj, sub_t, eta);
  }
  return pref * total;
}

inline Complex type_a_closed_form(std::span<const Complex> ell, const Composition& d,
                                  std::span<const Complex> xs, std::span<const Complex> t,
                                  Complex eta) {
  const int m = static_cast<int>(xs.size());
  const int n = static_cast<int>(ell.size());
  int total_d = 0;
  for (int v : d) total_d += v;
  if (total_d != m) return 0.0;
  if (m == 0) return 1.0;
  Complex total = 0.0;
  for (const auto& tup : distinct_rearrangements(zeta_inv(d))) {
    Complex term = 1.0;
    for (int i = 0; i < m; ++i) {
      const int mi = tup[i];
      term *= -std::exp((0.5 * static_cast<double>(d[mi - 1]) - ell[mi - 1]) * eta) *
              std::sinh(eta) /
              std::sinh(t[mi - 1] - xs[i] - (0.5 + ell[mi - 1]) * eta);
      for (int s = mi + 1; s <= n; ++s)
        term *= std::sinh(t[s - 1] - xs[i] - (0.5 - ell[s - 1]) * eta) /
                std::sinh(t[s - 1] - xs[i] - (0.5 + ell[s - 1]) * eta);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (tup[i] >= tup[j]) continue;
        term *= std::sinh(xs[i] - xs[j] + eta) / std::sinh(xs[i] - xs[j]);
      }
    total += term;
  }
  return total;
}

}  // namespace detail

// Coefficient of v_d in B(x_1) ... B(x_M) Omega, through the leg-peeling
// recursion or through the closed-form orbit sum; the two agree.
inline Complex type_a_coeff(const Params& p, const Composition& d,
                            std::span<const Complex> xs, std::span<const Complex> t,
                            TypeAMethod method) {
  if (static_cast<int>(d.size()) != p.N())
    throw OutOfRange("type_a_coeff: composition length must be N");
  if (method == TypeAMethod::recursion)
    return detail::type_a_recursion(p.ell, d, xs, t, p.eta);
  return detail::type_a_closed_form(p.ell, d, xs, t, p.eta);
}

// Sklyanin reflection monodromy T(-x)^{-1} (K(x; xi_-) (x) Id) T(x) on the
// combined space; used as an independent route to the boundary operators.
inline Matrix sklyanin_monodromy(const Params& p, Complex x, std::span<const Complex> t) {
  const TensorSpace cs = combined_space(p);
  std::vector<int> legs(p.N());
  for (int s = 0; s < p.N(); ++s) legs[s] = s + 1;
  const Matrix tx = monodromy_on(p, cs, 0, legs, x, t);
  const Matrix tinv = monodromy_on(p, cs, 0, legs, -x, t, /*inverted=*/true);
  const std::vector<Complex> kv = k_diag(0.5, p.eta, x, p.xi_minus, 1);
  return tinv * embed_diag(cs, 0, kv) * tx;
}

}  // namespace bqkz
