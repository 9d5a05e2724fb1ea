#pragma once

// Transport operators of the boundary difference system, the residual
// harness for the equations Psi(t + tau e_r) = A_r(t) Psi(t), the diagonal
// asymptotic transport operator, the completeness matrix, and the projection
// to finite-dimensional quotients.

#include <span>
#include <string>
#include <vector>

#include "quad.hpp"

namespace bqkz {

struct TransportFactor {
  std::string kind;  // "R", "Rinv" or "K"
  int leg_a = 0, leg_b = 0;  // 1-based legs (leg_b = 0 for K)
  Complex argument;
};

// A_r(t) on the given truncated tensor space:
//   R_{r r+1}(t_r - t_{r+1} + tau) ... R_{r N}(t_r - t_N + tau)
//   K_r(t_r + tau/2; xi_+)
//   R_{N r}(t_N + t_r) ... R_{r+1 r}(t_{r+1} + t_r)
//   R_{r-1 r}(t_{r-1} + t_r) ... R_{1 r}(t_1 + t_r)
//   K_r(t_r; xi_-)
//   R_{1 r}(t_1 - t_r)^{-1} ... R_{r-1 r}(t_{r-1} - t_r)^{-1}
// with every inverse taken through unitarity, never numerically.
inline Matrix transport_on(const Params& p, const TensorSpace& sp, int r,
                           std::span<const Complex> t,
                           std::vector<TransportFactor>* trace = nullptr) {
  const int N = p.N();
  if (r < 1 || r > N) throw OutOfRange("transport_on: r outside 1..N");
  int pair_cap = 0;
  for (int i = 0; i < sp.dim(); ++i) pair_cap = std::max(pair_cap, sp.weight(i));
  const Complex tau = p.base.tau;
  Matrix m = Matrix::identity(sp.dim());
  auto note = [&](const std::string& kind, int a, int b, Complex arg) {
    if (trace) trace->push_back({kind, a, b, arg});
  };
  auto mul_r = [&](int a, int b, Complex arg) {
    m = m * embed_pair(sp, a - 1, b - 1,
                       solve_R(p.ell[a - 1], p.ell[b - 1], p.eta, arg, pair_cap));
    note("R", a, b, arg);
  };
  auto mul_rinv = [&](int a, int b, Complex arg) {
    m = m * embed_pair(sp, a - 1, b - 1,
                       r_inverse(p.ell[a - 1], p.ell[b - 1], p.eta, arg, pair_cap));
    note("Rinv", a, b, arg);
  };
  auto mul_k = [&](Complex arg, Complex xi) {
    m = m * embed_diag(sp, r - 1, k_diag(p.ell[r - 1], p.eta, arg, xi, pair_cap));
    note("K", r, 0, arg);
  };
  for (int s = r + 1; s <= N; ++s) mul_r(r, s, t[r - 1] - t[s - 1] + tau);
  mul_k(t[r - 1] + 0.5 * tau, p.xi_plus);
  for (int s = N; s >= r + 1; --s) mul_r(s, r, t[s - 1] + t[r - 1]);
  for (int s = r - 1; s >= 1; --s) mul_r(s, r, t[s - 1] + t[r - 1]);
  mul_k(t[r - 1], p.xi_minus);
  for (int s = 1; s <= r - 1; ++s) mul_rinv(s, r, t[s - 1] - t[r - 1]);
  return m;
}

inline Matrix transport(const Params& p, int r, std::span<const Complex> t,
                        std::vector<TransportFactor>* trace = nullptr) {
  return transport_on(p, chain_space(p), r, t, trace);
}

// Diagonal deep-sector limit of A_r: on a state d it acts by the product of
// the K-operator limits at both boundary parameters and the squared
// R-operator limits against the legs beyond r.
inline Matrix asymptotic_transport_on(const Params& p, const TensorSpace& sp, int r) {
  Matrix m(sp.dim(), sp.dim());
  int cap = 0;
  for (int i = 0; i < sp.dim(); ++i) cap = std::max(cap, sp.weight(i));
  const std::vector<Complex> kp = k_infinity(p.ell[r - 1], p.eta, p.xi_plus, cap);
  const std::vector<Complex> km = k_infinity(p.ell[r - 1], p.eta, p.xi_minus, cap);
  for (int i = 0; i < sp.dim(); ++i) {
    const std::vector<int>& d = sp.state(i);
    Complex v = kp[d[r - 1]] * km[d[r - 1]];
    for (int s = r + 1; s <= p.N(); ++s) {
      const Complex rc = r_infinity_coeff(p.ell[r - 1], p.ell[s - 1], p.eta, d[r - 1], d[s - 1]);
      v *= rc * rc;
    }
    m(i, i) = v;
  }
  return m;
}

inline Matrix asymptotic_transport(const Params& p, int r) {
  return asymptotic_transport_on(p, chain_space(p), r);
}

namespace detail {

inline std::vector<Complex> weight_vector_dense(const Params& p, const TensorSpace& sp,
                                                const WeightVector& v) {
  std::vector<Complex> out(sp.dim(), 0.0);
  for (const auto& [k, c] : v.coeffs) {
    const int idx = sp.index_of(zeta(k, p.N()));
    if (idx >= 0) out[idx] = c;
  }
  return out;
}

inline WeightVector dense_weight_vector(const TensorSpace& sp,
                                        std::span<const Complex> v, int weight) {
  WeightVector out;
  for (int i = 0; i < sp.dim(); ++i)
    if (sp.weight(i) == weight) out.coeffs[zeta_inv(sp.state(i))] = v[i];
  return out;
}

}  // namespace detail

// Relative residual || Psi_k(t + tau e_r) - A_r(t) Psi_k(t) || / || Psi_k(t) ||
// in the max-coefficient norm, with the shifted integral anchored at
// t + tau e_r.
inline double qkz_residual(const Params& p, const MultiIndex& k, std::span<const Complex> t,
                           int r, const QuadratureSettings& s) {
  if (!in_sector(p, t, SectorVariant::tilde_tau).ok)
    throw SectorViolation("qkz_residual: t must lie in the tau-shifted subsector");
  std::vector<Complex> ts(t.begin(), t.end());
  ts[r - 1] += p.base.tau;
  const WeightVector lhs = psi_solution(p, k, ts, s).value;
  const WeightVector psi = psi_solution(p, k, t, s).value;
  const TensorSpace chain = chain_space(p);
  const Matrix a = transport(p, r, t);
  const std::vector<Complex> rhs_dense =
      a.apply(detail::weight_vector_dense(p, chain, psi));
  const WeightVector rhs = detail::dense_weight_vector(chain, rhs_dense, p.M);
  WeightVector diff = lhs;
  diff -= rhs;
  const double scale = psi.norm_inf();
  if (scale == 0.0) return diff.norm_inf() == 0.0 ? 0.0 : 1.0;
  return diff.norm_inf() / scale;
}

struct CompletenessReport {
  std::vector<MultiIndex> basis;
  Matrix mat;  // columns Psi_k(t) over the Omega_m rows, both in lex order
  Complex det{0.0};
  double cond1 = 0.0;
};

// Solution matrix at a point t: nonsingularity witnesses that the Psi_k span
// the weight-M solution space.
inline CompletenessReport completeness_matrix(const Params& p, std::span<const Complex> t,
                                              const QuadratureSettings& s) {
  CompletenessReport rep;
  rep.basis = enumerate_multi_indices(p.M, p.N());
  const int n = static_cast<int>(rep.basis.size());
  rep.mat = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const WeightVector psi = psi_solution(p, rep.basis[j], t, s).value;
    for (int i = 0; i < n; ++i) rep.mat(i, j) = psi.coeff(rep.basis[i]);
  }
  rep.det = determinant(rep.mat);
  rep.cond1 = condition_1(rep.mat);
  return rep;
}

// Chain space of the finite-dimensional quotient: leg r capped at 2 ell_r.
inline TensorSpace projected_space(const Params& p) {
  std::vector<int> caps(p.N());
  for (int s = 0; s < p.N(); ++s) {
    if (!is_positive_half_integer(p.ell[s]))
      throw NotHalfInteger("projected_space: weights must lie in (1/2) Z_{>0}");
    caps[s] = std::min(p.M, static_cast<int>(std::lround(2.0 * p.ell[s].real())));
  }
  return TensorSpace(caps, p.M);
}

inline Matrix projected_transport(const Params& p, int r, std::span<const Complex> t) {
  return transport_on(p, projected_space(p), r, t);
}

// Residual of the projected equations for pr Psi_k against the projected
// transport operator.
inline double projected_qkz_residual(const Params& p, const MultiIndex& k,
                                     std::span<const Complex> t, int r,
                                     const QuadratureSettings& s) {
  for (int v : k)
    if (occupation(k, v) > static_cast<int>(std::lround(2.0 * p.ell[v - 1].real())))
      throw OutOfRange("projected_qkz_residual: k survives no projection");
  if (!in_sector(p, t, SectorVariant::tilde_tau).ok)
    throw SectorViolation("projected_qkz_residual: t outside the tau-shifted subsector");
  std::vector<Complex> ts(t.begin(), t.end());
  ts[r - 1] += p.base.tau;
  const WeightVector lhs = project_finite(psi_solution(p, k, ts, s).value, p.ell);
  const WeightVector pr_psi = project_finite(psi_solution(p, k, t, s).value, p.ell);
  const TensorSpace proj = projected_space(p);
  const Matrix a_bar = transport_on(p, proj, r, t);
  const std::vector<Complex> rhs_dense =
      a_bar.apply(detail::weight_vector_dense(p, proj, pr_psi));
  const WeightVector rhs = detail::dense_weight_vector(proj, rhs_dense, p.M);
  WeightVector diff = lhs;
  diff -= rhs;
  const double scale = pr_psi.norm_inf();
  if (scale == 0.0) return diff.norm_inf() == 0.0 ? 0.0 : 1.0;
  return diff.norm_inf() / scale;
}

}  // namespace bqkz
