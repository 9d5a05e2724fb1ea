#pragma once

// Tensor-product contour quadrature over the vertical period-pi segments, and
// the integral objects built on it: Theta_k, Psi_k, the leading-coefficient
// density and its closed-form evaluation, and depth sweeps along rays into
// the asymptotic sector.
//
// Every integrand in play is pi sqrt(-1)-periodic along its segment and
// analytic in a neighbourhood, so the equally weighted node sum (periodic
// trapezoid) converges geometrically in the node count.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bethe.hpp"
#include "contour.hpp"
#include "weightfn.hpp"

namespace bqkz {

struct QuadratureSettings {
  int n_per_dim = 64;  // power of two, >= 8
  bool refine = true;
  double rel_tol = 1e-9;
  int max_n = 1024;

  void validate() const {
    if (n_per_dim < 8 || (n_per_dim & (n_per_dim - 1)) != 0)
      throw DomainError("QuadratureSettings: n_per_dim must be a power of two >= 8");
    if (!(rel_tol > 0.0) || max_n < n_per_dim)
      throw DomainError("QuadratureSettings: bad tolerance or max_n");
  }
};

struct QuadResult {
  Complex value{0.0};
  double error = 0.0;  // refinement-based estimate
  int n = 0;           // nodes per dimension actually used
};

namespace detail {

// Node sum at fixed n: sum over the grid j in {0..n-1}^M of
// f(anchors + i pi j / n) . (i pi / n)^M, accumulated with index 0 fastest.
// Compensated summation keeps the floor at the integrand scale rather than
// growing with the node count (these integrands can cancel heavily).
template <typename F>
Complex node_sum(F&& f, std::span<const Complex> anchors, int n) {
  const int M = static_cast<int>(anchors.size());
  if (M == 0) return f(std::vector<Complex>{});
  const Complex step = I_UNIT * PI / static_cast<double>(n);
  std::vector<int> digits(M, 0);
  std::vector<Complex> x(M);
  for (int i = 0; i < M; ++i) x[i] = anchors[i];
  Complex sum = 0.0, comp = 0.0;
  while (true) {
    const Complex y = f(x) - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    int p = 0;
    while (p < M) {
      if (++digits[p] < n) {
        x[p] = anchors[p] + step * static_cast<double>(digits[p]);
        break;
      }
      digits[p] = 0;
      x[p] = anchors[p];
      ++p;
    }
    if (p == M) break;
  }
  Complex weight = 1.0;
  for (int i = 0; i < M; ++i) weight *= step;
  return weight * sum;
}

}  // namespace detail

// Periodic trapezoid over the product of vertical segments based at anchors,
// refined by doubling n until successive estimates agree to rel_tol.
template <typename F>
QuadResult periodic_contour_integral(F&& f, std::span<const Complex> anchors,
                                     const QuadratureSettings& s) {
  s.validate();
  if (anchors.empty()) return {detail::node_sum(f, anchors, 1), 0.0, 1};
  int n = s.n_per_dim;
  Complex val = detail::node_sum(f, anchors, n);
  double err = 0.0;
  while (s.refine && 2 * n <= s.max_n) {
    const Complex next = detail::node_sum(f, anchors, 2 * n);
    n *= 2;
    err = std::abs(next - val);
    val = next;
    if (err < s.rel_tol * std::max(std::abs(val), 1e-30)) break;
  }
  return {val, err, n};
}

struct VectorQuad {
  WeightVector value;
  double error = 0.0;
  int n = 0;
};

// Orientation of the solution cycles: each vertical segment is traversed from
// base + i pi down to its base. The closed-form evaluation of the leading
// coefficients (nu and its per-leg factors) holds in this orientation.
inline Complex cycle_sign(int dims) { return (dims % 2 == 0) ? 1.0 : -1.0; }

namespace detail {

// One fixed-n evaluation of Theta_k(t): per-dimension tables of the scalar
// factor and of the B~ matrices are precomputed, the pair factors per
// dimension pair, and the nested node loop reuses partial operator products
// (dimension M-1 is the outermost loop, dimension 0 the innermost).
inline std::vector<Complex> theta_nodes_fixed_n(const Params& p, const MultiIndex& k,
                                                std::span<const Complex> t,
                                                std::span<const Complex> anchors, int n,
                                                const TensorSpace& chain) {
  const int M = static_cast<int>(k.size());
  std::vector<Complex> omega = omega_vector(chain);
  if (M == 0) return omega;

  const Complex step = I_UNIT * PI / static_cast<double>(n);
  std::vector<std::vector<Complex>> nodes(M, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> dimfac(M, std::vector<Complex>(n));
  std::vector<std::vector<Matrix>> bt(M);
  for (int i = 0; i < M; ++i) {
    bt[i].reserve(n);
    for (int j = 0; j < n; ++j) {
      const Complex x = anchors[i] + step * static_cast<double>(j);
      nodes[i][j] = x;
      dimfac[i][j] = w_dim_factor(p, k, i + 1, x, t);
      bt[i].push_back(btilde_matrix(p, x, t));
    }
  }
  // pair tables for i < j
  std::vector<std::vector<std::vector<Complex>>> pairfac(M);
  for (int i = 0; i < M; ++i) {
    pairfac[i].resize(M);
    for (int j = i + 1; j < M; ++j) {
      pairfac[i][j].resize(static_cast<size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          pairfac[i][j][static_cast<size_t>(a) * n + b] =
              w_pair_factor(p, nodes[i][a], nodes[j][b]);
    }
  }

  std::vector<Complex> sum(chain.dim(), 0.0);
  std::vector<int> digit(M, 0);
  // vec[i]: B~(x_i) ... B~(x_{M-1}) Omega for the current digits i..M-1
  // scal[i]: prod_{a >= i} dimfac_a . prod_{i <= a < b} pairfac_{a b}
  std::vector<std::vector<Complex>> vec(M + 1);
  std::vector<Complex> scal(M + 1);
  vec[M] = omega;
  scal[M] = 1.0;
  auto recompute_from = [&](int level) {
    for (int i = level; i >= 0; --i) {
      vec[i] = bt[i][digit[i]].apply(vec[i + 1]);
      Complex s = scal[i + 1] * dimfac[i][digit[i]];
      for (int j = i + 1; j < M; ++j)
        s *= pairfac[i][j][static_cast<size_t>(digit[i]) * n + digit[j]];
      scal[i] = s;
    }
  };
  recompute_from(M - 1);
  while (true) {
    const Complex c = scal[0];
    for (int a = 0; a < chain.dim(); ++a) sum[a] += c * vec[0][a];
    int p_lvl = 0;
    while (p_lvl < M && ++digit[p_lvl] == n) {
      digit[p_lvl] = 0;
      ++p_lvl;
    }
    if (p_lvl == M) break;
    recompute_from(p_lvl);
  }
  Complex weight = cycle_sign(M);
  for (int i = 0; i < M; ++i) weight *= step;
  for (auto& v : sum) v *= weight;
  return sum;
}

inline double vec_norm_inf(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace detail

// Theta_k(t): the integral of (w_k / Phi_k) B~(x; t) Omega over the cycle
// anchored at t (or over an explicitly supplied admissible contour).
inline VectorQuad theta_solution(const Params& p, const MultiIndex& k,
                                 std::span<const Complex> t, const QuadratureSettings& s,
                                 const ContourSpec* contour = nullptr) {
  s.validate();
  const DomainCheck dc = in_domain(p, k);
  if (!dc.ok) throw DomainError("theta_solution: parameters outside the contour domain");
  const ContourSpec cs = contour ? *contour : find_gamma(p, k);
  std::vector<std::string> viol;
  if (!contour_separates(p, cs, t, &viol))
    throw PoleOnContour("theta_solution: " + (viol.empty() ? "separation failed" : viol.front()));
  const TensorSpace chain = chain_space(p);
  const std::vector<Complex> anchors = cs.anchors(t);

  int n = s.n_per_dim;
  std::vector<Complex> val = detail::theta_nodes_fixed_n(p, k, t, anchors, n, chain);
  double err = 0.0;
  if (p.M > 0) {
    while (s.refine && 2 * n <= s.max_n) {
      std::vector<Complex> next = detail::theta_nodes_fixed_n(p, k, t, anchors, 2 * n, chain);
      n *= 2;
      std::vector<Complex> diff(next.size());
      for (size_t i = 0; i < next.size(); ++i) diff[i] = next[i] - val[i];
      err = detail::vec_norm_inf(diff);
      val = std::move(next);
      if (err < s.rel_tol * std::max(detail::vec_norm_inf(val), 1e-30)) break;
    }
  } else {
    err = 0.0;
  }
  return {top_weight_slice(p, chain, val), err, n};
}

// Psi_k(t) = Phi_k(t) Theta_k(t).
inline VectorQuad psi_solution(const Params& p, const MultiIndex& k,
                               std::span<const Complex> t, const QuadratureSettings& s,
                               const ContourSpec* contour = nullptr) {
  VectorQuad theta = theta_solution(p, k, t, s, contour);
  const Complex phi = phi_theta_quotient(p, k, t);
  theta.value *= phi;
  theta.error *= std::abs(phi);
  return theta;
}

// R_0^k(y) as a weight-M vector supported on Omega_k.
inline WeightVector leading_density(const Params& p, const MultiIndex& k,
                                    std::span<const Complex> ys) {
  WeightVector v;
  v.coeffs[k] = leading_density_scalar(p, k, ys);
  return v;
}

// mu_k: the M-fold integral of the leading density over the cycle anchored at
// t = 0; equals nu_k.
inline QuadResult mu_full(const Params& p, const MultiIndex& k, const QuadratureSettings& s) {
  const ContourSpec cs = find_gamma(p, k);
  QuadResult q = periodic_contour_integral(
      [&](const std::vector<Complex>& ys) { return leading_density_scalar(p, k, ys); },
      cs.gamma, s);
  q.value *= cycle_sign(static_cast<int>(cs.gamma.size()));
  return q;
}

// mu_r^k: the n_k(r)-fold factor over the leg-r sub-cycle; equals nu_r^k.
inline QuadResult mu_r(const Params& p, const MultiIndex& k, int r,
                       const QuadratureSettings& s) {
  const int n = occupation(k, r);
  if (n == 0) return {Complex(1.0), 0.0, 0};
  const ContourSpec cs = find_gamma(p, k);
  std::vector<Complex> anchors(n);
  for (int m = 1; m <= n; ++m) anchors[m - 1] = cs.gamma[position_index(k, m, r) - 1];
  QuadResult q = periodic_contour_integral(
      [&](const std::vector<Complex>& zs) { return mu_r_integrand(p, k, r, zs); },
      anchors, s);
  q.value *= cycle_sign(n);
  return q;
}

struct AsymptoticsReport {
  std::vector<double> depths;
  std::vector<double> deviations;  // ||Theta_k(t) - nu_k Omega_k||_inf
  std::vector<Complex> omega_k_coeff;
  WeightVector final_value;
  Complex nu;
  bool monotone = false;
  double slope = 0.0;  // fitted d log(deviation) / d depth
};

// Sample Theta_k along t0 + depth * direction and report the decay of the
// deviation from the closed-form leading term nu_k Omega_k.
inline AsymptoticsReport asymptotic_leading(const Params& p, const MultiIndex& k,
                                            std::span<const Complex> t0,
                                            std::span<const Complex> direction,
                                            std::span<const double> depths,
                                            const QuadratureSettings& s) {
  AsymptoticsReport rep;
  rep.nu = nu_leading(p, k);
  WeightVector target;
  target.coeffs[k] = rep.nu;
  for (const double d : depths) {
    std::vector<Complex> t(t0.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = t0[i] + d * direction[i];
    const SectorCheck sc = in_sector(p, t, SectorVariant::tilde);
    if (!sc.ok) throw SectorViolation("asymptotic_leading: ray leaves the sector");
    const VectorQuad theta = theta_solution(p, k, t, s);
    WeightVector dev = theta.value;
    dev -= target;
    rep.depths.push_back(d);
    rep.deviations.push_back(dev.norm_inf());
    rep.omega_k_coeff.push_back(theta.value.coeff(k));
    rep.final_value = theta.value;
  }
  rep.monotone = true;
  for (size_t i = 1; i < rep.deviations.size(); ++i)
    if (!(rep.deviations[i] < rep.deviations[i - 1])) rep.monotone = false;
  if (rep.deviations.size() >= 2) {
    // least-squares slope of log(deviation) against depth
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = 0; i < rep.depths.size(); ++i) {
      if (rep.deviations[i] <= 0.0) continue;
      const double x = rep.depths[i], y = std::log(rep.deviations[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++cnt;
    }
    if (cnt >= 2) rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return rep;
}

}  // namespace bqkz
