#pragma once

// Scalar building blocks of the integral solutions: the asymptotic
// multipliers varphi_{k;r} and their theta-quotient solution Phi_k, the
// single-variable factors F, g, h, u, the weight function w_k (in both its
// defining and its cancelled product form), the leading-coefficient density,
// and the closed-form leading coefficient nu_k.

#include <span>
#include <vector>

#include "qseries.hpp"
#include "weightspace.hpp"

namespace bqkz {

// varphi_{k;r} = ( prod_{i: k_i = r} e^{2(eta - xi_+ - xi_-) + 4(M - i - sum_{s >= r} ell_s) eta} )
//                * e^{-4 ell_r #{i: k_i > r} eta}
inline Complex varphi(const Params& p, const MultiIndex& k, int r) {
  const int M = static_cast<int>(k.size());
  Complex sum_ge = 0.0;
  for (int s = r; s <= p.N(); ++s) sum_ge += p.ell[s - 1];
  Complex expo = 0.0;
  int above = 0;
  for (int i = 1; i <= M; ++i) {
    if (k[i - 1] == r)
      expo += 2.0 * (p.eta - p.xi_plus - p.xi_minus) +
              4.0 * (static_cast<double>(M - i) - sum_ge) * p.eta;
    if (k[i - 1] > r) ++above;
  }
  expo -= 4.0 * p.ell[r - 1] * static_cast<double>(above) * p.eta;
  return std::exp(expo);
}

// psi_{k;i} = xi~_+ + xi~_- + tau + ell_{k_i} eta + 2 (sum_{s > k_i} ell_s - M + i) eta
inline Complex psi_coeff(const Params& p, const MultiIndex& k, int i) {
  const int M = static_cast<int>(k.size());
  if (i < 1 || i > M) throw OutOfRange("psi_coeff: i outside 1..M");
  const int ki = k[i - 1];
  Complex sum_gt = 0.0;
  for (int s = ki + 1; s <= p.N(); ++s) sum_gt += p.ell[s - 1];
  return p.xi_tilde_plus() + p.xi_tilde_minus() + p.base.tau + p.ell[ki - 1] * p.eta +
         2.0 * (sum_gt - static_cast<double>(M) + static_cast<double>(i)) * p.eta;
}

// omega_{k;r} = xi_+ + xi_- + (ell_r - n_k(r)) eta + 2 sum_{s > r} (ell_s - n_k(s)) eta,
// pinned by psi_{k; i(m;r)} = omega_{k;r} + tau/2 + (2m - n_k(r) - 1) eta.
inline Complex omega_coeff(const Params& p, const MultiIndex& k, int r) {
  Complex val = p.xi_plus + p.xi_minus +
                (p.ell[r - 1] - static_cast<double>(occupation(k, r))) * p.eta;
  for (int s = r + 1; s <= p.N(); ++s)
    val += 2.0 * (p.ell[s - 1] - static_cast<double>(occupation(k, s))) * p.eta;
  return val;
}

// Phi_k(t) = prod_r theta(e^{2 t_r}) / theta(varphi_{k;r} e^{2 t_r}),
// satisfying Phi_k(t + tau e_r) = varphi_{k;r} Phi_k(t).
inline Complex phi_theta_quotient(const Params& p, const MultiIndex& k,
                                  std::span<const Complex> t) {
  Complex val = 1.0;
  for (int r = 1; r <= p.N(); ++r) {
    const Complex z = std::exp(2.0 * t[r - 1]);
    const Complex den = theta(varphi(p, k, r) * z, p.base);
    if (std::abs(den) < 1e-250)
      throw SingularPoint("phi_theta_quotient: theta zero in denominator");
    val *= theta(z, p.base) / den;
  }
  return val;
}

inline Complex F_factor(const Params& p, Complex x, std::span<const Complex> t) {
  Complex val = 1.0;
  for (int s = 1; s <= p.N(); ++s) {
    const Complex le = p.ell[s - 1] * p.eta;
    const Complex ts = t[s - 1];
    val *= qpoch(std::exp(-2.0 * (ts + x - le)), p.base) *
           qpoch(std::exp(-2.0 * (ts - x - le)), p.base) /
           (qpoch(std::exp(-2.0 * (ts + x + le)), p.base) *
            qpoch(std::exp(-2.0 * (ts - x + le)), p.base));
  }
  return val;
}

inline Complex g_factor(const Params& p, Complex x) {
  const Complex xp = p.xi_tilde_plus(), xm = p.xi_tilde_minus();
  return qpoch(p.base.qsq * std::exp(2.0 * (xp - x)), p.base) *
         qpoch(p.base.qsq * std::exp(2.0 * (xm - x)), p.base) /
         (qpoch(std::exp(2.0 * (-xp - x)), p.base) *
          qpoch(std::exp(2.0 * (-xm - x)), p.base));
}

inline Complex h_factor(const Params& p, Complex x) {
  return (1.0 - std::exp(-2.0 * x)) *
         qpoch(p.base.qsq * std::exp(-2.0 * (x + p.eta)), p.base) /
         qpoch(std::exp(-2.0 * (x - p.eta)), p.base);
}

inline Complex u_factor(const Params& p, const MultiIndex& k, int i, Complex x,
                        std::span<const Complex> t) {
  const int ki = k[i - 1];
  Complex val = std::exp(-t[ki - 1]) *
                theta(std::exp(2.0 * (x - t[ki - 1] + psi_coeff(p, k, i))), p.base);
  for (int s = ki + 1; s <= p.N(); ++s)
    val *= theta(std::exp(2.0 * (x - t[s - 1] - p.ell[s - 1] * p.eta)), p.base);
  for (int s = ki; s <= p.N(); ++s) {
    const Complex den = theta(std::exp(2.0 * (x - t[s - 1] + p.ell[s - 1] * p.eta)), p.base);
    if (std::abs(den) < 1e-250) throw SingularPoint("u_factor: theta zero in denominator");
    val /= den;
  }
  return val;
}

// Per-variable factor of w_k / Phi_k in the cancelled product form; all of its
// q-Pochhammer arguments stay bounded deep in the asymptotic sector, which is
// what makes this the production evaluation route.
inline Complex w_dim_factor(const Params& p, const MultiIndex& k, int i, Complex x,
                            std::span<const Complex> t) {
  const int ki = k[i - 1];
  const QBase& b = p.base;
  Complex val = 1.0;
  for (int s = 1; s < ki; ++s)
    val *= qpoch(std::exp(2.0 * (x - t[s - 1] + p.ell[s - 1] * p.eta)), b);
  for (int s = 1; s <= ki; ++s)
    val /= qpoch(std::exp(2.0 * (x - t[s - 1] - p.ell[s - 1] * p.eta)), b);
  val *= std::exp(-t[ki - 1]) *
         theta(std::exp(2.0 * (x - t[ki - 1] + psi_coeff(p, k, i))), b);
  for (int s = ki + 1; s <= p.N(); ++s)
    val *= qpoch(b.qsq * std::exp(2.0 * (t[s - 1] - x + p.ell[s - 1] * p.eta)), b);
  for (int s = ki; s <= p.N(); ++s)
    val /= qpoch(b.qsq * std::exp(2.0 * (t[s - 1] - x - p.ell[s - 1] * p.eta)), b);
  for (int s = 1; s <= p.N(); ++s)
    val *= qpoch(std::exp(-2.0 * (t[s - 1] + x - p.ell[s - 1] * p.eta)), b) /
           qpoch(std::exp(-2.0 * (t[s - 1] + x + p.ell[s - 1] * p.eta)), b);
  val *= g_factor(p, x);
  return val;
}

// Pair factor of w_k / Phi_k: h(x_i + x_j) h(x_i - x_j) in cancelled form.
inline Complex w_pair_factor(const Params& p, Complex xi, Complex xj) {
  const QBase& b = p.base;
  Complex val = 1.0;
  for (const Complex z : {xi + xj, xi - xj}) {
    val *= (1.0 - std::exp(-2.0 * z)) *
           qpoch(b.qsq * std::exp(-2.0 * (z + p.eta)), b) /
           qpoch(std::exp(-2.0 * (z - p.eta)), b);
  }
  return val;
}

inline Complex w_over_phi(const Params& p, const MultiIndex& k,
                          std::span<const Complex> xs, std::span<const Complex> t) {
  const int M = static_cast<int>(k.size());
  Complex val = 1.0;
  for (int i = 1; i <= M; ++i) val *= w_dim_factor(p, k, i, xs[i - 1], t);
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) val *= w_pair_factor(p, xs[i], xs[j]);
  return val;
}

enum class WRoute { definition, expanded };

// The weight function w_k, either as defined (Phi_k . prod F g u . prod h) or
// in the cancelled product form. The two routes are algebraically equal and
// serve as mutual transcription oracles.
inline Complex weight_w(const Params& p, const MultiIndex& k, std::span<const Complex> xs,
                        std::span<const Complex> t, WRoute route = WRoute::expanded) {
  const int M = static_cast<int>(k.size());
  if (static_cast<int>(xs.size()) != M) throw OutOfRange("weight_w: |xs| != |k|");
  const Complex phi = phi_theta_quotient(p, k, t);
  if (route == WRoute::expanded) return phi * w_over_phi(p, k, xs, t);
  Complex val = phi;
  for (int i = 1; i <= M; ++i)
    val *= F_factor(p, xs[i - 1], t) * g_factor(p, xs[i - 1]) *
           u_factor(p, k, i, xs[i - 1], t);
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j)
      val *= h_factor(p, xs[i] + xs[j]) * h_factor(p, xs[i] - xs[j]);
  return val;
}

// Residuals of the two difference equations of w_k: the t_r-shift and the
// x_j-shift ratio, each minus its closed sinh-product value (both vanish on
// the nose; neither depends on k).
inline std::pair<Complex, Complex> w_shift_residuals(const Params& p, const MultiIndex& k,
                                                     std::span<const Complex> xs,
                                                     std::span<const Complex> t,
                                                     int r = 1, int j = 1) {
  const int M = static_cast<int>(k.size());
  const Complex tau = p.base.tau, eta = p.eta;
  const Complex w0 = weight_w(p, k, xs, t);

  std::vector<Complex> ts(t.begin(), t.end());
  ts[r - 1] += tau;
  Complex target_t = 1.0;
  for (int i = 0; i < M; ++i) {
    const Complex le = p.ell[r - 1] * eta;
    for (const double sgn : {1.0, -1.0})
      target_t *= std::sinh(t[r - 1] + sgn * xs[i] - le + tau) /
                  std::sinh(t[r - 1] + sgn * xs[i] + le + tau);
  }
  const Complex res_t = weight_w(p, k, xs, ts) / w0 - target_t;

  Complex res_x = 0.0;
  if (M > 0) {
    std::vector<Complex> xshift(xs.begin(), xs.end());
    xshift[j - 1] -= tau;
    const Complex xj = xs[j - 1];
    Complex target_x = 1.0;
    for (int s = 1; s <= p.N(); ++s) {
      const Complex le = p.ell[s - 1] * eta;
      target_x *= std::sinh(t[s - 1] + xj + le) / std::sinh(t[s - 1] + xj - le) *
                  std::sinh(t[s - 1] - xj - le + tau) / std::sinh(t[s - 1] - xj + le + tau);
    }
    target_x *= std::sinh(xj + p.xi_tilde_plus()) / std::sinh(xj - p.xi_tilde_plus() - tau) *
                std::sinh(xj + p.xi_tilde_minus()) / std::sinh(xj - p.xi_tilde_minus() - tau);
    for (int i = 0; i < M; ++i) {
      if (i == j - 1) continue;
      for (const double sgn : {1.0, -1.0}) {
        const Complex z = xj + sgn * xs[i];
        target_x *= std::sinh(z - tau) / std::sinh(z) * std::sinh(z - eta) /
                    std::sinh(z + eta - tau);
      }
    }
    res_x = weight_w(p, k, xshift, t) / w0 - target_x;
  }
  return {res_t, res_x};
}

// Leading-coefficient density: the scalar multiplying Omega_k in the deep-
// sector limit of the scaled integrand, as a function of the cycle variable y.
inline Complex leading_density_scalar(const Params& p, const MultiIndex& k,
                                      std::span<const Complex> ys) {
  const int M = static_cast<int>(k.size());
  const QBase& b = p.base;
  Complex val = 1.0;
  for (int i = 1; i <= M; ++i) {
    const Complex le = p.ell[k[i - 1] - 1] * p.eta;
    Complex sum_lt = 0.0;
    for (int s = 1; s < k[i - 1]; ++s) sum_lt += p.ell[s - 1];
    const Complex y = ys[i - 1];
    val *= -std::exp(p.xi_minus + 2.0 * sum_lt * p.eta) *
           theta(std::exp(2.0 * (y + psi_coeff(p, k, i))), b) /
           (qpoch(std::exp(2.0 * (y - le)), b) * qpoch(std::exp(2.0 * (-y - le)), b));
  }
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) {
      if (k[i] != k[j]) continue;
      const Complex d = ys[j] - ys[i];
      val *= (1.0 - std::exp(2.0 * d)) *
             qpoch(b.qsq * std::exp(2.0 * (d - p.eta)), b) /
             qpoch(std::exp(2.0 * (d + p.eta)), b);
    }
  return val;
}

// Integrand of the one-leg factor of the leading-coefficient integral: an
// n_k(r)-variable density depending on omega_{k;r} only.
inline Complex mu_r_integrand(const Params& p, const MultiIndex& k, int r,
                              std::span<const Complex> zs) {
  const int n = occupation(k, r);
  const QBase& b = p.base;
  const Complex omega = omega_coeff(p, k, r);
  const Complex le = p.ell[r - 1] * p.eta;
  Complex val = 1.0;
  for (int m = 1; m <= n; ++m) {
    const Complex z = zs[m - 1];
    val *= theta(b.q * std::exp(2.0 * (z + omega + static_cast<double>(2 * m - n - 1) * p.eta)), b) /
           (qpoch(std::exp(2.0 * (z - le)), b) * qpoch(std::exp(2.0 * (-z - le)), b));
  }
  for (int m = 0; m < n; ++m)
    for (int mp = m + 1; mp < n; ++mp) {
      const Complex d = zs[mp] - zs[m];
      val *= (1.0 - std::exp(2.0 * d)) *
             qpoch(b.qsq * std::exp(2.0 * (d - p.eta)), b) /
             qpoch(std::exp(2.0 * (d + p.eta)), b);
    }
  return val;
}

// Closed-form per-leg factor of the leading coefficient.
inline Complex nu_r_factor(const Params& p, const MultiIndex& k, int r) {
  const int n = occupation(k, r);
  const QBase& b = p.base;
  const Complex omega = omega_coeff(p, k, r);
  const Complex ell = p.ell[r - 1];
  Complex val = 1.0;
  for (int m = 1; m <= n; ++m) {
    const Complex shift = (static_cast<double>(m - 1) - ell) * p.eta;
    val *= (-PI * I_UNIT) * qpoch(b.qsq * std::exp(-2.0 * static_cast<double>(m) * p.eta), b) *
           qpoch(b.q * std::exp(2.0 * (shift + omega)), b) *
           qpoch(b.q * std::exp(2.0 * (shift - omega)), b) /
           (qpoch(b.qsq, b) * qpoch(b.qsq * std::exp(-2.0 * p.eta), b) *
            qpoch(std::exp(2.0 * (static_cast<double>(m - 1) - 2.0 * ell) * p.eta), b));
  }
  return val;
}

// nu_k = (pi i e^{xi_-})^M ( prod_{r<s} e^{2 ell_r n_k(s) eta} ) prod_r prod_m (...)
inline Complex nu_leading(const Params& p, const MultiIndex& k) {
  const int M = static_cast<int>(k.size());
  Complex val = std::pow(PI * I_UNIT * std::exp(p.xi_minus), M);
  Complex expo = 0.0;
  for (int r = 1; r <= p.N(); ++r)
    for (int s = r + 1; s <= p.N(); ++s)
      expo += 2.0 * p.ell[r - 1] * static_cast<double>(occupation(k, s)) * p.eta;
  val *= std::exp(expo);
  for (int r = 1; r <= p.N(); ++r) {
    const int n = occupation(k, r);
    if (n == 0) continue;
    // the per-leg factor carries one (-pi i) per m; strip it here
    val *= nu_r_factor(p, k, r) / std::pow(-PI * I_UNIT, n);
  }
  return val;
}

}  // namespace bqkz
