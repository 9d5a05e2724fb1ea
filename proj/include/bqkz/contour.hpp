#pragma once

// Parameter-domain predicates, deterministic construction of admissible
// contour base points, sector membership with slack reports, and the pole
// bookkeeping for the integrands.
//
// The integration cycle for a label k is the product of vertical segments
//   C_k^gamma(t) = prod_i ( t_{k_i} + gamma_i + sqrt(-1) [0, pi] ),
// with base points gamma constrained per leg r (writing i(s; r) for the
// position of the s-th variable attached to leg r):
//   |Re gamma_i| < Re(ell_{k_i} eta),
//   Re gamma_{i(s+1;r)} <= Re gamma_{i(s;r)},
//   Re gamma_{i(s+1;r)} + Re eta < Re gamma_{i(s;r)}.

#include <span>
#include <string>
#include <vector>

#include "weightfn.hpp"
#include "weightspace.hpp"

namespace bqkz {

struct DomainCheck {
  MultiIndex k;
  bool ok = false;
  std::vector<double> margins;  // one slack per leg r = 1..N
};

// Re(ell_r eta) > max(0, (n_k(r) - 1)/2 Re(eta)) for every r.
inline DomainCheck in_domain(const Params& p, const MultiIndex& k) {
  DomainCheck dc{k, true, {}};
  for (int r = 1; r <= p.N(); ++r) {
    const double lhs = (p.ell[r - 1] * p.eta).real();
    const double bound = std::max(0.0, 0.5 * (occupation(k, r) - 1) * p.eta.real());
    dc.margins.push_back(lhs - bound);
    if (!(lhs - bound > 0.0)) dc.ok = false;
  }
  return dc;
}

inline bool in_domain_all(const Params& p) {
  for (const MultiIndex& k : enumerate_multi_indices(p.M, p.N()))
    if (!in_domain(p, k).ok) return false;
  return true;
}

struct ContourSpec {
  MultiIndex k;
  std::vector<Complex> gamma;  // purely real by construction

  // segment bases t_{k_i} + gamma_i (each extends vertically by i pi)
  std::vector<Complex> anchors(std::span<const Complex> t) const {
    std::vector<Complex> a(gamma.size());
    for (size_t i = 0; i < gamma.size(); ++i) a[i] = t[k[i] - 1] + gamma[i];
    return a;
  }
};

// Deterministic base points: within each leg r the n = n_k(r) points are
// equally spaced with gap max(Re eta, 0) + delta, delta = slack/(n+1),
// centered at zero, descending in s. With tau_strict the tighter margins
// |Re gamma| < Re(ell eta + tau) and gap > Re(eta - tau) are used instead.
// delta_scale and center_scale perturb the construction within the admissible
// set (used to exercise contour independence).
inline ContourSpec find_gamma(const Params& p, const MultiIndex& k, bool tau_strict = false,
                              double delta_scale = 1.0, double center_scale = 0.0) {
  const int M = static_cast<int>(k.size());
  ContourSpec cs{k, std::vector<Complex>(M, 0.0)};
  for (int r = 1; r <= p.N(); ++r) {
    const int n = occupation(k, r);
    if (n == 0) continue;
    const double half_width = tau_strict
                                  ? (p.ell[r - 1] * p.eta + p.base.tau).real()
                                  : (p.ell[r - 1] * p.eta).real();
    const double gap0 = std::max(tau_strict ? (p.eta - p.base.tau).real() : p.eta.real(), 0.0);
    const double slack = half_width - 0.5 * (n - 1) * gap0;
    if (!(slack > 0.0))
      throw Infeasible("find_gamma: leg " + std::to_string(r) +
                       " cannot fit " + std::to_string(n) +
                       " separated base points inside |Re gamma| < " +
                       std::to_string(half_width));
    const double delta = slack / (n + 1) * delta_scale;
    const double gap = gap0 + delta;
    const double center = center_scale * 0.5 * slack / (n + 1);
    for (int s = 1; s <= n; ++s) {
      const int i = position_index(k, s, r);
      cs.gamma[i - 1] = center + 0.5 * (n + 1 - 2 * s) * gap;
    }
  }
  // paranoia: re-assert every printed constraint
  for (int i = 1; i <= M; ++i) {
    const double g = cs.gamma[i - 1].real();
    const double lim = tau_strict ? (p.ell[k[i - 1] - 1] * p.eta + p.base.tau).real()
                                  : (p.ell[k[i - 1] - 1] * p.eta).real();
    if (!(std::abs(g) < lim)) throw Infeasible("find_gamma: width constraint violated");
  }
  for (int r = 1; r <= p.N(); ++r) {
    const int n = occupation(k, r);
    for (int s = 1; s < n; ++s) {
      const double hi = cs.gamma[position_index(k, s, r) - 1].real();
      const double lo = cs.gamma[position_index(k, s + 1, r) - 1].real();
      if (!(lo <= hi) || !(lo + p.eta.real() < hi))
        throw Infeasible("find_gamma: separation constraint violated");
      if (tau_strict && !(lo + (p.eta - p.base.tau).real() < hi))
        throw Infeasible("find_gamma: tau-strict separation constraint violated");
    }
  }
  return cs;
}

enum class SectorVariant { base, tilde, tilde_tau };

struct SectorCheck {
  bool ok = true;
  std::vector<double> slacks;
  std::vector<std::string> names;

  void add(const std::string& name, double slack) {
    names.push_back(name);
    slacks.push_back(slack);
    if (!(slack > 0.0)) ok = false;
  }
};

// Membership of t in the nested sectors: ordered real parts (base), the
// holomorphy sector with gaps 2 Lambda_+ + max(Re eta, 0) (tilde), or the
// subsector shifted by -Re tau where t and t + tau e_r live in the tilde
// sector simultaneously (tilde_tau).
inline SectorCheck in_sector(const Params& p, std::span<const Complex> t, SectorVariant v) {
  SectorCheck sc;
  const int N = p.N();
  double lambda_plus = 0.0;
  for (int s = 1; s <= N; ++s)
    lambda_plus = std::max(lambda_plus, (p.ell[s - 1] * p.eta).real());
  const double shift = (v == SectorVariant::tilde_tau) ? -p.base.tau.real() : 0.0;
  for (int s = 1; s < N; ++s) {
    const double gap = (t[s - 1] - t[s]).real();
    if (v == SectorVariant::base)
      sc.add("Re(t_" + std::to_string(s) + " - t_" + std::to_string(s + 1) + ") > 0", gap);
    else
      sc.add("Re(t_" + std::to_string(s) + " - t_" + std::to_string(s + 1) + ") gap",
             gap - (2.0 * lambda_plus + std::max(p.eta.real(), 0.0)) - shift);
  }
  if (v == SectorVariant::base) {
    sc.add("Re(t_N) > 0", t[N - 1].real());
  } else {
    const double floor_term =
        std::max({0.5 * p.eta.real(), 0.0, (-p.xi_tilde_plus()).real(),
                  (-p.xi_tilde_minus()).real()});
    sc.add("Re(t_N) floor", t[N - 1].real() - lambda_plus - floor_term - shift);
  }
  return sc;
}

// Step-size smallness conditions tying -Re(tau) to the weights; needed by the
// contour-shift argument behind the difference equations.
inline SectorCheck tau_step_condition(const Params& p, const MultiIndex& k) {
  SectorCheck sc;
  const double mt = -p.base.tau.real();
  for (int r = 1; r <= p.N(); ++r) {
    sc.add("-Re(tau) <= Re(ell_" + std::to_string(r) + " eta)",
           (p.ell[r - 1] * p.eta).real() - mt);
    const int n = occupation(k, r);
    sc.add("-Re(tau) < Re((2 ell_" + std::to_string(r) + " + 1 - n) eta)/(n+1)",
           ((2.0 * p.ell[r - 1] + 1.0 - static_cast<double>(n)) * p.eta).real() /
                   (n + 1) - mt);
  }
  return sc;
}

struct PoleSets {
  std::vector<Complex> plus;   // anchors of pole sequences marching right
  std::vector<Complex> minus;  // anchors of pole sequences marching left
};

// Anchors of the pole sequences of the integrand in the variable x_j (other
// variables held at xs). The full pole set is (plus - tau Z_{>=0}) union
// (minus + tau Z_{>=0}), modulo pi sqrt(-1) Z.
inline PoleSets pole_sets(const Params& p, const MultiIndex& k, int j,
                          std::span<const Complex> t, std::span<const Complex> xs) {
  const int M = static_cast<int>(k.size());
  if (j < 1 || j > M) throw OutOfRange("pole_sets: j outside 1..M");
  PoleSets ps;
  const int kj = k[j - 1];
  for (int s = 1; s <= kj; ++s) ps.plus.push_back(t[s - 1] + p.ell[s - 1] * p.eta);
  for (int i = 1; i < j; ++i) ps.plus.push_back(xs[i - 1] - p.eta);
  for (int s = kj; s <= p.N(); ++s) ps.minus.push_back(t[s - 1] - p.ell[s - 1] * p.eta);
  for (int s = 1; s <= p.N(); ++s) ps.minus.push_back(-t[s - 1] - p.ell[s - 1] * p.eta);
  ps.minus.push_back(-p.xi_tilde_plus());
  ps.minus.push_back(-p.xi_tilde_minus());
  for (int i = j + 1; i <= M; ++i) ps.minus.push_back(xs[i - 1] + p.eta);
  for (int i = 1; i <= M; ++i)
    if (i != j) ps.minus.push_back(-xs[i - 1] + p.eta);
  return ps;
}

// True when every right-marching anchor lies strictly right of segment j and
// every left-marching anchor strictly left, for all j.
inline bool contour_separates(const Params& p, const ContourSpec& cs,
                              std::span<const Complex> t,
                              std::vector<std::string>* violations = nullptr) {
  const int M = static_cast<int>(cs.k.size());
  const std::vector<Complex> anchors = cs.anchors(t);
  bool ok = true;
  for (int j = 1; j <= M; ++j) {
    const double re_j = anchors[j - 1].real();
    const PoleSets ps = pole_sets(p, cs.k, j, t, anchors);
    for (const Complex& z : ps.plus)
      if (!(z.real() > re_j)) {
        ok = false;
        if (violations)
          violations->push_back("P+ anchor not right of segment " + std::to_string(j));
      }
    for (const Complex& z : ps.minus)
      if (!(z.real() < re_j)) {
        ok = false;
        if (violations)
          violations->push_back("P- anchor not left of segment " + std::to_string(j));
      }
  }
  return ok;
}

}  // namespace bqkz
