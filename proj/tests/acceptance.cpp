// Acceptance suite: one line per criterion, exit 0 iff everything passes.
//
// Each criterion exercises the library end to end at desk scale (M <= 3,
// N <= 3, |q| <= 0.7) with its tolerance pinned in code.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bqkz/bqkz.hpp"

using namespace bqkz;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, double worst, double tol,
            const std::string& note = "") {
  std::printf("%s criterion %2d: %-38s (worst %.3e, tol %.1e)%s%s\n",
              pass ? "PASS" : "FAIL", id, name.c_str(), worst, tol,
              note.empty() ? "" : "  ", note.c_str());
  if (!pass) ++g_failures;
}

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(uint64_t seed) : rng(seed) {}
  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  Complex ell() { return {uni(0.7, 1.7), uni(-0.06, 0.06)}; }
  Complex eta() { return {uni(0.38, 0.66), uni(-0.06, 0.06)}; }
  Complex x() { return {uni(-1.1, 1.1), uni(-1.4, 1.4)}; }
  Complex xi() { return {uni(0.3, 0.8), uni(-0.1, 0.1)}; }
  Complex tau() { return {uni(-0.6, -0.38), uni(-0.1, 0.1)}; }

  Params params(int M, int N) {
    std::vector<Complex> ells;
    for (int s = 0; s < N; ++s) ells.push_back(ell());
    return Params(tau(), eta(), xi(), xi(), ells, M);
  }

  std::vector<Complex> sector_t(const Params& p, double margin) {
    const int N = p.N();
    double lam = 0.0;
    for (int s = 1; s <= N; ++s) lam = std::max(lam, (p.ell[s - 1] * p.eta).real());
    const double gap = 2.0 * lam + std::max(p.eta.real(), 0.0) - p.base.tau.real() + margin;
    const double floor_term =
        lam + std::max({0.5 * p.eta.real(), 0.0, (-p.xi_tilde_plus()).real(),
                        (-p.xi_tilde_minus()).real()}) -
        p.base.tau.real() + margin;
    std::vector<Complex> t(N);
    double re = floor_term + gap * (N - 1);
    for (int s = 0; s < N; ++s) {
      t[s] = Complex(re + uni(0.0, 0.3), uni(-0.2, 0.2));
      re -= gap;
    }
    return t;
  }
};

// ---------------------------------------------------------------------------
// criterion 1: algebraic identities of the R-, K- and L-operators

double rtrt_residual(const Params& p, Complex x, Complex y,
                     std::span<const Complex> t) {
  const TensorSpace chain = chain_space(p);
  const TensorSpace cs = combined_space(p);
  const int cd = chain.dim();
  auto entries_of = [&](Complex z) {
    Matrix m = sklyanin_monodromy(p, z, t);
    std::vector<Matrix> ent(4, Matrix(cd, cd));
    std::vector<int> tup(p.N() + 1);
    for (int a_out = 0; a_out < 2; ++a_out)
      for (int a_in = 0; a_in < 2; ++a_in)
        for (int i = 0; i < cd; ++i)
          for (int j = 0; j < cd; ++j) {
            tup[0] = a_out;
            for (int s = 0; s < p.N(); ++s) tup[s + 1] = chain.state(i)[s];
            const int r = cs.index_of(tup);
            tup[0] = a_in;
            for (int s = 0; s < p.N(); ++s) tup[s + 1] = chain.state(j)[s];
            const int c = cs.index_of(tup);
            if (r >= 0 && c >= 0) ent[a_out * 2 + a_in](i, j) = m(r, c);
          }
    return ent;
  };
  auto embed_entries = [&](const std::vector<Matrix>& ent, bool first_aux) {
    Matrix big(4 * cd, 4 * cd);
    for (int a_out = 0; a_out < 2; ++a_out)
      for (int a_in = 0; a_in < 2; ++a_in)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < cd; ++i)
            for (int j = 0; j < cd; ++j) {
              const int row = first_aux ? (a_out * 2 + b) * cd + i : (b * 2 + a_out) * cd + i;
              const int col = first_aux ? (a_in * 2 + b) * cd + j : (b * 2 + a_in) * cd + j;
              big(row, col) += ent[a_out * 2 + a_in](i, j);
            }
    return big;
  };
  auto raux = [&](Complex z) {
    PairOperator r = rbar_spinhalf(p.eta, z);
    Matrix big(4 * cd, 4 * cd);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int ap = 0; ap < 2; ++ap) {
          const int bp = a + b - ap;
          if (bp < 0 || bp > 1) continue;
          const Complex v = r.entry(a, ap, a + b);
          if (v == 0.0) continue;
          for (int i = 0; i < cd; ++i)
            big((a * 2 + b) * cd + i, (ap * 2 + bp) * cd + i) += v;
        }
    return big;
  };
  Matrix t0 = embed_entries(entries_of(x), true);
  Matrix t0p = embed_entries(entries_of(y), false);
  Matrix rxy = raux(x - y), rxpy = raux(x + y);
  Matrix mask(4 * cd, 4 * cd);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < cd; ++i)
        if (a + b + chain.weight(i) <= p.M)
          mask((a * 2 + b) * cd + i, (a * 2 + b) * cd + i) = 1.0;
  return rel_diff(rxy * t0 * rxpy * t0p * mask, t0p * rxpy * t0 * rxy * mask);
}

void criterion_algebra() {
  Draw d(1001);
  double worst = 0.0;
  const double tol = 1e-10;
  for (int trial = 0; trial < 20; ++trial) {
    const Complex eta = d.eta();
    const Complex l1 = d.ell(), l2 = d.ell(), l3 = d.ell();
    const Complex x = d.x(), y = d.x();
    const Complex xi = d.xi();
    const int M = 3;

    // Yang-Baxter
    TensorSpace sp3 = TensorSpace::verma(3, M);
    Matrix r12 = embed_pair(sp3, 0, 1, solve_R(l1, l2, eta, x, M));
    Matrix r13 = embed_pair(sp3, 0, 2, solve_R(l1, l3, eta, x + y, M));
    Matrix r23 = embed_pair(sp3, 1, 2, solve_R(l2, l3, eta, y, M));
    worst = std::max(worst, rel_diff(r12 * r13 * r23, r23 * r13 * r12));

    // reflection equation with the diagonal K on both legs
    TensorSpace sp2 = TensorSpace::verma(2, M);
    Matrix rxy = embed_pair(sp2, 0, 1, solve_R(l1, l2, eta, x - y, M));
    Matrix rxpy = embed_pair(sp2, 0, 1, solve_R(l1, l2, eta, x + y, M));
    Matrix k1 = embed_diag(sp2, 0, k_diag(l1, eta, x, xi, M));
    Matrix k2 = embed_diag(sp2, 1, k_diag(l2, eta, y, xi, M));
    worst = std::max(worst, rel_diff(rxy * k1 * rxpy * k2, k2 * rxpy * k1 * rxy));

    // unitarity
    PairOperator r = solve_R(l1, l2, eta, x, M);
    PairOperator rinv = r_inverse(l1, l2, eta, x, M);
    for (int w = 0; w <= M; ++w)
      worst = std::max(worst,
                       rel_diff(rinv.blocks[w] * r.blocks[w], Matrix::identity(w + 1)));

    // P-symmetry
    PairOperator conj = flip_conjugate(solve_R(l2, l1, eta, x, M));
    for (int w = 0; w <= M; ++w)
      worst = std::max(worst, rel_diff(conj.blocks[w], r.blocks[w]));

    // RLL
    TensorSpace spl({1, 1, M + 2}, M + 2);
    Matrix rb = embed_pair(spl, 0, 1, rbar_spinhalf(eta, x - y));
    Matrix lx = embed_pair(spl, 0, 2, l_op(l1, eta, x, M + 2));
    Matrix ly = embed_pair(spl, 1, 2, l_op(l1, eta, y, M + 2));
    worst = std::max(worst, rel_diff(rb * lx * ly, ly * lx * rb));

    // crossing symmetry
    {
      const int D = 3;
      TensorSpace flat({1, D}, 1 + D);
      Matrix lmat = embed_pair(flat, 0, 1, l_op(l1, eta, x, 1 + D));
      Matrix lneg = embed_pair(flat, 0, 1, l_op(l1, eta, -x - eta, 1 + D));
      Matrix tpose(flat.dim(), flat.dim()), sy(flat.dim(), flat.dim());
      for (int i = 0; i < flat.dim(); ++i) {
        const auto& di = flat.state(i);
        for (int j = 0; j < flat.dim(); ++j) {
          const auto& dj = flat.state(j);
          std::vector<int> row = {dj[0], di[1]}, col = {di[0], dj[1]};
          const int ri = flat.index_of(row), ci = flat.index_of(col);
          if (ri >= 0 && ci >= 0) tpose(i, j) = lneg(ri, ci);
        }
        std::vector<int> flip = {1 - di[0], di[1]};
        const int fi = flat.index_of(flip);
        if (fi >= 0) sy(fi, i) = (di[0] == 0) ? I_UNIT : -I_UNIT;
      }
      const Complex pref = std::sinh(x + (0.5 - l1) * eta) / std::sinh(x + (0.5 + l1) * eta);
      worst = std::max(worst, rel_diff(lmat, pref * (sy * tpose * sy)));
    }

    // boundary reflection relation for the Sklyanin monodromy
    {
      std::vector<Complex> ells = {l1, l2};
      Params p(d.tau(), eta, xi, d.xi(), ells, 3);
      std::vector<Complex> t = {Complex(d.uni(6.0, 7.0), d.uni(-0.3, 0.3)),
                                Complex(d.uni(2.2, 3.0), d.uni(-0.3, 0.3))};
      worst = std::max(worst, rtrt_residual(p, d.x(), d.x(), t));
    }
  }
  report(1, "algebraic identities (20 draws)", worst < tol, worst, tol);
}

// ---------------------------------------------------------------------------
// criterion 2: spin-half closed form

void criterion_spinhalf() {
  Draw d(1002);
  double worst = 0.0;
  const double tol = 1e-12;
  int done = 0;
  while (done < 50) {
    const Complex eta = d.eta(), x = d.x();
    if (std::abs(std::sinh(x + eta)) < 5e-2) continue;
    PairOperator full = solve_R(0.5, 0.5, eta, x, 3);
    PairOperator got =
        flip_conjugate(quotient_leg1(flip_conjugate(quotient_leg1(full, 1)), 1));
    PairOperator expect = rbar_spinhalf(eta, x);
    for (int w = 0; w <= 2; ++w) {
      const Matrix diff = got.blocks[w] - expect.blocks[w];
      worst = std::max(worst, diff.max_abs());
    }
    ++done;
  }
  report(2, "spin-half closed form (50 points)", worst < tol, worst, tol);
}

// ---------------------------------------------------------------------------
// criterion 3: Bethe-vector decompositions

void criterion_bethe() {
  Draw d(1003);
  double worst = 0.0;
  const double tol = 1e-10;
  for (int trial = 0; trial < 10; ++trial) {
    for (int M = 0; M <= 3; ++M)
      for (int N = 1; N <= 3; ++N) {
        Params p = d.params(M, N);
        std::vector<Complex> t(N);
        double re = d.uni(3.0, 4.0) + 2.2 * N;
        for (int s = 0; s < N; ++s) {
          t[s] = Complex(re, d.uni(-0.4, 0.4));
          re -= d.uni(2.0, 2.8);
        }
        std::vector<Complex> xs(M);
        for (int i = 0; i < M; ++i) xs[i] = d.x();

        worst = std::max(worst, rel_diff(bethe_vector(p, xs, t),
                                         bethe_vector_closed_form(p, xs, t)));

        for (const auto& k : enumerate_multi_indices(M, N)) {
          const Composition dd = zeta(k, N);
          const Complex rec = type_a_coeff(p, dd, xs, t, TypeAMethod::recursion);
          const Complex cf = type_a_coeff(p, dd, xs, t, TypeAMethod::closed_form);
          worst = std::max(worst,
                           std::abs(rec - cf) / std::max({std::abs(rec), std::abs(cf), 1e-30}));
        }
      }
  }
  report(3, "Bethe decompositions (10 draws)", worst < tol, worst, tol);
}

// ---------------------------------------------------------------------------
// criterion 4: functional equations of the scalar factors

void criterion_weightfn() {
  Draw d(1004);
  double worst_fe = 0.0, worst_dual = 0.0;
  const double tol_fe = 1e-10, tol_dual = 1e-11;
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + trial % 3;
    const int M = 1 + trial % 3;
    Params p = d.params(M, N);
    const Complex tau = p.base.tau, eta = p.eta, q = p.base.q;
    std::vector<Complex> t(N);
    double re = d.uni(3.0, 4.0) + 2.2 * N;
    for (int s = 0; s < N; ++s) {
      t[s] = Complex(re, d.uni(-0.4, 0.4));
      re -= d.uni(2.0, 2.8);
    }
    const Complex x = d.x();
    const int r = 1 + trial % N;
    auto rel = [](Complex got, Complex want) {
      return std::abs(got - want) / std::max(std::abs(want), 1e-30);
    };

    {  // F, t-shift
      auto ts = t;
      ts[r - 1] += tau;
      Complex target = std::exp(4.0 * p.ell[r - 1] * eta);
      for (const double sgn : {1.0, -1.0})
        target *= std::sinh(t[r - 1] + sgn * x - p.ell[r - 1] * eta + tau) /
                  std::sinh(t[r - 1] + sgn * x + p.ell[r - 1] * eta + tau);
      worst_fe = std::max(worst_fe, rel(F_factor(p, x, ts) / F_factor(p, x, t), target));
    }
    {  // F, x-shift
      Complex target = 1.0;
      for (int s = 1; s <= N; ++s)
        target *= std::sinh(t[s - 1] - x - p.ell[s - 1] * eta + tau) /
                  std::sinh(t[s - 1] - x + p.ell[s - 1] * eta + tau) *
                  std::sinh(t[s - 1] + x + p.ell[s - 1] * eta) /
                  std::sinh(t[s - 1] + x - p.ell[s - 1] * eta);
      worst_fe = std::max(worst_fe, rel(F_factor(p, x - tau, t) / F_factor(p, x, t), target));
    }
    {  // g
      const Complex xp = p.xi_tilde_plus(), xm = p.xi_tilde_minus();
      const Complex target = std::exp(-2.0 * (xp + xm)) / (q * q) *
                             std::sinh(x + xp) / std::sinh(x - xp - tau) *
                             std::sinh(x + xm) / std::sinh(x - xm - tau);
      worst_fe = std::max(worst_fe, rel(g_factor(p, x - tau) / g_factor(p, x), target));
    }
    {  // h
      const Complex target = std::exp(2.0 * eta) * std::sinh(x - tau) / std::sinh(x) *
                             std::sinh(x - eta) / std::sinh(x + eta - tau);
      worst_fe = std::max(worst_fe, rel(h_factor(p, x - tau) / h_factor(p, x), target));
    }
    const auto ks = enumerate_multi_indices(M, N);
    const MultiIndex k = ks[trial % ks.size()];
    const int i = 1 + trial % M;
    {  // u, x-shift and t-shift
      const Complex u0 = u_factor(p, k, i, x, t);
      const Complex xtarget = q * q *
                              std::exp(2.0 * (p.xi_tilde_plus() + p.xi_tilde_minus()) -
                                       4.0 * static_cast<double>(M - i) * eta);
      worst_fe = std::max(worst_fe, rel(u_factor(p, k, i, x - tau, t) / u0, xtarget));
      auto ts = t;
      ts[r - 1] += tau;
      Complex target;
      if (r < k[i - 1]) {
        target = 1.0;
      } else if (r == k[i - 1]) {
        Complex sum_gt = 0.0;
        for (int s = k[i - 1] + 1; s <= N; ++s) sum_gt += p.ell[s - 1];
        target = std::exp(2.0 * (p.xi_plus + p.xi_minus - eta) +
                          4.0 * (sum_gt - static_cast<double>(M) + static_cast<double>(i)) *
                              eta);
      } else {
        target = std::exp(-4.0 * p.ell[r - 1] * eta);
      }
      worst_fe = std::max(worst_fe, rel(u_factor(p, k, i, x, ts) / u0, target));
    }
    {  // the two shift equations of w itself
      std::vector<Complex> xs(M);
      for (int ii = 0; ii < M; ++ii) xs[ii] = d.x();
      auto [rt, rx] = w_shift_residuals(p, k, xs, t, r, 1 + trial % M);
      worst_fe = std::max({worst_fe, std::abs(rt), std::abs(rx)});
      // dual-route agreement
      const Complex a = weight_w(p, k, xs, t, WRoute::definition);
      const Complex b = weight_w(p, k, xs, t, WRoute::expanded);
      worst_dual = std::max(worst_dual, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
  }
  report(4, "weight-function equations (50 points)",
         worst_fe < tol_fe && worst_dual < tol_dual, std::max(worst_fe, worst_dual),
         tol_fe, "dual-route tol 1e-11");
}

// ---------------------------------------------------------------------------
// criterion 5: leading-coefficient integral identity

void criterion_integral_identity() {
  Draw d(1005);
  double worst = 0.0;
  const double tol = 1e-8;
  QuadratureSettings qs;
  qs.rel_tol = 5e-10;
  qs.max_n = 2048;
  for (int trial = 0; trial < 10; ++trial) {
    // draws kept inside the range where double-precision quadrature resolves
    // the 1e-8 gate: the integrand-to-value dynamic range grows like
    // e^{2 Re omega}, so the boundary parameters stay moderate here
    std::vector<Complex> ells = {{d.uni(0.7, 1.3), d.uni(-0.05, 0.05)},
                                 {d.uni(0.7, 1.3), d.uni(-0.05, 0.05)}};
    Params p(d.tau(), {d.uni(0.38, 0.58), d.uni(-0.05, 0.05)},
             {d.uni(0.25, 0.55), d.uni(-0.08, 0.08)},
             {d.uni(0.25, 0.55), d.uni(-0.08, 0.08)}, ells, 2);
    if (!in_domain_all(p)) continue;
    // per-leg factors with occupations 1 and 2
    for (const auto& k : enumerate_multi_indices(2, 2))
      for (int r = 1; r <= 2; ++r) {
        if (occupation(k, r) == 0) continue;
        const Complex mr = mu_r(p, k, r, qs).value;
        const Complex nr = nu_r_factor(p, k, r);
        worst = std::max(worst, std::abs(mr - nr) / std::abs(nr));
      }
    // full integral for M <= 2
    for (int M : {1, 2}) {
      Params pm(p.base.tau, p.eta, p.xi_plus, p.xi_minus, p.ell, M);
      for (const auto& k : enumerate_multi_indices(M, 2)) {
        const Complex mk = mu_full(pm, k, qs).value;
        const Complex nk = nu_leading(pm, k);
        worst = std::max(worst, std::abs(mk - nk) / std::abs(nk));
      }
    }
  }
  report(5, "integral = closed leading coefficient", worst < tol, worst, tol);
}

// ---------------------------------------------------------------------------
// criterion 6: the boundary difference equations

void criterion_qkz() {
  Draw d(1006);
  double worst = 0.0;
  const double tol = 1e-6;
  QuadratureSettings qs;
  qs.n_per_dim = 128;
  qs.refine = false;
  const std::vector<std::pair<int, int>> shapes = {{1, 1}, {1, 2}, {2, 2}};
  for (const auto& [M, N] : shapes) {
    std::vector<Complex> ell;
    for (int s = 0; s < N; ++s) ell.emplace_back(1.6 + 0.2 * s, 0.02 - 0.05 * s);
    Params p(Complex(-0.40, 0.07), Complex(0.62, 0.04), Complex(0.5, -0.08),
             Complex(0.44, 0.06), ell, M);
    for (const auto& k : enumerate_multi_indices(M, N)) {
      if (!tau_step_condition(p, k).ok) {
        report(6, "boundary difference equations", false, 1.0, tol,
               "step-size condition violated");
        return;
      }
    }
    for (int point = 0; point < 3; ++point) {
      std::vector<Complex> t = d.sector_t(p, 0.25 + 0.6 * point);
      if (!in_sector(p, t, SectorVariant::tilde_tau).ok) continue;
      for (const auto& k : enumerate_multi_indices(M, N))
        for (int r = 1; r <= N; ++r)
          worst = std::max(worst, qkz_residual(p, k, t, r, qs));
    }
  }
  report(6, "boundary difference equations", worst < tol, worst, tol,
         "(1,1),(1,2),(2,2), 3 points, n=128");
}

// ---------------------------------------------------------------------------
// criterion 7: asymptotic expansion along a ray

void criterion_asymptotics() {
  double worst_coeff = 0.0;
  const double tol = 1e-4;
  bool all_monotone = true;
  QuadratureSettings qs;
  qs.rel_tol = 1e-10;
  qs.max_n = 512;
  const std::vector<std::pair<int, int>> shapes = {{1, 1}, {1, 2}, {2, 2}};
  const std::vector<double> depths = {0.0, 2.0, 4.0, 6.0, 8.0};
  for (const auto& [M, N] : shapes) {
    std::vector<Complex> ell;
    for (int s = 0; s < N; ++s) ell.emplace_back(1.6 + 0.2 * s, 0.02 - 0.05 * s);
    Params p(Complex(-0.40, 0.07), Complex(0.62, 0.04), Complex(0.5, -0.08),
             Complex(0.44, 0.06), ell, M);
    std::vector<Complex> t0(N), dir(N);
    for (int s = 0; s < N; ++s) {
      t0[s] = Complex(2.6 + 3.7 * (N - 1 - s), 0.2 - 0.15 * s);
      dir[s] = Complex(1.0 + 0.5 * (N - 1 - s), 0.0);
    }
    for (const auto& k : enumerate_multi_indices(M, N)) {
      AsymptoticsReport rep = asymptotic_leading(p, k, t0, dir, depths, qs);
      if (!rep.monotone) all_monotone = false;
      const Complex coeff = rep.omega_k_coeff.back();
      worst_coeff = std::max(worst_coeff, std::abs(coeff - rep.nu) / std::abs(rep.nu));
    }
  }
  report(7, "asymptotic leading coefficient", all_monotone && worst_coeff < tol,
         worst_coeff, tol, all_monotone ? "decay monotone over 4 steps" : "NOT monotone");
}

// ---------------------------------------------------------------------------
// criterion 8: completeness at one point

void criterion_completeness() {
  Params p(Complex(-0.40, 0.07), Complex(0.5, 0.04), Complex(0.3, -0.08),
           Complex(0.26, 0.06), {Complex(1.05, 0.02), Complex(1.15, -0.03)}, 2);
  QuadratureSettings qs;
  qs.rel_tol = 1e-9;
  qs.max_n = 256;
  std::vector<Complex> t = {Complex(5.3, 0.15), Complex(1.9, -0.1)};
  CompletenessReport rep = completeness_matrix(p, t, qs);
  const bool pass = std::abs(rep.det) > 0.0 && rep.cond1 < 1e6;
  char note[64];
  std::snprintf(note, sizeof note, "|det| = %.3e", std::abs(rep.det));
  report(8, "completeness of the solution matrix", pass, rep.cond1, 1e6, note);
}

// ---------------------------------------------------------------------------
// criterion 9: finite-dimensional projection

void criterion_finite_dim() {
  Params p(Complex(-0.40, 0.07), Complex(0.9, 0.05), Complex(0.5, -0.08),
           Complex(0.44, 0.06), {Complex(0.5, 0.0), Complex(0.5, 0.0)}, 1);
  QuadratureSettings qs;
  qs.n_per_dim = 128;
  qs.refine = false;
  std::vector<Complex> t = {Complex(4.8, 0.2), Complex(1.9, -0.1)};
  double worst_res = 0.0;
  bool gamma_zero = true;
  for (const auto& k : enumerate_multi_indices(1, 2)) {
    ContourSpec cs = find_gamma(p, k);
    for (const Complex& g : cs.gamma)
      if (g != Complex(0.0)) gamma_zero = false;
    for (int r = 1; r <= 2; ++r)
      worst_res = std::max(worst_res, projected_qkz_residual(p, k, t, r, qs));
  }
  // commutation of projection and transport
  Params p2(Complex(-0.40, 0.07), Complex(0.62, 0.04), Complex(0.5, -0.08),
            Complex(0.44, 0.06), {Complex(0.5, 0.0), Complex(1.0, 0.0)}, 2);
  std::vector<Complex> t2 = {Complex(6.3, 0.2), Complex(2.3, -0.15)};
  const TensorSpace full = chain_space(p2);
  const TensorSpace proj = projected_space(p2);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_comm = 0.0;
  for (int r = 1; r <= 2; ++r) {
    Matrix a = transport(p2, r, t2);
    Matrix abar = projected_transport(p2, r, t2);
    std::vector<Complex> v(full.dim());
    for (auto& c : v) c = Complex(u(rng), u(rng));
    std::vector<Complex> av = a.apply(v);
    std::vector<Complex> pr_av(proj.dim(), 0.0), pr_v(proj.dim(), 0.0);
    for (int i = 0; i < full.dim(); ++i) {
      const int j = proj.index_of(full.state(i));
      if (j >= 0) {
        pr_av[j] = av[i];
        pr_v[j] = v[i];
      }
    }
    std::vector<Complex> bar = abar.apply(pr_v);
    double dev = 0.0, scale = 0.0;
    for (int j = 0; j < proj.dim(); ++j) {
      dev = std::max(dev, std::abs(pr_av[j] - bar[j]));
      scale = std::max(scale, std::abs(pr_av[j]));
    }
    worst_comm = std::max(worst_comm, dev / scale);
  }
  const bool pass = gamma_zero && worst_res < 1e-6 && worst_comm < 1e-12;
  report(9, "finite-dimensional projection", pass, worst_res, 1e-6,
         "commutation " + std::to_string(worst_comm));
}

// ---------------------------------------------------------------------------
// criterion 10: limits at infinity

void criterion_limits() {
  Draw d(1010);
  const Complex eta = d.eta(), l1 = d.ell(), l2 = d.ell();
  bool monotone = true;
  // R(x) -> R_inf along a deepening ray
  PairOperator rinf = r_infinity(l1, l2, eta, 3);
  double prev = 1e100;
  for (double re : {4.0, 6.0, 8.0, 10.0}) {
    PairOperator r = solve_R(l1, l2, eta, Complex(re, 0.3), 3);
    double dev = 0.0;
    for (int w = 0; w <= 3; ++w)
      dev = std::max(dev, (r.blocks[w] - rinf.blocks[w]).max_abs());
    if (!(dev < prev)) monotone = false;
    prev = dev;
  }
  // A_r(t) -> diag(varphi) along a deepening ray
  std::vector<Complex> ell = {Complex(1.6, 0.02), Complex(1.8, -0.03)};
  Params p(Complex(-0.40, 0.07), Complex(0.62, 0.04), Complex(0.5, -0.08),
           Complex(0.44, 0.06), ell, 2);
  for (int r = 1; r <= 2; ++r) {
    Matrix limit = asymptotic_transport(p, r);
    prev = 1e100;
    for (double depth : {0.0, 2.0, 4.0, 6.0}) {
      std::vector<Complex> t = {Complex(7.0 + 1.6 * depth, 0.2),
                                Complex(2.6 + 1.0 * depth, -0.15)};
      const double dev = (transport(p, r, t) - limit).max_abs();
      if (!(dev < prev)) monotone = false;
      prev = dev;
    }
  }
  // closed-form eigenvalue match
  double worst_phi = 0.0;
  const TensorSpace chain = chain_space(p);
  for (int r = 1; r <= 2; ++r) {
    Matrix a = asymptotic_transport(p, r);
    for (const auto& k : enumerate_multi_indices(2, 2)) {
      const int idx = chain.index_of(zeta(k, 2));
      const Complex expect = varphi(p, k, r);
      worst_phi = std::max(worst_phi, std::abs(a(idx, idx) - expect) / std::abs(expect));
    }
  }
  report(10, "limits at infinite argument", monotone && worst_phi < 1e-10, worst_phi,
         1e-10, monotone ? "decay monotone" : "NOT monotone");
}

}  // namespace

int main() {
  criterion_algebra();
  criterion_spinhalf();
  criterion_bethe();
  criterion_weightfn();
  criterion_integral_identity();
  criterion_qkz();
  criterion_asymptotics();
  criterion_completeness();
  criterion_finite_dim();
  criterion_limits();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
