// Command-line front end: configuration files, verification suites, solution
// records, depth sweeps, and operator/contour dumps.
//
//   bqkz verify  --config cfg.json --suite all [--out report.json]
//   bqkz solve   --config cfg.json --k 1,2 [--t-index 0] [--out psi.json]
//   bqkz sweep   --config cfg.json --k 1 [--out sweep.csv]
//   bqkz dump-operator --config cfg.json --kind R|K|L|transport ...
//   bqkz dump-contour  --config cfg.json --k 1,2 [--t-index 0]
//
// Exit codes: 0 all checks passed / output written, 1 some check failed,
// 2 configuration or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bqkz/bqkz.hpp"

using namespace bqkz;
using json = nlohmann::ordered_json;

namespace {

Complex to_complex(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json from_complex(Complex z) { return json::array({z.real(), z.imag()}); }

struct RunConfig {
  Params params;
  QuadratureSettings quad;
  std::vector<std::vector<Complex>> t_points;
  std::vector<Complex> ray_base, ray_direction;
  std::vector<double> ray_depths;
  uint64_t seed = 1;

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
  }

  static RunConfig from_json(const json& j) {
    try {
      const json& jp = j.at("params");
      std::vector<Complex> ell;
      for (const auto& l : jp.at("ell")) ell.push_back(to_complex(l));
      Params params(to_complex(jp.at("tau")), to_complex(jp.at("eta")),
                    to_complex(jp.at("xi_plus")), to_complex(jp.at("xi_minus")),
                    std::move(ell), jp.at("M").get<int>());
      RunConfig cfg{std::move(params), {}, {}, {}, {}, {}, 1};
      if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        if (q.contains("n_per_dim")) cfg.quad.n_per_dim = q.at("n_per_dim").get<int>();
        if (q.contains("refine")) cfg.quad.refine = q.at("refine").get<bool>();
        if (q.contains("rel_tol")) cfg.quad.rel_tol = q.at("rel_tol").get<double>();
        if (q.contains("max_n")) cfg.quad.max_n = q.at("max_n").get<int>();
        cfg.quad.validate();
      }
      if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("t_points"))
          for (const auto& pt : g.at("t_points")) {
            std::vector<Complex> t;
            for (const auto& z : pt) t.push_back(to_complex(z));
            if (static_cast<int>(t.size()) != cfg.params.N())
              throw ConfigError("grid.t_points entries must have N components");
            cfg.t_points.push_back(std::move(t));
          }
        if (g.contains("ray")) {
          const json& r = g.at("ray");
          for (const auto& z : r.at("base")) cfg.ray_base.push_back(to_complex(z));
          for (const auto& z : r.at("direction"))
            cfg.ray_direction.push_back(to_complex(z));
          for (const auto& v : r.at("depths")) cfg.ray_depths.push_back(v.get<double>());
        }
      }
      if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
      return cfg;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config error: ") + e.what());
    }
  }

  // canonical serialization: parsing this form and re-serializing is
  // bit-identical
  json to_json() const {
    json j;
    json jp;
    jp["tau"] = from_complex(params.base.tau);
    jp["eta"] = from_complex(params.eta);
    jp["xi_plus"] = from_complex(params.xi_plus);
    jp["xi_minus"] = from_complex(params.xi_minus);
    json ells = json::array();
    for (const Complex& l : params.ell) ells.push_back(from_complex(l));
    jp["ell"] = ells;
    jp["M"] = params.M;
    j["params"] = jp;
    j["quadrature"] = {{"n_per_dim", quad.n_per_dim},
                       {"refine", quad.refine},
                       {"rel_tol", quad.rel_tol},
                       {"max_n", quad.max_n}};
    json grid;
    json pts = json::array();
    for (const auto& t : t_points) {
      json pt = json::array();
      for (const Complex& z : t) pt.push_back(from_complex(z));
      pts.push_back(pt);
    }
    grid["t_points"] = pts;
    if (!ray_base.empty()) {
      json ray;
      json base = json::array(), dir = json::array();
      for (const Complex& z : ray_base) base.push_back(from_complex(z));
      for (const Complex& z : ray_direction) dir.push_back(from_complex(z));
      ray["base"] = base;
      ray["direction"] = dir;
      ray["depths"] = ray_depths;
      grid["ray"] = ray;
    }
    j["grid"] = grid;
    j["seed"] = seed;
    return j;
  }
};

MultiIndex parse_multi_index(const std::string& s, const RunConfig& cfg) {
  MultiIndex k;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) k.push_back(std::stoi(item));
  for (size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 1 || k[i] > cfg.params.N() || (i > 0 && k[i] < k[i - 1]))
      throw ConfigError("label must be weakly increasing with entries in 1..N");
  }
  if (static_cast<int>(k.size()) != cfg.params.M)
    throw ConfigError("label must have exactly M entries");
  return k;
}

const std::vector<Complex>& pick_t(const RunConfig& cfg, int index) {
  if (cfg.t_points.empty()) throw ConfigError("config has no grid.t_points");
  if (index < 0 || index >= static_cast<int>(cfg.t_points.size()))
    throw ConfigError("t-index out of range");
  return cfg.t_points[index];
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %.17g", z.real(), z.imag());
  return buf;
}

std::string key_string(const MultiIndex& k) {
  std::string s = "(";
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// verification suites

struct Reporter {
  json rows = json::array();
  bool all_pass = true;

  void add(const std::string& suite, const std::string& check, double residual,
           double tol, const json& extra = json::object()) {
    const bool pass = residual < tol;
    json row;
    row["suite"] = suite;
    row["check"] = check;
    row["residual"] = residual;
    row["tolerance"] = tol;
    row["pass"] = pass;
    if (!extra.empty()) row["detail"] = extra;
    rows.push_back(row);
    if (!pass) all_pass = false;
  }
};

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(uint64_t seed) : rng(seed) {}
  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  Complex point() { return {uni(-1.1, 1.1), uni(-1.4, 1.4)}; }
};

void suite_algebra(const RunConfig& cfg, Reporter& rep) {
  Sampler s(cfg.seed);
  const Params& p = cfg.params;
  const int M = std::max(1, p.M);
  double ybe = 0.0, re = 0.0, uni_r = 0.0, psym = 0.0, rll = 0.0, cross = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex x = s.point(), y = s.point();
    const Complex l1 = p.ell[0], l2 = p.ell[p.N() > 1 ? 1 : 0];
    TensorSpace sp3 = TensorSpace::verma(3, M);
    Matrix r12 = embed_pair(sp3, 0, 1, solve_R(l1, l2, p.eta, x, M));
    Matrix r13 = embed_pair(sp3, 0, 2, solve_R(l1, l1, p.eta, x + y, M));
    Matrix r23 = embed_pair(sp3, 1, 2, solve_R(l2, l1, p.eta, y, M));
    ybe = std::max(ybe, rel_diff(r12 * r13 * r23, r23 * r13 * r12));

    TensorSpace sp2 = TensorSpace::verma(2, M);
    Matrix rxy = embed_pair(sp2, 0, 1, solve_R(l1, l2, p.eta, x - y, M));
    Matrix rxpy = embed_pair(sp2, 0, 1, solve_R(l1, l2, p.eta, x + y, M));
    Matrix k1 = embed_diag(sp2, 0, k_diag(l1, p.eta, x, p.xi_minus, M));
    Matrix k2 = embed_diag(sp2, 1, k_diag(l2, p.eta, y, p.xi_minus, M));
    re = std::max(re, rel_diff(rxy * k1 * rxpy * k2, k2 * rxpy * k1 * rxy));

    PairOperator r = solve_R(l1, l2, p.eta, x, M);
    PairOperator rinv = r_inverse(l1, l2, p.eta, x, M);
    PairOperator conj = flip_conjugate(solve_R(l2, l1, p.eta, x, M));
    for (int w = 0; w <= M; ++w) {
      uni_r = std::max(uni_r,
                       rel_diff(rinv.blocks[w] * r.blocks[w], Matrix::identity(w + 1)));
      psym = std::max(psym, rel_diff(conj.blocks[w], r.blocks[w]));
    }

    TensorSpace spl({1, 1, M + 2}, M + 2);
    Matrix rb = embed_pair(spl, 0, 1, rbar_spinhalf(p.eta, x - y));
    Matrix lx = embed_pair(spl, 0, 2, l_op(l1, p.eta, x, M + 2));
    Matrix ly = embed_pair(spl, 1, 2, l_op(l1, p.eta, y, M + 2));
    rll = std::max(rll, rel_diff(rb * lx * ly, ly * lx * rb));

    const int D = 3;
    TensorSpace flat({1, D}, 1 + D);
    Matrix lmat = embed_pair(flat, 0, 1, l_op(l1, p.eta, x, 1 + D));
    Matrix lneg = embed_pair(flat, 0, 1, l_op(l1, p.eta, -x - p.eta, 1 + D));
    Matrix tpose(flat.dim(), flat.dim()), sy(flat.dim(), flat.dim());
    for (int i = 0; i < flat.dim(); ++i) {
      const auto& di = flat.state(i);
      for (int jj = 0; jj < flat.dim(); ++jj) {
        const auto& dj = flat.state(jj);
        std::vector<int> row = {dj[0], di[1]}, col = {di[0], dj[1]};
        const int ri = flat.index_of(row), ci = flat.index_of(col);
        if (ri >= 0 && ci >= 0) tpose(i, jj) = lneg(ri, ci);
      }
      std::vector<int> flip = {1 - di[0], di[1]};
      const int fi = flat.index_of(flip);
      if (fi >= 0) sy(fi, i) = (di[0] == 0) ? I_UNIT : -I_UNIT;
    }
    const Complex pref =
        std::sinh(x + (0.5 - l1) * p.eta) / std::sinh(x + (0.5 + l1) * p.eta);
    cross = std::max(cross, rel_diff(lmat, pref * (sy * tpose * sy)));
  }
  rep.add("algebra", "yang_baxter", ybe, 1e-10);
  rep.add("algebra", "reflection_equation", re, 1e-10);
  rep.add("algebra", "unitarity", uni_r, 1e-10);
  rep.add("algebra", "p_symmetry", psym, 1e-10);
  rep.add("algebra", "rll_exchange", rll, 1e-10);
  rep.add("algebra", "crossing_symmetry", cross, 1e-10);
}

void suite_weightfn(const RunConfig& cfg, Reporter& rep) {
  Sampler s(cfg.seed + 1);
  const Params& p = cfg.params;
  if (p.M < 1) throw DomainError("weightfn suite needs M >= 1");
  if (cfg.t_points.empty()) throw ConfigError("weightfn suite needs grid.t_points");
  double shift_t = 0.0, shift_x = 0.0, dual = 0.0, phi_eq = 0.0;
  const auto ks = enumerate_multi_indices(p.M, p.N());
  for (int trial = 0; trial < 10; ++trial) {
    const auto& t = cfg.t_points[trial % cfg.t_points.size()];
    const MultiIndex& k = ks[trial % ks.size()];
    std::vector<Complex> xs(p.M);
    for (int i = 0; i < p.M; ++i) xs[i] = s.point();
    const int r = 1 + trial % p.N();
    auto [rt, rx] = w_shift_residuals(p, k, xs, t, r, 1 + trial % p.M);
    shift_t = std::max(shift_t, std::abs(rt));
    shift_x = std::max(shift_x, std::abs(rx));
    const Complex a = weight_w(p, k, xs, t, WRoute::definition);
    const Complex b = weight_w(p, k, xs, t, WRoute::expanded);
    dual = std::max(dual, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    auto ts = t;
    ts[r - 1] += p.base.tau;
    const Complex ratio = phi_theta_quotient(p, k, ts) / phi_theta_quotient(p, k, t);
    phi_eq = std::max(phi_eq,
                      std::abs(ratio - varphi(p, k, r)) / std::abs(varphi(p, k, r)));
  }
  rep.add("weightfn", "w_shift_in_t", shift_t, 1e-10);
  rep.add("weightfn", "w_shift_in_x", shift_x, 1e-10);
  rep.add("weightfn", "w_dual_route", dual, 1e-11);
  rep.add("weightfn", "phi_difference_equation", phi_eq, 1e-10);
}

void suite_bethe(const RunConfig& cfg, Reporter& rep) {
  Sampler s(cfg.seed + 2);
  const Params& p = cfg.params;
  if (cfg.t_points.empty()) throw ConfigError("bethe suite needs grid.t_points");
  double vec = 0.0, typea = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto& t = cfg.t_points[trial % cfg.t_points.size()];
    std::vector<Complex> xs(p.M);
    for (int i = 0; i < p.M; ++i) xs[i] = s.point();
    vec = std::max(vec,
                   rel_diff(bethe_vector(p, xs, t), bethe_vector_closed_form(p, xs, t)));
    for (const auto& k : enumerate_multi_indices(p.M, p.N())) {
      const Composition d = zeta(k, p.N());
      const Complex r1 = type_a_coeff(p, d, xs, t, TypeAMethod::recursion);
      const Complex r2 = type_a_coeff(p, d, xs, t, TypeAMethod::closed_form);
      typea = std::max(typea,
                       std::abs(r1 - r2) / std::max({std::abs(r1), std::abs(r2), 1e-30}));
    }
  }
  rep.add("bethe", "boundary_vector_decomposition", vec, 1e-10);
  rep.add("bethe", "type_a_recursion_vs_closed_form", typea, 1e-10);
}

void suite_integral_identity(const RunConfig& cfg, Reporter& rep) {
  const Params& p = cfg.params;
  if (!in_domain_all(p))
    throw DomainError("integral_identity suite: parameters violate the contour domain");
  QuadratureSettings qs = cfg.quad;
  qs.refine = true;
  double worst_r = 0.0, worst_full = 0.0;
  for (const auto& k : enumerate_multi_indices(p.M, p.N())) {
    for (int r = 1; r <= p.N(); ++r) {
      if (occupation(k, r) == 0 || occupation(k, r) > 2) continue;
      const Complex mr = mu_r(p, k, r, qs).value;
      const Complex nr = nu_r_factor(p, k, r);
      worst_r = std::max(worst_r, std::abs(mr - nr) / std::abs(nr));
    }
    if (p.M <= 2) {
      const Complex mk = mu_full(p, k, qs).value;
      const Complex nk = nu_leading(p, k);
      worst_full = std::max(worst_full, std::abs(mk - nk) / std::abs(nk));
    }
  }
  rep.add("integral_identity", "mu_r_equals_nu_r", worst_r, 1e-8);
  if (p.M <= 2) rep.add("integral_identity", "mu_equals_nu", worst_full, 1e-8);
}

void suite_qkz(const RunConfig& cfg, Reporter& rep) {
  const Params& p = cfg.params;
  if (cfg.t_points.empty()) throw ConfigError("qkz suite needs grid.t_points");
  double worst = 0.0;
  for (const auto& t : cfg.t_points) {
    const SectorCheck sc = in_sector(p, t, SectorVariant::tilde_tau);
    if (!sc.ok) {
      std::string bad;
      for (size_t i = 0; i < sc.slacks.size(); ++i)
        if (!(sc.slacks[i] > 0.0)) bad = sc.names[i];
      throw DomainError("qkz suite: t outside the step sector, violated: " + bad);
    }
    for (const auto& k : enumerate_multi_indices(p.M, p.N()))
      for (int r = 1; r <= p.N(); ++r)
        worst = std::max(worst, qkz_residual(p, k, t, r, cfg.quad));
  }
  rep.add("qkz", "difference_equation_residual", worst,
          std::max(1e-6, 10.0 * cfg.quad.rel_tol));
}

void suite_asymptotics(const RunConfig& cfg, Reporter& rep) {
  const Params& p = cfg.params;
  if (cfg.ray_base.empty()) throw ConfigError("asymptotics suite needs grid.ray");
  QuadratureSettings qs = cfg.quad;
  qs.refine = true;
  double worst = 0.0;
  bool monotone = true;
  for (const auto& k : enumerate_multi_indices(p.M, p.N())) {
    AsymptoticsReport ar =
        asymptotic_leading(p, k, cfg.ray_base, cfg.ray_direction, cfg.ray_depths, qs);
    if (!ar.monotone) monotone = false;
    worst = std::max(worst,
                     std::abs(ar.omega_k_coeff.back() - ar.nu) / std::abs(ar.nu));
  }
  rep.add("asymptotics", "leading_coefficient_match", worst, 1e-4,
          {{"monotone", monotone}});
  rep.add("asymptotics", "monotone_decay", monotone ? 0.0 : 1.0, 0.5);
}

void suite_completeness(const RunConfig& cfg, Reporter& rep) {
  const Params& p = cfg.params;
  if (cfg.t_points.empty()) throw ConfigError("completeness suite needs grid.t_points");
  for (const auto& t : cfg.t_points) {
    CompletenessReport cr = completeness_matrix(p, t, cfg.quad);
    rep.add("completeness", "solution_matrix_conditioning",
            std::abs(cr.det) > 0.0 ? cr.cond1 : 1e300, 1e6,
            {{"abs_det", std::abs(cr.det)}});
  }
}

void suite_finite_dim(const RunConfig& cfg, Reporter& rep) {
  const Params& p = cfg.params;
  for (const Complex& l : p.ell)
    if (!is_positive_half_integer(l))
      throw DomainError("finite_dim suite: weights must lie in (1/2) Z_{>0}");
  if (!(p.eta.real() > 0.0))
    throw DomainError("finite_dim suite: needs Re(eta) > 0");
  if (cfg.t_points.empty()) throw ConfigError("finite_dim suite needs grid.t_points");
  double worst = 0.0;
  for (const auto& t : cfg.t_points)
    for (const auto& k : enumerate_multi_indices(p.M, p.N())) {
      bool fits = true;
      for (int r = 1; r <= p.N(); ++r)
        if (occupation(k, r) > static_cast<int>(std::lround(2.0 * p.ell[r - 1].real())))
          fits = false;
      if (!fits) continue;
      for (int r = 1; r <= p.N(); ++r)
        worst = std::max(worst, projected_qkz_residual(p, k, t, r, cfg.quad));
    }
  rep.add("finite_dim", "projected_difference_equation", worst, 1e-6);
}

bool p_all_half(const RunConfig& cfg) {
  for (const Complex& l : cfg.params.ell)
    if (!is_positive_half_integer(l)) return false;
  return cfg.params.eta.real() > 0.0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& out) {
  Reporter rep;
  const bool all = suite == "all";
  if (all || suite == "algebra") suite_algebra(cfg, rep);
  if (all || suite == "weightfn") suite_weightfn(cfg, rep);
  if (all || suite == "bethe") suite_bethe(cfg, rep);
  if (all || suite == "integral_identity") suite_integral_identity(cfg, rep);
  if (all || suite == "qkz") suite_qkz(cfg, rep);
  if (all || suite == "asymptotics") suite_asymptotics(cfg, rep);
  if (all || suite == "completeness") suite_completeness(cfg, rep);
  if (suite == "finite_dim") suite_finite_dim(cfg, rep);
  if (all) {
    // run the projected checks only when the weights admit them
    bool applicable = p_all_half(cfg);
    if (applicable) suite_finite_dim(cfg, rep);
  }
  if (rep.rows.empty()) throw ConfigError("unknown suite: " + suite);
  json doc;
  doc["config"] = cfg.to_json();
  doc["results"] = rep.rows;
  doc["all_pass"] = rep.all_pass;
  write_output(out, doc.dump(2) + "\n");
  for (const auto& row : rep.rows)
    std::fprintf(stderr, "%s %s/%s residual %.3e tol %.1e\n",
                 row["pass"].get<bool>() ? "pass" : "FAIL",
                 row["suite"].get<std::string>().c_str(),
                 row["check"].get<std::string>().c_str(),
                 row["residual"].get<double>(), row["tolerance"].get<double>());
  return rep.all_pass ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, const std::string& kstr, int t_index,
              const std::string& out) {
  const MultiIndex k = parse_multi_index(kstr, cfg);
  const auto& t = pick_t(cfg, t_index);
  const SectorCheck sc = in_sector(cfg.params, t, SectorVariant::tilde);
  if (!sc.ok) throw SectorViolation("solve: t outside the holomorphy sector");
  VectorQuad psi = psi_solution(cfg.params, k, t, cfg.quad);
  json doc;
  doc["k"] = k;
  json tj = json::array();
  for (const Complex& z : t) tj.push_back(from_complex(z));
  doc["t"] = tj;
  json coeffs;
  for (const auto& [m, c] : psi.value.coeffs) coeffs[key_string(m)] = from_complex(c);
  doc["coefficients"] = coeffs;
  doc["error_estimate"] = psi.error;
  doc["n_per_dim"] = psi.n;
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& kstr, const std::string& out) {
  if (cfg.ray_base.empty()) throw ConfigError("sweep needs grid.ray in the config");
  const MultiIndex k = parse_multi_index(kstr, cfg);
  QuadratureSettings qs = cfg.quad;
  AsymptoticsReport ar = asymptotic_leading(cfg.params, k, cfg.ray_base,
                                            cfg.ray_direction, cfg.ray_depths, qs);
  const auto basis = enumerate_multi_indices(cfg.params.M, cfg.params.N());
  std::string csv = "depth,deviation,slope";
  for (const auto& m : basis) {
    csv += ",re" + key_string(m) + ",im" + key_string(m);
  }
  csv += "\n";
  // re-sample per depth to emit the full component table
  for (size_t i = 0; i < ar.depths.size(); ++i) {
    std::vector<Complex> t(cfg.ray_base.size());
    for (size_t s = 0; s < t.size(); ++s)
      t[s] = cfg.ray_base[s] + ar.depths[i] * cfg.ray_direction[s];
    VectorQuad th = theta_solution(cfg.params, k, t, qs);
    char head[96];
    std::snprintf(head, sizeof head, "%.6g,%.17g,%.6g", ar.depths[i],
                  ar.deviations[i], ar.slope);
    csv += head;
    for (const auto& m : basis) {
      const Complex c = th.value.coeff(m);
      char buf[80];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", c.real(), c.imag());
      csv += buf;
    }
    csv += "\n";
  }
  write_output(out, csv);
  return 0;
}

int cmd_dump_operator(const RunConfig& cfg, const std::string& kind,
                      const std::string& legs, Complex x, int r, int t_index,
                      const std::string& out) {
  const Params& p = cfg.params;
  std::string text;
  auto dump_matrix = [&](const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        text += format_complex(m(i, j)) + (j + 1 == m.cols() ? "\n" : "  ");
  };
  if (kind == "R" || kind == "L") {
    std::stringstream ss(legs);
    std::string item;
    std::vector<int> lg;
    while (std::getline(ss, item, ','))
      if (!item.empty()) lg.push_back(std::stoi(item));
    if (kind == "R" && lg.size() != 2) throw ConfigError("dump-operator R needs --legs a,b");
    if (kind == "L" && lg.size() != 1) throw ConfigError("dump-operator L needs --legs a");
    for (int v : lg)
      if (v < 1 || v > p.N()) throw ConfigError("leg index outside 1..N");
    PairOperator op = kind == "R"
                          ? solve_R(p.ell[lg[0] - 1], p.ell[lg[1] - 1], p.eta, x, p.M)
                          : l_op(p.ell[lg[0] - 1], p.eta, x, p.M);
    TensorSpace sp2({op.cap1, op.cap2}, op.max_weight());
    dump_matrix(pair_dense(op, sp2));
  } else if (kind == "K") {
    const int leg = legs.empty() ? 1 : std::stoi(legs);
    if (leg < 1 || leg > p.N()) throw ConfigError("leg index outside 1..N");
    auto kv = k_diag(p.ell[leg - 1], p.eta, x, p.xi_minus, p.M);
    Matrix m(p.M + 1, p.M + 1);
    for (int d = 0; d <= p.M; ++d) m(d, d) = kv[d];
    dump_matrix(m);
  } else if (kind == "transport") {
    const auto& t = pick_t(cfg, t_index);
    std::vector<TransportFactor> trace;
    Matrix m = transport(p, r, t, &trace);
    for (const auto& f : trace) {
      text += "# " + f.kind + " legs " + std::to_string(f.leg_a);
      if (f.leg_b > 0) text += "," + std::to_string(f.leg_b);
      text += " at " + format_complex(f.argument) + "\n";
    }
    dump_matrix(m);
  } else {
    throw ConfigError("dump-operator kind must be one of R, K, L, transport");
  }
  write_output(out, text);
  return 0;
}

int cmd_canonicalize(const RunConfig& cfg, const std::string& out) {
  write_output(out, cfg.to_json().dump(2) + "\n");
  return 0;
}

int cmd_dump_contour(const RunConfig& cfg, const std::string& kstr, int t_index,
                     bool tau_strict, const std::string& out) {
  const MultiIndex k = parse_multi_index(kstr, cfg);
  ContourSpec cs = find_gamma(cfg.params, k, tau_strict);
  std::string text;
  std::vector<Complex> anchors = cfg.t_points.empty()
                                     ? cs.gamma
                                     : cs.anchors(pick_t(cfg, t_index));
  for (const Complex& a : anchors) {
    text += format_complex(a) + "  " + format_complex(a + PI * I_UNIT) + "\n";
  }
  write_output(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary difference-equation solution toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all", kstr, kind, legs;
  int t_index = 0, r_leg = 1;
  double x_re = 0.0, x_im = 0.0;
  bool tau_strict = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_path, "output path (stdout when omitted)");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify);
  verify->add_option("--suite", suite,
                     "algebra|weightfn|bethe|integral_identity|qkz|asymptotics|"
                     "completeness|finite_dim|all");

  CLI::App* solve = app.add_subcommand("solve", "emit one solution record");
  add_common(solve);
  solve->add_option("--k", kstr, "label, comma separated")->required();
  solve->add_option("--t-index", t_index, "index into grid.t_points");

  CLI::App* sweep = app.add_subcommand("sweep", "depth sweep along the config ray");
  add_common(sweep);
  sweep->add_option("--k", kstr, "label, comma separated")->required();

  CLI::App* dump_op = app.add_subcommand("dump-operator", "write an operator matrix");
  add_common(dump_op);
  dump_op->add_option("--kind", kind, "R|K|L|transport")->required();
  dump_op->add_option("--legs", legs, "legs, comma separated (R: a,b; K/L: a)");
  dump_op->add_option("--x-re", x_re, "spectral argument, real part");
  dump_op->add_option("--x-im", x_im, "spectral argument, imaginary part");
  dump_op->add_option("--r", r_leg, "shift direction for transport");
  dump_op->add_option("--t-index", t_index, "index into grid.t_points");

  CLI::App* canon = app.add_subcommand("canonicalize", "re-emit the config in canonical form");
  add_common(canon);

  CLI::App* dump_ct = app.add_subcommand("dump-contour", "write the cycle segments");
  add_common(dump_ct);
  dump_ct->add_option("--k", kstr, "label, comma separated")->required();
  dump_ct->add_option("--t-index", t_index, "index into grid.t_points");
  dump_ct->add_flag("--tau-strict", tau_strict, "use the step-restricted base points");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = RunConfig::load(config_path);
    if (verify->parsed()) return cmd_verify(cfg, suite, out_path);
    if (solve->parsed()) return cmd_solve(cfg, kstr, t_index, out_path);
    if (sweep->parsed()) return cmd_sweep(cfg, kstr, out_path);
    if (dump_op->parsed())
      return cmd_dump_operator(cfg, kind, legs, Complex(x_re, x_im), r_leg, t_index,
                               out_path);
    if (dump_ct->parsed()) return cmd_dump_contour(cfg, kstr, t_index, tau_strict, out_path);
    if (canon->parsed()) return cmd_canonicalize(cfg, out_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
