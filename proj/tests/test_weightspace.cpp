#include "doctest.h"

#include <random>

#include "bqkz/tensor.hpp"
#include "bqkz/weightspace.hpp"

using namespace bqkz;

namespace {

// brute-force recursive enumeration, independent of the iterative one
void enumerate_rec(int M, int N, int lo, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == M) {
    out.push_back(cur);
    return;
  }
  for (int v = lo; v <= N; ++v) {
    cur.push_back(v);
    enumerate_rec(M, N, v, cur, out);
    cur.pop_back();
  }
}

Params demo_params(int M, int N) {
  std::vector<Complex> ell;
  for (int s = 0; s < N; ++s) ell.emplace_back(0.8 + 0.2 * s, 0.03 * s);
  return Params(Complex(-0.5, 0.1), Complex(0.47, 0.05), Complex(0.5, -0.1),
                Complex(0.4, 0.08), ell, M);
}

}  // namespace

TEST_CASE("multi-index enumeration") {
  CHECK(enumerate_multi_indices(0, 3) == std::vector<MultiIndex>{{}});
  CHECK(enumerate_multi_indices(2, 2) ==
        std::vector<MultiIndex>{{1, 1}, {1, 2}, {2, 2}});
  for (int M = 0; M <= 4; ++M)
    for (int N = 1; N <= 4; ++N) {
      auto got = enumerate_multi_indices(M, N);
      CHECK(static_cast<int>(got.size()) == binomial(M + N - 1, M));
      std::vector<MultiIndex> expect;
      MultiIndex cur;
      enumerate_rec(M, N, 1, cur, expect);
      CHECK(got == expect);
    }
}

TEST_CASE("zeta bijection and occupation sums") {
  CHECK(zeta({1, 1, 2}, 3) == Composition{2, 1, 0});
  CHECK(zeta_inv({0, 0, 0}) == MultiIndex{});
  for (const auto& k : enumerate_multi_indices(3, 3)) {
    CHECK(zeta_inv(zeta(k, 3)) == k);
    int total = 0;
    for (int r = 1; r <= 3; ++r) total += occupation(k, r);
    CHECK(total == 3);
  }
}

TEST_CASE("position index against a linear scan") {
  CHECK(position_index({1, 1, 2}, 2, 1) == 2);
  CHECK(position_index({1, 1, 2}, 1, 2) == 3);
  CHECK_THROWS_AS(position_index({1, 1, 2}, 2, 2), OutOfRange);
  for (const auto& k : enumerate_multi_indices(3, 3))
    for (int r = 1; r <= 3; ++r)
      for (int m = 1; m <= occupation(k, r); ++m) {
        const int i = position_index(k, m, r);
        // scan oracle: i is the m-th position with k_i = r
        int seen = 0, found = -1;
        for (int pos = 1; pos <= 3; ++pos)
          if (k[pos - 1] == r && ++seen == m) { found = pos; break; }
        CHECK(i == found);
      }
}

TEST_CASE("verma generator matrices") {
  const Complex ell(0.9, 0.1), z(0.3, -0.2), eta(0.5, 0.07);
  const int dmax = 4;
  auto g = verma_generators(ell, z, eta, dmax);
  // highest weight vector annihilated by e, scaled by e^{2 ell z}
  for (int d = 0; d <= dmax; ++d) CHECK(g.e(d, 0) == Complex(0.0));
  CHECK(std::abs(g.exp_h(0, 0) - std::exp(2.0 * ell * z)) < 1e-15);
  // truncation edge: f annihilates v_{dmax} in the stored matrix
  for (int d = 0; d <= dmax; ++d) CHECK(g.f(d, dmax) == Complex(0.0));
  // [e, f] = sinh(2 (ell - d) eta)/sinh(eta) on the interior of the window
  Matrix comm = g.e * g.f - g.f * g.e;
  for (int d = 0; d < dmax; ++d) {
    const Complex expect = std::sinh(2.0 * (ell - static_cast<double>(d)) * eta) /
                           std::sinh(eta);
    CHECK(std::abs(comm(d, d) - expect) < 1e-12);
  }
  // weight relation e^{eta h} f e^{-eta h} = e^{-2 eta} f on the interior
  auto gw = verma_generators(ell, eta, eta, dmax);
  Matrix lhs = gw.exp_h * g.f * inverse(gw.exp_h);
  for (int d = 0; d + 1 < dmax; ++d)
    CHECK(std::abs(lhs(d + 1, d) - std::exp(-2.0 * eta) * g.f(d + 1, d)) < 1e-12);
}

TEST_CASE("project_finite filters occupations beyond 2 ell") {
  WeightVector v;
  for (const auto& k : enumerate_multi_indices(2, 2)) v.coeffs[k] = 1.0;
  std::vector<Complex> ell = {0.5, 0.5};
  WeightVector pr = project_finite(v, ell);
  CHECK(pr.coeff({1, 1}) == Complex(0.0));
  CHECK(pr.coeff({1, 2}) == Complex(1.0));
  CHECK(pr.coeff({2, 2}) == Complex(0.0));

  // identity when all occupations already fit
  std::vector<Complex> big = {2.0, 2.0};
  CHECK(rel_diff(project_finite(v, big), v) == 0.0);

  // random vector against a brute-force filter at ell = (1/2, 1)
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WeightVector w;
  for (const auto& k : enumerate_multi_indices(3, 2)) w.coeffs[k] = Complex(u(rng), u(rng));
  std::vector<Complex> mixed = {0.5, 1.0};
  WeightVector got = project_finite(w, mixed);
  for (const auto& [k, c] : w.coeffs) {
    const bool keep = occupation(k, 1) <= 1 && occupation(k, 2) <= 2;
    CHECK(got.coeff(k) == (keep ? c : Complex(0.0)));
  }

  std::vector<Complex> bad = {0.4, 1.0};
  CHECK_THROWS_AS(project_finite(v, bad), NotHalfInteger);
}

TEST_CASE("params validation and derived boundary parameters") {
  auto p = demo_params(2, 2);
  CHECK(p.N() == 2);
  CHECK(std::abs(p.xi_tilde_plus() - (p.xi_plus - 0.5 * p.eta - 0.5 * p.base.tau)) == 0.0);
  CHECK(std::abs(p.xi_tilde_minus() - (p.xi_minus - 0.5 * p.eta)) == 0.0);
  CHECK_THROWS_AS(Params(Complex(-0.5, 0.0), Complex(0.0, 0.0), 0.1, 0.2,
                         std::vector<Complex>{1.0}, 1),
                  DomainError);
}

TEST_CASE("tensor space enumeration and embeddings") {
  TensorSpace sp({1, 2, 2}, 3);
  // graded: weights ascending, lexicographic within a block
  for (int i = 1; i < sp.dim(); ++i) CHECK(sp.weight(i) >= sp.weight(i - 1));
  CHECK(sp.index_of({0, 0, 0}) == 0);
  CHECK(sp.index_of({2, 0, 0}) == -1);
  CHECK(sp.index_of({0, 2, 2}) == -1);  // total cap
  // diagonal embedding
  std::vector<Complex> dv = {1.0, 2.0, 3.0};
  Matrix d = embed_diag(sp, 1, dv);
  for (int i = 0; i < sp.dim(); ++i)
    CHECK(d(i, i) == dv[sp.state(i)[1]]);
  // flip conjugation is an involution
  PairOperator op{2, 2, {}};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int w = 0; w <= 3; ++w) {
    const int n = op.block_dim(w);
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = Complex(u(rng), u(rng));
    op.blocks.push_back(b);
  }
  PairOperator twice = flip_conjugate(flip_conjugate(op));
  for (int w = 0; w <= 3; ++w) CHECK(rel_diff(twice.blocks[w], op.blocks[w]) == 0.0);
}
