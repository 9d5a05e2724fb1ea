#pragma once

// Enumerated bases of truncated tensor products and the embedding of one- and
// two-leg operators into them. A state is the tuple of leg depths
// (d_1, ..., d_L); operators in this project never raise the total depth
// (ice rule), so capping the total weight loses nothing.

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "linalg.hpp"

namespace bqkz {

class TensorSpace {
 public:
  TensorSpace(std::vector<int> caps, int total_cap)
      : caps_(std::move(caps)), total_cap_(total_cap) {
    std::vector<int> state(caps_.size(), 0);
    enumerate(0, 0, state);
    std::stable_sort(states_.begin(), states_.end(),
                     [](const std::vector<int>& a, const std::vector<int>& b) {
                       int wa = 0, wb = 0;
                       for (int v : a) wa += v;
                       for (int v : b) wb += v;
                       if (wa != wb) return wa < wb;
                       return a < b;
                     });
    for (int i = 0; i < static_cast<int>(states_.size()); ++i)
      index_[states_[i]] = i;
  }

  static TensorSpace verma(int legs, int weight_cap) {
    return TensorSpace(std::vector<int>(legs, weight_cap), weight_cap);
  }

  int legs() const { return static_cast<int>(caps_.size()); }
  int dim() const { return static_cast<int>(states_.size()); }
  int total_cap() const { return total_cap_; }
  const std::vector<int>& caps() const { return caps_; }
  const std::vector<int>& state(int i) const { return states_[i]; }

  int weight(int i) const {
    int w = 0;
    for (int v : states_[i]) w += v;
    return w;
  }

  // -1 when the tuple was truncated away.
  int index_of(const std::vector<int>& d) const {
    auto it = index_.find(d);
    return it == index_.end() ? -1 : it->second;
  }

  std::vector<int> block(int w) const {
    std::vector<int> idx;
    for (int i = 0; i < dim(); ++i)
      if (weight(i) == w) idx.push_back(i);
    return idx;
  }

 private:
  void enumerate(int leg, int used, std::vector<int>& state) {
    if (leg == legs()) {
      states_.push_back(state);
      return;
    }
    const int hi = std::min(caps_[leg], total_cap_ - used);
    for (int d = 0; d <= hi; ++d) {
      state[leg] = d;
      enumerate(leg + 1, used + d, state);
    }
    state[leg] = 0;
  }

  std::vector<int> caps_;
  int total_cap_;
  std::vector<std::vector<int>> states_;
  std::map<std::vector<int>, int> index_;
};

// Weight-graded operator on a pair of legs. Block w acts on the span of
// v_{d1} (x) v_{d2} with d1 + d2 = w, d1 <= cap1, d2 <= cap2, listed by
// increasing d1.
struct PairOperator {
  int cap1 = 0;
  int cap2 = 0;
  std::vector<Matrix> blocks;

  int d1_lo(int w) const { return std::max(0, w - cap2); }
  int d1_hi(int w) const { return std::min(w, cap1); }
  int block_dim(int w) const { return d1_hi(w) - d1_lo(w) + 1; }
  int max_weight() const { return static_cast<int>(blocks.size()) - 1; }

  Complex entry(int d1_out, int d1_in, int w) const {
    return blocks[w](d1_out - d1_lo(w), d1_in - d1_lo(w));
  }
};

// P O P: the same operator read on the flipped pair.
inline PairOperator flip_conjugate(const PairOperator& op) {
  PairOperator out;
  out.cap1 = op.cap2;
  out.cap2 = op.cap1;
  out.blocks.reserve(op.blocks.size());
  for (int w = 0; w <= op.max_weight(); ++w) {
    const int n = op.block_dim(w);
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // new first-leg depth e corresponds to old first-leg depth w - e
        const int e_out = out.d1_lo(w) + i, e_in = out.d1_lo(w) + j;
        b(i, j) = op.entry(w - e_out, w - e_in, w);
      }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

// Restrict the first leg to the quotient with depths 0..new_cap1 (rows and
// columns above the cap are dropped; legal because the operators in play
// preserve the span of the discarded depths).
inline PairOperator quotient_leg1(const PairOperator& op, int new_cap1) {
  PairOperator out;
  out.cap1 = new_cap1;
  out.cap2 = op.cap2;
  for (int w = 0; w <= op.max_weight(); ++w) {
    if (out.d1_lo(w) > out.d1_hi(w)) break;  // block empty after the cut
    const int n = out.block_dim(w);
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        b(i, j) = op.entry(out.d1_lo(w) + i, out.d1_lo(w) + j, w);
    out.blocks.push_back(std::move(b));
  }
  return out;
}

// Operator on sp acting as op on legs (a, b) and as identity elsewhere.
// States whose image tuple falls outside sp are dropped, which is exactly the
// quotient map when sp carries finite per-leg caps.
inline Matrix embed_pair(const TensorSpace& sp, int leg_a, int leg_b, const PairOperator& op) {
  Matrix m(sp.dim(), sp.dim());
  std::vector<int> target;
  for (int col = 0; col < sp.dim(); ++col) {
    const std::vector<int>& d = sp.state(col);
    const int w = d[leg_a] + d[leg_b];
    if (w > op.max_weight())
      throw OutOfRange("embed_pair: pair operator has too few blocks");
    target = d;
    for (int d1 = op.d1_lo(w); d1 <= op.d1_hi(w); ++d1) {
      target[leg_a] = d1;
      target[leg_b] = w - d1;
      const int row = sp.index_of(target);
      if (row < 0) continue;
      m(row, col) = op.entry(d1, d[leg_a], w);
    }
  }
  return m;
}

// Diagonal one-leg operator: state (.., d_leg, ..) is scaled by dvals[d_leg].
inline Matrix embed_diag(const TensorSpace& sp, int leg, std::span<const Complex> dvals) {
  Matrix m(sp.dim(), sp.dim());
  for (int i = 0; i < sp.dim(); ++i) {
    const int d = sp.state(i)[leg];
    if (d >= static_cast<int>(dvals.size()))
      throw OutOfRange("embed_diag: diagonal too short");
    m(i, i) = dvals[d];
  }
  return m;
}

// Dense matrix of a pair operator on the 2-leg space with the given caps.
inline Matrix pair_dense(const PairOperator& op, const TensorSpace& sp2) {
  return embed_pair(sp2, 0, 1, op);
}

}  // namespace bqkz
