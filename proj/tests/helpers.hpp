// Shared fixtures for the test suites: small hand-checkable instances with
// frozen expected values, plus convenience builders for scalar-block data.
#pragma once

#include "tvi/param.hpp"
#include "tvi/problem.hpp"
#include "tvi/random_gen.hpp"

namespace tvi_test {

using namespace tvi;

inline Mat m11(Complex x) {
  Mat m(1, 1);
  m(0, 0) = x;
  return m;
}

inline Mat m11(double x) { return m11(Complex(x, 0.0)); }

inline BlockSpace scalar_space(Window w) {
  return BlockSpace(w, std::vector<int>(static_cast<size_t>(w.hi - w.lo + 1), 1));
}

/// Window {0,1}, all blocks scalar:
///   top    = [[0.6, 0.1], [0, 0.7]]   (upper)
///   bottom = [[0,   0.5], [0, 0  ]]   (strictly upper)
/// Expected under the realization map:
///   resolvent = (I - bottom)^{-1} = [[1, 0.5], [0, 1]]
///   solution  = top * resolvent   = [[0.6, 0.4], [0, 0.7]]
inline SchurPair frozen_pair() {
  Window w{0, 1};
  BlockSpace s = scalar_space(w);
  BlockMatrix top(s, s), bottom(s, s);
  top.set_block(0, 0, m11(0.6));
  top.set_block(0, 1, m11(0.1));
  top.set_block(1, 1, m11(0.7));
  bottom.set_block(0, 1, m11(0.5));
  return SchurPair{top, bottom};
}

inline BlockMatrix frozen_solution() {
  Window w{0, 1};
  BlockSpace s = scalar_space(w);
  BlockMatrix h(s, s);
  h.set_block(0, 0, m11(0.6));
  h.set_block(0, 1, m11(0.4));
  h.set_block(1, 1, m11(0.7));
  return h;
}

inline BlockMatrix frozen_resolvent() {
  Window w{0, 1};
  BlockSpace s = scalar_space(w);
  BlockMatrix f(s, s);
  f.set_block(0, 0, m11(1.0));
  f.set_block(0, 1, m11(0.5));
  f.set_block(1, 1, m11(1.0));
  return f;
}

/// Scalar data on window {0,2}: every constraint subspace is the whole
/// (1-dim) input block, every output coupling and every back-coupling is
/// 0.5. The distinguished solution has entries
///   H_{k,k} = 0.5, H_{k-1,k} = 0.25, H_{0,2} = 0.125.
inline InterpolationData scalar_chain_data() {
  Window w{0, 2};
  InterpolationData data;
  data.window = w;
  data.in_space = scalar_space(w);
  data.out_space = scalar_space(w);
  for (int k = w.lo; k <= w.hi; ++k) {
    ColumnConstraint c;
    c.space = Subspace::full(1);
    c.to_output = m11(0.5);
    c.to_prev = (k > w.lo) ? m11(0.5) : Mat(0, 1);
    data.cols.push_back(c);
  }
  return data;
}

/// Window {0,2}, inputs C^2, outputs C^1. The first two constraint
/// subspaces are zero, the last is span(e1) with output coupling 0.5 and
/// zero back-coupling. Violates all three uniqueness conditions and admits
/// a rank-one alternative solution with gap exactly 0.5 at block (0, 0).
inline InterpolationData witness_fixture() {
  Window w{0, 2};
  InterpolationData data;
  data.window = w;
  data.in_space = BlockSpace(w, {2, 2, 2});
  data.out_space = BlockSpace(w, {1, 1, 1});
  for (int k = 0; k <= 2; ++k) {
    ColumnConstraint c;
    if (k < 2) {
      c.space = Subspace::zero(2);
      c.to_output = Mat(1, 0);
      c.to_prev = (k > 0) ? Mat(2, 0) : Mat(0, 0);
    } else {
      Mat basis(2, 1);
      basis << Complex(1, 0), Complex(0, 0);
      c.space = Subspace(2, basis);
      c.to_output = m11(0.5);
      c.to_prev = Mat::Zero(2, 1);
    }
    data.cols.push_back(c);
  }
  return data;
}

/// All constraint subspaces full, isometric data maps: to_output_k = 1,
/// to_prev_k = 0 on scalar blocks. The only solution is the identity-like
/// diagonal; every column of it is an isometry, so the defect coordinate
/// space is zero-dimensional.
inline InterpolationData isometric_fixture() {
  Window w{0, 2};
  InterpolationData data;
  data.window = w;
  data.in_space = scalar_space(w);
  data.out_space = scalar_space(w);
  for (int k = w.lo; k <= w.hi; ++k) {
    ColumnConstraint c;
    c.space = Subspace::full(1);
    c.to_output = m11(1.0);
    c.to_prev = (k > w.lo) ? m11(0.0) : Mat(0, 1);
    data.cols.push_back(c);
  }
  return data;
}

inline double dense_diff(const BlockMatrix& a, const BlockMatrix& b) {
  return (to_dense(a) - to_dense(b)).norm();
}

}  // namespace tvi_test
