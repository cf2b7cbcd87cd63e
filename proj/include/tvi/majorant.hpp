// Defect machinery, the Cayley transform, harmonic majorants of the column
// gram H*H, and the state-space realization example.
//
// For a column-contractive upper H the defect operator of column k is
// D_k = (I - H_k* H_k)^{1/2}; writing nabla for the diagonal of the D_k in
// defect-range coordinates and Pi for the coordinate projection, every
// hermitian "majorant" Re W >= H*H with unit diagonal W_{k,k} = I arises as
//     W = V + Pi* nabla (I + C)(I - C)^{-1} nabla Pi
// for exactly one strictly upper contraction C on the defect coordinate
// space (V is the upper form of the gram with doubled off-diagonal part).
// The companion resolvent F = N + Pi* nabla (I - C)^{-1} nabla Pi satisfies
// F + F* >= H*H + I with unit diagonal, and F = (W + I)/2.
#pragma once

#include "tvi/block.hpp"

namespace tvi {

/// Defect data of a column-contractive upper matrix.
struct DefectData {
  BlockSpace coords;             // defect-range coordinates, dim(k) = rank D_k
  std::vector<Mat> ops;          // D_k, dense on U_k (indexed by k - window.lo)
  std::vector<Subspace> spaces;  // range of D_k inside U_k
  BlockMatrix weight;            // nabla: diagonal, D_k in coordinates (PSD, invertible)
  BlockMatrix proj;              // Pi: U -> coordinates, blocks = basis*

  const Mat& op(int k) const { return ops[static_cast<size_t>(k - coords.window().lo)]; }
  const Subspace& space(int k) const { return spaces[static_cast<size_t>(k - coords.window().lo)]; }
};

/// Compute defect operators, ranges and the (nabla, Pi) pair. Throws
/// NumericError when some column has norm > 1 + tol.psd.
DefectData defect_data(const BlockMatrix& h, const Tolerance& tol);

// ---- gram forms ------------------------------------------------------------

/// N: the blocks (H_j)* H_k of the column gram for j <= k.
BlockMatrix gram_upper_form(const BlockMatrix& h);
/// The strictly upper part of the column gram (j < k blocks only).
BlockMatrix gram_strict_upper(const BlockMatrix& h);
/// V: doubled strictly-upper part plus diagonal; real_part(V) = H*H.
BlockMatrix gram_analytic_form(const BlockMatrix& h);

// ---- Cayley transform ------------------------------------------------------

/// K = (I + C)(I - C)^{-1} for a strictly upper contraction C. The result is
/// upper with unit diagonal and non-negative real part.
BlockMatrix cayley(const BlockMatrix& c);

/// C = (K - I)(K + I)^{-1}. Requires K upper with unit diagonal (within
/// tol.eq) and real_part(K) non-negative (within tol.psd).
BlockMatrix inverse_cayley(const BlockMatrix& k, const Tolerance& tol);

// ---- harmonic majorants ----------------------------------------------------

/// W = V + Pi* nabla (I + C)(I - C)^{-1} nabla Pi; C must be a strictly
/// upper contraction on the defect coordinate space of H.
BlockMatrix harmonic_majorant(const BlockMatrix& h, const BlockMatrix& c, const Tolerance& tol);

/// Inverse of harmonic_majorant in its second argument: factor W - V through
/// the defect coordinates and apply the inverse Cayley transform. Throws
/// NumericError when W - V is not supported on the defect spaces, the
/// diagonal of W is not the identity, or the recovered transform is not
/// positive real.
BlockMatrix parameter_from_majorant(const BlockMatrix& w, const BlockMatrix& h,
                                    const Tolerance& tol);

/// F = N + Pi* nabla (I - C)^{-1} nabla Pi (equals (harmonic_majorant + I)/2).
BlockMatrix resolvent_from_parameter(const BlockMatrix& h, const BlockMatrix& c,
                                     const Tolerance& tol);

// ---- state-space example ---------------------------------------------------

/// Discrete-time system {A, B, E, D}: state matrix A (stable), per-column
/// inputs B: U -> X, output E: X -> C^m, and a finite upper feedthrough
/// D: U -> Y on a window starting at 1. P caches the solution of
/// P = A*PA + E*E.
struct StateSpaceSystem {
  Mat a;          // state, square
  Mat b;          // states x total input dim (columns split by in_space)
  Mat e;          // m x states
  BlockMatrix d;  // upper, window {1..n}
  Mat p;          // gram of the observability tail

  const BlockSpace& in_space() const { return d.domain(); }
  /// Column slice of b for window index k.
  Mat b_col(int k) const;
};

/// Validate shapes, stability, and solve for P.
StateSpaceSystem make_state_space(Mat a, Mat b, Mat e, BlockMatrix d, const Tolerance& tol);

/// Unique solution of P = A*PA + E*E for a stable A (spectral radius
/// < 1 - tol.rank; NumericError otherwise), by squared-power series
/// summation; the residual is the contract.
Mat lyapunov_solve(const Mat& a, const Mat& e, const Tolerance& tol);

/// The hermitian matrix D*D + B*PB re-blocked over the input space; its
/// diagonal blocks are contractions exactly when the realized H below has
/// contractive columns.
BlockMatrix state_space_gram(const StateSpaceSystem& sys);

struct StateSpaceRealization {
  BlockMatrix h;          // rows {-depth..n}: E A^{-j-1} B_k for j < 0, D rows at 1..n
  double tail_bound = 0;  // ||A^depth|| ||E|| ||B|| / (1 - ||A||), inf if ||A|| >= 1
  bool truncation_converged = false;  // ||A^depth|| < tol.rank reached
};

/// Windowed realization of the column map whose gram is state_space_gram.
/// Rows j < 0 are truncated at the given depth (blocks beyond the point
/// where ||A^m|| < tol.rank are dropped).
StateSpaceRealization state_space_to_H(const StateSpaceSystem& sys, int depth,
                                       const Tolerance& tol);

}  // namespace tvi
