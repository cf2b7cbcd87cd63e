// The norm-constrained interpolation problem on a finite window.
//
// Data: for every window index k, a subspace F_k of the input space U_k
// together with a contraction omega_k from F_k into Y_k (+) U_{k-1}, split as
// (to_output, to_prev). Sought: upper triangular H with contractive stacked
// columns such that
//     H_{k,k}|F_k = to_output_k,
//     H_{j,k}|F_k = H_{j,k-1} to_prev_k        (j < k).
//
// Solutions correspond to pairs (top, bottom) with [top; bottom] a
// contraction, top upper, bottom strictly upper, via
//     H = top (I - bottom)^{-1},   resolvent F = (I - bottom)^{-1},
// and the correspondence is a bijection onto pairs (H, F) with F upper,
// unit diagonal, and F + F* >= H*H + I.
#pragma once

#include <array>

#include "tvi/block.hpp"

namespace tvi {

/// Per-column interpolation constraint; omega columns are expressed in F_k
/// coordinates (space.dim() of them).
struct ColumnConstraint {
  Subspace space;  // F_k, subspace of U_k
  Mat to_output;   // dim(Y_k) x dim(F_k)
  Mat to_prev;     // dim(U_{k-1}) x dim(F_k)
};

struct InterpolationData {
  Window window;
  BlockSpace in_space;   // U
  BlockSpace out_space;  // Y
  std::vector<ColumnConstraint> cols;  // indexed by k - window.lo

  const ColumnConstraint& at(int k) const { return cols[static_cast<size_t>(k - window.lo)]; }
  ColumnConstraint& at(int k) { return cols[static_cast<size_t>(k - window.lo)]; }
};

struct DataReport {
  bool ok = true;
  std::vector<std::string> problems;   // human-readable, with offending index
  std::vector<double> omega_norms;     // per window index, stacked omega_k norm
};

/// Shape and contraction checks on the data; never throws.
DataReport validate_data(const InterpolationData& data, const Tolerance& tol);

/// The structured matrices of the data: E (diagonal, isometric embeddings of
/// the F_k), OmegaOut (diagonal, to_output blocks) and OmegaPrev (first
/// superdiagonal, to_prev blocks), all over the F coordinate space.
struct StructuredData {
  BlockSpace f_space;     // F coordinates, dim(k) = rank F_k
  BlockMatrix e;          // F -> U
  BlockMatrix omega_out;  // F -> Y
  BlockMatrix omega_prev; // F -> U, support on (k-1, k)
};

StructuredData build_structured(const InterpolationData& data);

struct EntryResidual {
  int j = 0, k = 0;
  double value = 0.0;
};

struct InterpolationReport {
  bool interpolation_ok = false;  // operator identity within tol.eq
  double identity_residual = 0.0; // || H E - OmegaOut - H OmegaPrev ||
  std::vector<EntryResidual> entries;  // per-constraint residuals
  ColumnReport columns;                // contraction check, flagged separately
  bool ok() const { return interpolation_ok && columns.contractive; }
};

/// Does H satisfy the interpolation conditions for this data?
InterpolationReport check_interpolation(const BlockMatrix& h, const InterpolationData& data,
                                        const Tolerance& tol);

/// A pair (top: U -> Y upper, bottom: U -> U strictly upper) whose vertical
/// stacking is required to be a contraction.
struct SchurPair {
  BlockMatrix top;
  BlockMatrix bottom;
};

struct PairReport {
  bool ok = false;
  bool contractive = false;
  double stacked_norm = 0.0;
  double residual_out = 0.0;   // || top E - OmegaOut ||
  double residual_prev = 0.0;  // || bottom E - OmegaPrev ||
};

/// Joint contraction plus the pair-level interpolation conditions.
PairReport check_pair(const SchurPair& pair, const InterpolationData& data, const Tolerance& tol);

/// H = top (I - bottom)^{-1} and its resolvent F = (I - bottom)^{-1}.
struct Realization {
  BlockMatrix solution;   // H
  BlockMatrix resolvent;  // F, upper with unit diagonal
};

/// Always well defined: I - bottom has unit diagonal and the inverse is the
/// finite Neumann sum of the nilpotent part.
Realization construct(const SchurPair& pair);

/// Inverse direction of the bijection: top = H F^{-1}, bottom = I - F^{-1}.
/// Requires F upper with unit diagonal and F + F* - H*H - I PSD (within
/// tolerances); throws NumericError otherwise.
SchurPair recover_pair(const BlockMatrix& solution, const BlockMatrix& resolvent,
                       const Tolerance& tol);

/// The distinguished solution built from the diagonal/superdiagonal pair
/// choice: entries are products
///   (to_output_j P_j) (to_prev_{j+1} P_{j+1}) ... (to_prev_k P_k),
/// with P_k the coordinate projection U_k -> F_k.
BlockMatrix central_solution(const InterpolationData& data);

/// The canonical pair behind central_solution: top diagonal, bottom on the
/// first superdiagonal.
SchurPair canonical_pair(const InterpolationData& data);

struct ResolventReport {
  bool ok = false;
  double residual = 0.0;  // || F E - E - F OmegaPrev ||
};

/// Resolvent-level interpolation condition; for pairs from the bijection it
/// holds exactly when H = top F satisfies the interpolation conditions.
ResolventReport check_resolvent_interpolation(const BlockMatrix& resolvent,
                                              const InterpolationData& data, const Tolerance& tol);

// ---- 4x4 slab-constrained completion --------------------------------------

/// A 4x4 operator matrix [A_{ij}] with row dims out_dims and column dims
/// in_dims, constrained by the three column-slab bounds
/// || [A_{.,c} A_{.,c+1}] || <= 1 for c = 1, 2, 3.
struct CompletionInstance4x4 {
  std::array<int, 4> in_dims{};   // x1..x4
  std::array<int, 4> out_dims{};  // y1..y4
  std::array<std::array<Mat, 4>, 4> entry;  // entry[i][j] = A_{i+1, j+1}
  double overlap_residual = 0.0;  // filled by extract_completion

  std::array<double, 3> slab_norms() const;
};

/// The interpolation encoding of the 4x4 problem plus the dims needed to
/// read a completion back out of a solution.
struct CompletionEmbedding {
  InterpolationData data;
  std::array<int, 4> in_dims{};
  std::array<int, 4> out_dims{};
};

/// Window {1..6} encoding: columns 4, 5, 6 of H carry the slabs
/// [A_{.,1} A_{.,2}], [A_{.,2} A_{.,3}], [A_{.,3} A_{.,4}]; the constraints
/// force the overlapping slab columns to agree, and column contractivity of
/// H is exactly the three slab bounds.
CompletionEmbedding embed_completion_4x4(const std::array<int, 4>& in_dims,
                                         const std::array<int, 4>& out_dims);

/// Read the completion out of a solution of the embedded problem. Refuses
/// (NumericError) when H fails the embedded interpolation conditions.
CompletionInstance4x4 extract_completion(const BlockMatrix& h, const CompletionEmbedding& emb,
                                         const Tolerance& tol);

}  // namespace tvi
