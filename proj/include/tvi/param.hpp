// Parametrization of all solutions through a given one, and uniqueness tests.
//
// A solution H of an interpolation problem induces, for every window index k,
// a contraction from the image of the column defect over F_k into the defect
// space of the previous column.  The admissible transforms C (strictly upper
// contractions on the defect coordinates whose first-superdiagonal blocks
// restrict to those induced contractions and whose other blocks vanish on the
// same subspaces) are in one-to-one correspondence with the solution set: each
// C yields a resolvent F and hence a Schur pair reconstructing some solution,
// and distinct C give distinct pairs.
#pragma once

#include <optional>

#include "tvi/majorant.hpp"
#include "tvi/problem.hpp"

namespace tvi {

/// Induced contractions of a solution: per index k, the subspace of the
/// defect coordinates spanned by the defect image of F_k, and the induced
/// map into the previous defect coordinates.
struct InducedData {
  DefectData defects;            // defect data of the solution's columns
  std::vector<Subspace> ranges;  // image closure, ambient = defect dim of column k
  std::vector<Mat> couplings;    // contraction in range-basis coordinates,
                                 // rows = defect dim of column k-1

  const Window& window() const { return defects.coords.window(); }
  const Subspace& range(int k) const {
    return ranges[static_cast<size_t>(k - window().lo)];
  }
  const Mat& coupling(int k) const {
    return couplings[static_cast<size_t>(k - window().lo)];
  }
};

/// Compute the induced contractions of a solution. Throws NumericError when
/// the candidate does not solve the problem, when the defining relation is
/// inconsistent beyond tol.eq, or when an induced map fails to be a
/// contraction within tol.psd.
InducedData induced_contractions(const BlockMatrix& h, const InterpolationData& data,
                                 const Tolerance& tol);

struct ParameterReport {
  bool ok = false;
  bool structural = false;        // strictly upper over the defect coordinates
  bool contractive = false;       // op norm <= 1 + tol.psd
  double norm = 0.0;
  double pinned_residual = 0.0;   // worst deviation of (k-1,k) restrictions
  double free_residual = 0.0;     // worst leakage of other blocks onto the ranges
  std::vector<std::string> problems;
};

/// Membership test for the admissible transform set of a solution. Throws
/// ShapeError when c does not act on the defect coordinate space.
ParameterReport check_parameter(const BlockMatrix& c, const InducedData& induced,
                                const Tolerance& tol);

/// The member with zeros everywhere except the pinned first-superdiagonal
/// part: block (k-1, k) acts as the induced contraction on the range and as 0
/// on its complement.
BlockMatrix canonical_parameter(const InducedData& induced);

struct Parametrization {
  SchurPair pair;
  BlockMatrix resolvent;
  double reconstruction_residual = 0.0;  // || construct(pair) - H ||
};

/// Map an admissible transform to the Schur pair of a solution of the same
/// problem. Membership is enforced through the resolvent-level interpolation
/// condition (NumericError on violation), and the output is re-validated
/// before returning.
Parametrization parametrize_solution(const BlockMatrix& h, const InterpolationData& data,
                                     const BlockMatrix& c, const Tolerance& tol);

/// Sufficient conditions for the parameter set to be a single point: all
/// range subspaces full, all induced maps co-isometric, or a split index k0
/// with co-isometries up to k0 and full ranges after it.
struct UniquenessReport {
  Window window;
  std::vector<bool> full_flags;   // per index: range subspace is everything
  std::vector<bool> coiso_flags;  // per index: induced map is a co-isometry
  bool cond_full = false;
  bool cond_coiso = false;
  bool cond_split = false;        // interior split only
  int split_index = 0;            // smallest admissible split when cond_split
  bool unique = false;            // cond_full || cond_coiso || cond_split

  bool full(int k) const { return full_flags[static_cast<size_t>(k - window.lo)]; }
  bool coiso(int k) const { return coiso_flags[static_cast<size_t>(k - window.lo)]; }
};

UniquenessReport uniqueness_from_induced(const InducedData& induced, const Tolerance& tol);

/// Same three conditions evaluated on the raw data: per-column constraint
/// subspaces full, stacked data contractions co-isometric, or a split. When
/// any condition holds the problem has exactly one solution; the converse is
/// not claimed.
UniquenessReport uniqueness_from_data(const InterpolationData& data, const Tolerance& tol);

/// A second admissible Schur pair whose reconstructed solution provably
/// differs from the central one: the gap at block (row, col) equals
/// predicted_gap exactly.
struct NonuniquenessWitness {
  SchurPair alternative;
  double predicted_gap = 0.0;
  int row = 0, col = 0;
};

/// Attempt the non-uniqueness construction on the raw data: a rank-one
/// perturbation of the canonical pair supported on the defect of a
/// non-co-isometric data contraction and the complement of a constraint
/// subspace. Returns nullopt when no robust witness exists.
std::optional<NonuniquenessWitness> data_level_witness(const InterpolationData& data,
                                                       const Tolerance& tol);

/// The analogous perturbation at the transform level: a strictly upper
/// block, supported off the ranges, whose sum with the canonical member
/// stays admissible. Returns nullopt when every candidate is blocked by
/// co-isometric induced maps or full ranges.
std::optional<BlockMatrix> parameter_perturbation(const InducedData& induced,
                                                  const Tolerance& tol);

}  // namespace tvi
