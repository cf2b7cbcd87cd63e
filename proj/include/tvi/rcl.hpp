// Time-variant relaxed commutant lifting.
//
// A lifting problem consists, per window index k, of a contraction to_lift_k
// from source_k into target_k, a contraction evolution_k from target_{k-1}
// into target_k, and two coupling maps out of anchor spaces:
// relax_old_k: anchor_k -> source_k and relax_new_k: anchor_{k-1} -> source_k,
// subject to the intertwining relation
//     evolution_k . to_lift_{k-1} . relax_old_{k-1} = to_lift_k . relax_new_k
// and the relaxation inequality
//     relax_new_k* relax_new_k >= relax_old_{k-1}* relax_old_{k-1}.
// A solution is a sequence of contractions B_k from source_k into the lifted
// space target_k + (defect coordinates of evolution_lo..k) whose top rows
// reproduce to_lift_k and which intertwine with the isometric liftings.
// The solution set translates to an interpolation problem on the defect
// coordinate spaces, and back.
#pragma once

#include "tvi/problem.hpp"

namespace tvi {

struct LiftingProblem {
  Window window;
  BlockSpace source;  // domains of to_lift
  BlockSpace target;  // codomains of to_lift and evolution
  BlockSpace anchor;  // domains of the relaxation couplings
  std::vector<Mat> to_lift;    // source_k -> target_k, contraction
  std::vector<Mat> evolution;  // target_{k-1} -> target_k, contraction
  std::vector<Mat> relax_old;  // anchor_k -> source_k
  std::vector<Mat> relax_new;  // anchor_{k-1} -> source_k

  const Mat& lift_at(int k) const { return to_lift[static_cast<size_t>(k - window.lo)]; }
  const Mat& evolution_at(int k) const { return evolution[static_cast<size_t>(k - window.lo)]; }
  const Mat& old_at(int k) const { return relax_old[static_cast<size_t>(k - window.lo)]; }
  const Mat& new_at(int k) const { return relax_new[static_cast<size_t>(k - window.lo)]; }
};

struct LiftingValidation {
  bool ok = true;
  std::vector<std::string> problems;          // with offending indices
  std::vector<double> intertwine_residuals;   // per window index
  std::vector<double> relaxation_margins;     // smallest eigenvalue of new*new - old*old
};

/// Shape and invariant checks; never throws.
LiftingValidation validate_lifting_problem(const LiftingProblem& prob, const Tolerance& tol);

/// The interpolation problem induced on the defect coordinates, together with
/// the defect operators and range bases needed for the two translations.
struct UnderlyingData {
  InterpolationData data;                 // in = defects of to_lift, out = defects of evolution
  std::vector<Mat> lift_defects;          // dense on source_k
  std::vector<Subspace> lift_ranges;      // inside source_k
  std::vector<Mat> evolution_defects;     // dense on target_{k-1}
  std::vector<Subspace> evolution_ranges; // inside target_{k-1}

  const Mat& lift_defect(int k) const {
    return lift_defects[static_cast<size_t>(k - data.window.lo)];
  }
  const Subspace& lift_range(int k) const {
    return lift_ranges[static_cast<size_t>(k - data.window.lo)];
  }
  const Mat& evolution_defect(int k) const {
    return evolution_defects[static_cast<size_t>(k - data.window.lo)];
  }
  const Subspace& evolution_range(int k) const {
    return evolution_ranges[static_cast<size_t>(k - data.window.lo)];
  }
};

/// Per index k the constraint subspace is the defect image of relax_new_k and
/// the constraint map sends it into the defect coordinates of evolution_k and
/// to_lift_{k-1}; the relaxation inequality makes it a contraction. Throws
/// NumericError when the defining relation is inconsistent beyond tol.eq.
UnderlyingData underlying_contractions(const LiftingProblem& prob, const Tolerance& tol);

/// The isometric liftings: per index k a matrix from
/// target_{k-1} + cumulative defect coordinates up to k-1 into the same
/// shape at k. The defect coordinates are ordered by ascending index.
struct IsometricLifting {
  Window window;
  std::vector<int> lifted_dims;  // dim of the lifted space at each index
  std::vector<Mat> steps;        // lifted_{k-1} -> lifted_k, isometric

  int lifted_dim(int k) const {
    return window.contains(k) ? lifted_dims[static_cast<size_t>(k - window.lo)] : 0;
  }
  const Mat& step(int k) const { return steps[static_cast<size_t>(k - window.lo)]; }
};

IsometricLifting build_isometric_lifting(const LiftingProblem& prob, const UnderlyingData& und);

/// A candidate solution: per index k a matrix source_k -> lifted space at k.
struct LiftSequence {
  Window window;
  std::vector<Mat> columns;

  const Mat& at(int k) const { return columns[static_cast<size_t>(k - window.lo)]; }
};

struct LiftingSolutionReport {
  bool ok = false;
  std::vector<double> top_residuals;        // || top rows - to_lift_k ||
  std::vector<double> norms;                // || B_k ||
  std::vector<double> intertwine_residuals; // || step_k B_{k-1} relax_old_{k-1} - B_k relax_new_k ||
  bool tops_match = false;
  bool contractive = false;
  bool intertwined = false;
};

LiftingSolutionReport check_lifting_solution(const LiftSequence& b, const LiftingProblem& prob,
                                             const UnderlyingData& und, const Tolerance& tol);

/// Translate a solution sequence into a candidate for the underlying
/// interpolation problem. Throws NumericError when the top rows deviate from
/// to_lift, a column is not a contraction, or the bottom rows are not
/// supported on the defect range of to_lift.
BlockMatrix interpolant_from_lifts(const LiftSequence& b, const LiftingProblem& prob,
                                   const UnderlyingData& und, const Tolerance& tol);

/// Translate an upper matrix over the defect coordinates into a solution
/// sequence candidate. Requires h upper over (out, in) of the underlying
/// data (ShapeError otherwise).
LiftSequence lifts_from_interpolant(const BlockMatrix& h, const LiftingProblem& prob,
                                    const UnderlyingData& und, const Tolerance& tol);

/// Every interpolation problem arises this way: spaces
/// source_k = out_{k+1} + in_k, target_k = out_{k+1}, evolution = 0,
/// anchor_k = constraint subspace at k+1, with the couplings assembled from
/// the data maps. The window grows by one index below.
LiftingProblem embed_interpolation(const InterpolationData& data);

/// Residual of the roundtrip underlying_contractions(embed_interpolation(d))
/// against d, after aligning the defect coordinates through the natural
/// unitary identifications. Also covers the extra bottom window index, which
/// must be trivial.
double embedding_roundtrip_residual(const InterpolationData& data, const Tolerance& tol);

}  // namespace tvi
