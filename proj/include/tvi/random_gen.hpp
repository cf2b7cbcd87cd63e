// Deterministic random instance generation for tests, fixtures, and the
// command-line --random mode. All sampling is driven by a self-contained
// 64-bit engine with an explicit Box-Muller transform so that a fixed seed
// reproduces identical instances on every run.
#pragma once

#include <cstdint>
#include <random>

#include "tvi/majorant.hpp"
#include "tvi/param.hpp"
#include "tvi/rcl.hpp"

namespace tvi {

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform();
  /// Standard real gaussian (Box-Muller).
  double gaussian();
  /// Standard complex gaussian (unit total variance).
  Complex gaussian_complex();
  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  /// Matrix of iid standard complex gaussians.
  Mat matrix(int rows, int cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Gaussian matrix scaled by 1/(largest singular value + margin); norm
/// strictly below 1.
Mat random_contraction(RandomSource& rng, int rows, int cols, double margin = 0.05);

/// Uniformly oriented subspace from the QR factor of a gaussian matrix.
Subspace random_subspace(RandomSource& rng, int ambient, int dim);

struct RandomDataOptions {
  int max_dim = 3;                // block dimensions drawn from 0..max_dim
  double omega_scale = 0.85;      // norm cap for the stacked data contractions
  bool force_full_spaces = false; // constraint subspace = whole input space
  bool nontrivial = true;         // guarantee at least one nonzero column constraint
};

InterpolationData random_data(RandomSource& rng, Window w, const RandomDataOptions& opts = {});

/// An admissible Schur pair of the data: the canonical pair plus a random
/// upper/strictly-upper perturbation vanishing on the constraint subspaces,
/// scaled so the vertical stacking of the two parts has operator norm at or
/// below target_norm.
SchurPair random_admissible_pair(RandomSource& rng, const InterpolationData& data,
                                 const Tolerance& tol, double target_norm = 0.9);

/// A random member of the admissible transform set of a solution: canonical
/// member plus a range-annihilating strictly upper part, scaled to keep the
/// operator norm at or below target_norm.
BlockMatrix random_parameter(RandomSource& rng, const InducedData& induced,
                             const Tolerance& tol, double target_norm = 0.95);

/// Strictly upper block matrix with operator norm at most target_norm.
BlockMatrix random_strictly_upper_contraction(RandomSource& rng, const BlockSpace& space,
                                              double target_norm = 0.9);

struct RandomLiftingOptions {
  int max_dim = 2;
  bool isometric_couplings = false;  // force equality in the relaxation inequality
};

LiftingProblem random_lifting_problem(RandomSource& rng, Window w,
                                      const RandomLiftingOptions& opts = {});

/// Stable system: state matrix with operator norm 0.8 (hence spectral radius
/// at most 0.8), contractive input/output maps, random upper feedthrough on
/// the window {1..n}.
StateSpaceSystem random_state_space(RandomSource& rng, int states, int n, int max_dim,
                                    const Tolerance& tol);

}  // namespace tvi
