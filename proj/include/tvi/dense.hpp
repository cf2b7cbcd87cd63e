// Dense complex-matrix primitives: norms, PSD square roots, range bases.
// Everything here is zero-size safe (Eigen 0xN matrices are legal inputs).
#pragma once

#include "tvi/types.hpp"

namespace tvi {

/// Largest singular value; 0 for empty matrices.
double op_norm(const Mat& m);

/// Smallest singular value over min(rows, cols); 0 for empty matrices with
/// min dim > 0, and +infinity-like behaviour is avoided by defining the
/// smallest singular value of a 0x0 matrix as +1 (trivially invertible).
double smallest_singular_value(const Mat& m);

/// True when ||m - m*|| <= tol (m square).
bool is_hermitian(const Mat& m, double tol);

/// Smallest eigenvalue of a hermitian matrix (symmetrized internally);
/// +infinity is never returned, 0x0 input yields +1 (vacuously PSD).
double min_eigenvalue_hermitian(const Mat& m);

/// PSD square root of a hermitian matrix. Eigenvalues below -tol.psd raise
/// NumericError; small negatives are clamped to zero.
Mat hermitian_sqrt_psd(const Mat& m, const Tolerance& tol);

/// Column range of m: orthonormal basis from the left singular vectors with
/// singular value > tol.rank.
Subspace range_subspace(const Mat& m, const Tolerance& tol);

/// Moore-Penrose pseudo-inverse with singular values below tol.rank dropped.
Mat pseudo_inverse(const Mat& m, const Tolerance& tol);

/// Largest eigenvalue modulus (spectral radius) of a square matrix.
double spectral_radius(const Mat& m);

/// Solution of X . image = rhs by least squares through the column range of
/// `image`: `range` collects the left singular vectors above tol.rank,
/// `solution` maps range-basis coordinates to the columns of rhs, and
/// `inconsistency` is the norm of the part of rhs outside the row space of
/// `image` (which no X can reach).
struct RangeSolve {
  Subspace range;
  Mat solution;
  double inconsistency = 0.0;
};
RangeSolve solve_through_range(const Mat& image, const Mat& rhs, const Tolerance& tol);

}  // namespace tvi
