// Block operator matrices over a finite index window.
//
// A BlockMatrix maps a domain BlockSpace to a codomain BlockSpace sharing the
// same window; block (j, k) is a dense dim(Y_j) x dim(U_k) complex matrix.
// Absent blocks are structural zeros: products only sum over stored blocks,
// so powers of strictly upper matrices vanish exactly once the support runs
// out (no rounding involved).
#pragma once

#include <map>
#include <optional>
#include <utility>

#include "tvi/dense.hpp"
#include "tvi/types.hpp"

namespace tvi {

enum class Shape { general, upper, strictly_upper, diagonal };

class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(BlockSpace codomain, BlockSpace domain);

  static BlockMatrix zero(const BlockSpace& codomain, const BlockSpace& domain) {
    return BlockMatrix(codomain, domain);
  }
  static BlockMatrix identity(const BlockSpace& space);

  const BlockSpace& codomain() const { return codomain_; }
  const BlockSpace& domain() const { return domain_; }
  const Window& window() const { return codomain_.window(); }

  /// Store block (j, k); the shape must match the spaces. Storing an empty
  /// (zero-dim) block is a no-op.
  void set_block(int j, int k, Mat m);
  /// Add to block (j, k), creating it when absent.
  void add_block(int j, int k, const Mat& m);

  bool has_block(int j, int k) const { return blocks_.count({j, k}) != 0; }
  /// Block (j, k), materializing zeros for absent blocks.
  Mat block(int j, int k) const;
  /// Stored block or nullptr (no zero materialization).
  const Mat* find_block(int j, int k) const;

  const std::map<std::pair<int, int>, Mat>& blocks() const { return blocks_; }

  /// Structural classification; stored blocks that are exactly zero count as
  /// zero. Cached until the next mutation.
  Shape shape() const;
  bool is_upper() const;
  bool is_strictly_upper() const { return shape() == Shape::strictly_upper; }
  bool is_diagonal() const;
  bool is_square() const { return codomain_ == domain_; }

 private:
  BlockSpace codomain_, domain_;
  std::map<std::pair<int, int>, Mat> blocks_;
  mutable std::optional<Shape> shape_cache_;
};

// ---- assembly / sections ---------------------------------------------------

/// Dense matrix of the whole window (codomain.total() x domain.total()).
Mat to_dense(const BlockMatrix& m);

/// Re-block a dense matrix over the given spaces. Blocks that are exactly
/// zero are not stored, so structural classification survives the roundtrip.
BlockMatrix from_dense(const BlockSpace& codomain, const BlockSpace& domain, const Mat& dense);

/// Finite section: the dense submatrix using block rows and columns j..k.
Mat finite_section(const BlockMatrix& m, int j, int k);

/// The same operator presented over a different window: indices entering the
/// window carry dimension zero, and indices leaving it must already have
/// dimension zero on both sides (ShapeError otherwise).
BlockMatrix reframe_to_window(const BlockMatrix& m, Window w);

/// Copy with zero-dimensional boundary indices dropped from the window. At
/// least one index is kept, so a matrix with no nonzero-dimensional index
/// shrinks to a single slot.
BlockMatrix trim_zero_boundary(const BlockMatrix& m);

/// Operator norm of the full window section.
double op_norm(const BlockMatrix& m);

/// True iff every nonzero stored block sits on or above the diagonal.
bool upper_support(const BlockMatrix& m);
/// True iff every nonzero stored block sits strictly above the diagonal
/// (in particular true for the zero matrix).
bool strictly_upper_support(const BlockMatrix& m);

// ---- algebra ---------------------------------------------------------------

BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix subtract(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix scale(const Complex& s, const BlockMatrix& a);
BlockMatrix adjoint(const BlockMatrix& a);

inline BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b) { return multiply(a, b); }
inline BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b) { return add(a, b); }
inline BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b) { return subtract(a, b); }

/// Hermitian real part (m + m*)/2 of a square block matrix.
BlockMatrix real_part(const BlockMatrix& m);

/// (I - n)^{-1} for n with strictly upper support, via the finite Neumann
/// sum I + n + n^2 + ... (exact: powers run out of support).
BlockMatrix neumann_inverse_of_id_minus(const BlockMatrix& n);

/// Copy with all stored blocks on or below the diagonal removed. Removing a
/// block of norm > max_discard raises NumericError (the input was not close
/// to strictly upper).
BlockMatrix project_strictly_upper(const BlockMatrix& m, double max_discard);

/// Inverse of an upper triangular block matrix by block back-substitution.
/// Every diagonal block must be invertible (smallest singular value
/// > tol.rank); otherwise NumericError names the offending index.
BlockMatrix invert_upper(const BlockMatrix& m, const Tolerance& tol);

/// PSD test on the full window section. The input must be hermitian within
/// tol.eq (ShapeError otherwise); returns min eigenvalue >= -tol.psd.
bool is_nonnegative(const BlockMatrix& m, const Tolerance& tol);

// ---- columns ---------------------------------------------------------------

/// Column k stacked over all block rows of the window
/// (codomain.total() x domain.dim(k)).
Mat column_operator(const BlockMatrix& m, int k);

struct ColumnReport {
  bool contractive = true;
  std::vector<double> norms;  // per window index
  double max_norm = 0.0;
};

/// Columnwise contraction test: every stacked column has norm <= 1 + tol.psd.
ColumnReport is_column_contractive(const BlockMatrix& m, const Tolerance& tol);

/// Gram matrix [ (H_j)* H_k ] of the stacked columns, re-blocked over the
/// domain space (hermitian, generally full).
BlockMatrix column_gram(const BlockMatrix& m);

/// Operator norm of the difference (shapes must agree).
double diff_norm(const BlockMatrix& a, const BlockMatrix& b);

}  // namespace tvi
