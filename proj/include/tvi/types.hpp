// Basic index / space / tolerance types shared by every module.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvi {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Thrown when operands have inconsistent shapes, windows or structure.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical precondition fails (not PSD, not contractive,
/// singular diagonal block, inconsistent data, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerance knobs used throughout.
///  - rank: singular values below this count as zero (rank / invertibility).
///  - psd:  eigenvalues above -psd count as non-negative; norms up to 1+psd
///          count as contractive.
///  - eq:   residual threshold for operator identities.
struct Tolerance {
  double rank = 1e-10;
  double psd = 1e-10;
  double eq = 1e-8;
};

/// Closed block-index interval [lo, hi]; lo > hi encodes the empty window.
/// All spaces are zero-dimensional outside the window.
struct Window {
  int lo = 0;
  int hi = -1;

  int width() const { return hi < lo ? 0 : hi - lo + 1; }
  bool empty() const { return hi < lo; }
  bool contains(int k) const { return k >= lo && k <= hi; }

  friend bool operator==(const Window&, const Window&) = default;
};

/// A direct sum of finite-dimensional spaces indexed over a window.
/// dim(k) = 0 for k outside the window; zero dims inside are allowed.
class BlockSpace {
 public:
  BlockSpace() = default;
  BlockSpace(Window w, std::vector<int> dims) : window_(w), dims_(std::move(dims)) {
    if (static_cast<int>(dims_.size()) != window_.width())
      throw ShapeError("BlockSpace: dims size does not match window width");
    for (int d : dims_)
      if (d < 0) throw ShapeError("BlockSpace: negative dimension");
  }

  /// Same dimension at every index of the window.
  static BlockSpace constant(Window w, int dim) {
    return BlockSpace(w, std::vector<int>(static_cast<size_t>(w.width()), dim));
  }

  const Window& window() const { return window_; }
  int dim(int k) const { return window_.contains(k) ? dims_[static_cast<size_t>(k - window_.lo)] : 0; }
  int total() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

  /// Offset of block k within the stacked (dense) coordinate vector.
  int offset(int k) const {
    int off = 0;
    for (int j = window_.lo; j < k; ++j) off += dim(j);
    return off;
  }

  const std::vector<int>& dims() const { return dims_; }

  friend bool operator==(const BlockSpace&, const BlockSpace&) = default;

 private:
  Window window_;
  std::vector<int> dims_;
};

/// A subspace of C^ambient given by an orthonormal basis (ambient x dim).
/// dim may be 0 (zero subspace) and ambient may be 0.
struct Subspace {
  int ambient = 0;
  Mat basis;  // ambient x dim, orthonormal columns

  Subspace() : basis(0, 0) {}
  Subspace(int amb, Mat b) : ambient(amb), basis(std::move(b)) {
    if (basis.rows() != ambient) throw ShapeError("Subspace: basis rows != ambient dim");
  }

  static Subspace zero(int ambient) { return Subspace(ambient, Mat::Zero(ambient, 0)); }
  static Subspace full(int ambient) { return Subspace(ambient, Mat::Identity(ambient, ambient)); }

  int dim() const { return static_cast<int>(basis.cols()); }
  bool is_full() const { return dim() == ambient; }

  /// Orthogonal projector onto the subspace (ambient x ambient).
  Mat projector() const { return basis * basis.adjoint(); }
};

}  // namespace tvi
