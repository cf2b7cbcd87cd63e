#include "tvi/block.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace tvi {

namespace {

bool exactly_zero(const Mat& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

std::string idx(int j, int k) {
  std::ostringstream os;
  os << "(" << j << ", " << k << ")";
  return os.str();
}

void require_same_spaces(const BlockMatrix& a, const BlockMatrix& b, const char* op) {
  if (!(a.codomain() == b.codomain()) || !(a.domain() == b.domain()))
    throw ShapeError(std::string(op) + ": operand spaces differ");
}

}  // namespace

BlockMatrix::BlockMatrix(BlockSpace codomain, BlockSpace domain)
    : codomain_(std::move(codomain)), domain_(std::move(domain)) {
  if (!(codomain_.window() == domain_.window()))
    throw ShapeError("BlockMatrix: codomain and domain windows differ");
}

BlockMatrix BlockMatrix::identity(const BlockSpace& space) {
  BlockMatrix m(space, space);
  for (int k = space.window().lo; k <= space.window().hi; ++k)
    if (space.dim(k) > 0) m.set_block(k, k, Mat::Identity(space.dim(k), space.dim(k)));
  return m;
}

void BlockMatrix::set_block(int j, int k, Mat m) {
  if (!window().contains(j) || !window().contains(k))
    throw ShapeError("set_block: index " + idx(j, k) + " outside window");
  if (m.rows() != codomain_.dim(j) || m.cols() != domain_.dim(k))
    throw ShapeError("set_block: block " + idx(j, k) + " has shape " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(codomain_.dim(j)) + "x" + std::to_string(domain_.dim(k)));
  shape_cache_.reset();
  if (m.size() == 0) {
    blocks_.erase({j, k});
    return;
  }
  blocks_[{j, k}] = std::move(m);
}

void BlockMatrix::add_block(int j, int k, const Mat& m) {
  auto it = blocks_.find({j, k});
  if (it == blocks_.end()) {
    set_block(j, k, m);
  } else {
    if (m.rows() != it->second.rows() || m.cols() != it->second.cols())
      throw ShapeError("add_block: shape mismatch at " + idx(j, k));
    shape_cache_.reset();
    it->second += m;
  }
}

Mat BlockMatrix::block(int j, int k) const {
  auto it = blocks_.find({j, k});
  if (it != blocks_.end()) return it->second;
  return Mat::Zero(codomain_.dim(j), domain_.dim(k));
}

const Mat* BlockMatrix::find_block(int j, int k) const {
  auto it = blocks_.find({j, k});
  return it == blocks_.end() ? nullptr : &it->second;
}

Shape BlockMatrix::shape() const {
  if (shape_cache_) return *shape_cache_;
  bool below = false, diag = false, above = false;
  for (const auto& [jk, m] : blocks_) {
    if (exactly_zero(m)) continue;
    if (jk.first > jk.second)
      below = true;
    else if (jk.first == jk.second)
      diag = true;
    else
      above = true;
  }
  Shape s = Shape::general;
  if (!below) {
    if (!diag && above)
      s = Shape::strictly_upper;
    else if (!above)
      s = Shape::diagonal;  // includes the zero matrix
    else
      s = Shape::upper;
  }
  shape_cache_ = s;
  return s;
}

bool BlockMatrix::is_upper() const {
  Shape s = shape();
  return s == Shape::upper || s == Shape::strictly_upper || s == Shape::diagonal;
}

bool BlockMatrix::is_diagonal() const {
  Shape s = shape();
  return s == Shape::diagonal;
}

// ---- assembly / sections ---------------------------------------------------

Mat to_dense(const BlockMatrix& m) {
  Mat d = Mat::Zero(m.codomain().total(), m.domain().total());
  for (const auto& [jk, blk] : m.blocks())
    d.block(m.codomain().offset(jk.first), m.domain().offset(jk.second), blk.rows(), blk.cols()) =
        blk;
  return d;
}

BlockMatrix from_dense(const BlockSpace& codomain, const BlockSpace& domain, const Mat& dense) {
  if (dense.rows() != codomain.total() || dense.cols() != domain.total())
    throw ShapeError("from_dense: dense shape does not match spaces");
  BlockMatrix m(codomain, domain);
  const Window& w = codomain.window();
  for (int j = w.lo; j <= w.hi; ++j)
    for (int k = w.lo; k <= w.hi; ++k) {
      if (codomain.dim(j) == 0 || domain.dim(k) == 0) continue;
      Mat blk = dense.block(codomain.offset(j), domain.offset(k), codomain.dim(j), domain.dim(k));
      if (!exactly_zero(blk)) m.set_block(j, k, std::move(blk));
    }
  return m;
}

Mat finite_section(const BlockMatrix& m, int j, int k) {
  if (k < j) return Mat(0, 0);
  int rows = 0, cols = 0;
  for (int i = j; i <= k; ++i) {
    rows += m.codomain().dim(i);
    cols += m.domain().dim(i);
  }
  Mat d = Mat::Zero(rows, cols);
  int roff = m.codomain().offset(j), coff = m.domain().offset(j);
  for (const auto& [jk, blk] : m.blocks()) {
    if (jk.first < j || jk.first > k || jk.second < j || jk.second > k) continue;
    d.block(m.codomain().offset(jk.first) - roff, m.domain().offset(jk.second) - coff, blk.rows(),
            blk.cols()) = blk;
  }
  return d;
}

double op_norm(const BlockMatrix& m) { return op_norm(to_dense(m)); }

BlockMatrix reframe_to_window(const BlockMatrix& m, Window w) {
  const Window old = m.window();
  for (int k = old.lo; k <= old.hi; ++k) {
    if (!w.contains(k) && (m.codomain().dim(k) != 0 || m.domain().dim(k) != 0))
      throw ShapeError("reframe_to_window: dropped index has nonzero dimension");
  }
  std::vector<int> cod(static_cast<size_t>(w.width()), 0);
  std::vector<int> dom(static_cast<size_t>(w.width()), 0);
  for (int k = w.lo; k <= w.hi; ++k) {
    cod[static_cast<size_t>(k - w.lo)] = m.codomain().dim(k);
    dom[static_cast<size_t>(k - w.lo)] = m.domain().dim(k);
  }
  BlockMatrix out(BlockSpace(w, std::move(cod)), BlockSpace(w, std::move(dom)));
  for (const auto& [jk, blk] : m.blocks()) {
    if (w.contains(jk.first) && w.contains(jk.second)) out.set_block(jk.first, jk.second, blk);
  }
  return out;
}

BlockMatrix trim_zero_boundary(const BlockMatrix& m) {
  const Window old = m.window();
  auto unused = [&](int k) { return m.codomain().dim(k) == 0 && m.domain().dim(k) == 0; };
  int lo = old.lo, hi = old.hi;
  while (lo < hi && unused(lo)) ++lo;
  while (hi > lo && unused(hi)) --hi;
  if (lo == old.lo && hi == old.hi) return m;
  return reframe_to_window(m, Window{lo, hi});
}

bool upper_support(const BlockMatrix& m) {
  Shape s = m.shape();
  return s == Shape::upper || s == Shape::strictly_upper || s == Shape::diagonal;
}

bool strictly_upper_support(const BlockMatrix& m) {
  for (const auto& [jk, blk] : m.blocks())
    if (jk.first >= jk.second && !exactly_zero(blk)) return false;
  return true;
}

// ---- algebra ---------------------------------------------------------------

BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b) {
  if (!(a.domain() == b.codomain()))
    throw ShapeError("multiply: inner spaces do not match");
  BlockMatrix c(a.codomain(), b.domain());
  // Structural product: only pairs of *stored* blocks contribute, so the
  // support of a product of strictly upper matrices genuinely shrinks.
  std::map<int, std::vector<std::pair<int, const Mat*>>> b_rows;
  for (const auto& [jk, blk] : b.blocks()) b_rows[jk.first].push_back({jk.second, &blk});
  for (const auto& [jm, ablk] : a.blocks()) {
    auto it = b_rows.find(jm.second);
    if (it == b_rows.end()) continue;
    for (const auto& [k, bblk] : it->second) c.add_block(jm.first, k, ablk * (*bblk));
  }
  return c;
}

BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_spaces(a, b, "add");
  BlockMatrix c = a;
  for (const auto& [jk, blk] : b.blocks()) c.add_block(jk.first, jk.second, blk);
  return c;
}

BlockMatrix subtract(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_spaces(a, b, "subtract");
  BlockMatrix c = a;
  for (const auto& [jk, blk] : b.blocks()) c.add_block(jk.first, jk.second, -blk);
  return c;
}

BlockMatrix scale(const Complex& s, const BlockMatrix& a) {
  BlockMatrix c(a.codomain(), a.domain());
  for (const auto& [jk, blk] : a.blocks()) c.set_block(jk.first, jk.second, s * blk);
  return c;
}

BlockMatrix adjoint(const BlockMatrix& a) {
  BlockMatrix c(a.domain(), a.codomain());
  for (const auto& [jk, blk] : a.blocks()) c.set_block(jk.second, jk.first, blk.adjoint());
  return c;
}

BlockMatrix real_part(const BlockMatrix& m) {
  if (!m.is_square()) throw ShapeError("real_part: matrix not square");
  return scale(0.5, add(m, adjoint(m)));
}

BlockMatrix neumann_inverse_of_id_minus(const BlockMatrix& n) {
  if (!n.is_square()) throw ShapeError("neumann_inverse_of_id_minus: matrix not square");
  if (!strictly_upper_support(n))
    throw ShapeError("neumann_inverse_of_id_minus: matrix has support on or below the diagonal");
  BlockMatrix sum = BlockMatrix::identity(n.domain());
  BlockMatrix power = BlockMatrix::identity(n.domain());
  for (int m = 1; m < n.window().width(); ++m) {
    power = multiply(power, n);
    if (power.blocks().empty()) break;
    sum = add(sum, power);
  }
  return sum;
}

BlockMatrix project_strictly_upper(const BlockMatrix& m, double max_discard) {
  BlockMatrix r(m.codomain(), m.domain());
  for (const auto& [jk, blk] : m.blocks()) {
    if (jk.first < jk.second) {
      r.set_block(jk.first, jk.second, blk);
    } else if (!exactly_zero(blk)) {
      double n = op_norm(blk);
      if (n > max_discard)
        throw NumericError("project_strictly_upper: block " + idx(jk.first, jk.second) +
                           " of norm " + std::to_string(n) + " is not negligible");
    }
  }
  return r;
}

BlockMatrix invert_upper(const BlockMatrix& m, const Tolerance& tol) {
  if (!m.is_square()) throw ShapeError("invert_upper: matrix not square");
  if (!m.is_upper()) throw ShapeError("invert_upper: matrix not upper triangular");
  const Window& w = m.window();
  BlockMatrix r(m.domain(), m.codomain());
  std::map<int, Mat> diag_inv;
  for (int k = w.lo; k <= w.hi; ++k) {
    if (m.domain().dim(k) == 0) continue;
    Mat d = m.block(k, k);
    if (smallest_singular_value(d) <= tol.rank)
      throw NumericError("invert_upper: diagonal block at index " + std::to_string(k) +
                         " is singular");
    diag_inv[k] = d.partialPivLu().inverse();
  }
  // Back-substitution: R_{k,k} = M_{k,k}^{-1};
  // R_{j,k} = -M_{j,j}^{-1} sum_{m=j+1..k} M_{j,m} R_{m,k}.
  for (int k = w.hi; k >= w.lo; --k) {
    if (m.domain().dim(k) == 0) continue;
    r.set_block(k, k, diag_inv[k]);
    for (int j = k - 1; j >= w.lo; --j) {
      if (m.domain().dim(j) == 0) continue;
      Mat acc = Mat::Zero(m.domain().dim(j), m.domain().dim(k));
      bool any = false;
      for (int mm = j + 1; mm <= k; ++mm) {
        const Mat* a = m.find_block(j, mm);
        const Mat* b = r.find_block(mm, k);
        if (a && b) {
          acc += (*a) * (*b);
          any = true;
        }
      }
      if (any && !exactly_zero(acc)) r.set_block(j, k, -diag_inv[j] * acc);
    }
  }
  return r;
}

bool is_nonnegative(const BlockMatrix& m, const Tolerance& tol) {
  if (!m.is_square()) throw ShapeError("is_nonnegative: matrix not square");
  Mat d = to_dense(m);
  if (!is_hermitian(d, tol.eq)) throw ShapeError("is_nonnegative: matrix not hermitian");
  return min_eigenvalue_hermitian(d) >= -tol.psd;
}

// ---- columns ---------------------------------------------------------------

Mat column_operator(const BlockMatrix& m, int k) {
  Mat col = Mat::Zero(m.codomain().total(), m.domain().dim(k));
  for (int j = m.window().lo; j <= m.window().hi; ++j) {
    const Mat* blk = m.find_block(j, k);
    if (blk) col.middleRows(m.codomain().offset(j), blk->rows()) = *blk;
  }
  return col;
}

ColumnReport is_column_contractive(const BlockMatrix& m, const Tolerance& tol) {
  ColumnReport rep;
  for (int k = m.window().lo; k <= m.window().hi; ++k) {
    double n = op_norm(column_operator(m, k));
    rep.norms.push_back(n);
    rep.max_norm = std::max(rep.max_norm, n);
    if (n > 1.0 + tol.psd) rep.contractive = false;
  }
  return rep;
}

BlockMatrix column_gram(const BlockMatrix& m) {
  Mat d = to_dense(m);
  return from_dense(m.domain(), m.domain(), d.adjoint() * d);
}

double diff_norm(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_spaces(a, b, "diff_norm");
  return op_norm(subtract(a, b));
}

}  // namespace tvi
