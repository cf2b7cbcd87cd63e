#include "tvi/majorant.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tvi/dense.hpp"

namespace tvi {

DefectData defect_data(const BlockMatrix& h, const Tolerance& tol) {
  // Only the domain dimensions matter here; the operator may well map into a
  // codomain of different block sizes, as long as both share one window.
  if (h.domain().window() != h.codomain().window())
    throw ShapeError("defect_data: domain and codomain windows differ");
  const BlockSpace& u = h.domain();
  const Window w = u.window();

  DefectData dd;
  dd.ops.reserve(static_cast<size_t>(w.width()));
  dd.spaces.reserve(static_cast<size_t>(w.width()));
  std::vector<int> ranks(static_cast<size_t>(w.width()), 0);

  // Allow a little extra slack below zero when clamping I - H_k* H_k: a
  // column of norm 1 + tol.psd pushes the smallest eigenvalue to about
  // -2 tol.psd, which is still acceptable here.
  Tolerance sqrt_tol = tol;
  sqrt_tol.psd = 3.0 * tol.psd;

  std::vector<Mat> bases;
  bases.reserve(static_cast<size_t>(w.width()));
  for (int k = w.lo; k <= w.hi; ++k) {
    const Mat col = column_operator(h, k);
    const double norm = op_norm(col);
    if (norm > 1.0 + tol.psd) {
      std::ostringstream msg;
      msg << "defect_data: column " << k << " has norm " << norm << " > 1";
      throw NumericError(msg.str());
    }
    const int uk = u.dim(k);
    const Mat defect_sq = Mat::Identity(uk, uk) - col.adjoint() * col;
    const Mat d = hermitian_sqrt_psd(defect_sq, sqrt_tol);
    const Subspace range = range_subspace(d, tol);
    ranks[static_cast<size_t>(k - w.lo)] = range.dim();
    dd.ops.push_back(d);
    dd.spaces.push_back(range);
    bases.push_back(range.basis);
  }

  dd.coords = BlockSpace(w, ranks);
  dd.weight = BlockMatrix(dd.coords, dd.coords);
  dd.proj = BlockMatrix(dd.coords, u);
  for (int k = w.lo; k <= w.hi; ++k) {
    const Mat& q = bases[static_cast<size_t>(k - w.lo)];
    dd.weight.set_block(k, k, q.adjoint() * dd.op(k) * q);
    dd.proj.set_block(k, k, q.adjoint());
  }
  return dd;
}

BlockMatrix gram_upper_form(const BlockMatrix& h) {
  const BlockMatrix gram = column_gram(h);
  BlockMatrix n(gram.codomain(), gram.domain());
  for (const auto& [jk, blk] : gram.blocks())
    if (jk.first <= jk.second) n.set_block(jk.first, jk.second, blk);
  return n;
}

BlockMatrix gram_strict_upper(const BlockMatrix& h) {
  const BlockMatrix gram = column_gram(h);
  BlockMatrix n(gram.codomain(), gram.domain());
  for (const auto& [jk, blk] : gram.blocks())
    if (jk.first < jk.second) n.set_block(jk.first, jk.second, blk);
  return n;
}

BlockMatrix gram_analytic_form(const BlockMatrix& h) {
  const BlockMatrix gram = column_gram(h);
  BlockMatrix v(gram.codomain(), gram.domain());
  for (const auto& [jk, blk] : gram.blocks()) {
    if (jk.first < jk.second)
      v.set_block(jk.first, jk.second, 2.0 * blk);
    else if (jk.first == jk.second)
      v.set_block(jk.first, jk.second, blk);
  }
  return v;
}

BlockMatrix cayley(const BlockMatrix& c) {
  if (!strictly_upper_support(c))
    throw ShapeError("cayley: transform argument must be strictly upper");
  const BlockMatrix resolvent = neumann_inverse_of_id_minus(c);
  return add(resolvent, multiply(c, resolvent));  // (I + C)(I - C)^{-1}
}

BlockMatrix inverse_cayley(const BlockMatrix& k, const Tolerance& tol) {
  if (!k.is_square()) throw ShapeError("inverse_cayley: argument must be square");
  if (!upper_support(k)) throw ShapeError("inverse_cayley: argument must be upper");
  const Window w = k.domain().window();
  for (int j = w.lo; j <= w.hi; ++j) {
    const int d = k.domain().dim(j);
    if (d == 0) continue;
    const double gap = (k.block(j, j) - Mat::Identity(d, d)).norm();
    if (gap > tol.eq) {
      std::ostringstream msg;
      msg << "inverse_cayley: diagonal block " << j << " differs from the identity by " << gap;
      throw NumericError(msg.str());
    }
  }
  if (!is_nonnegative(real_part(k), tol))
    throw NumericError("inverse_cayley: real part is not non-negative");
  const BlockMatrix id = BlockMatrix::identity(k.domain());
  const BlockMatrix inv = invert_upper(add(k, id), tol);
  return project_strictly_upper(multiply(subtract(k, id), inv), 2.0 * tol.eq);
}

namespace {

// Pi* nabla M nabla Pi for a square M on the defect coordinate space.
BlockMatrix conjugate_by_defects(const DefectData& dd, const BlockMatrix& m) {
  const BlockMatrix proj_adj = adjoint(dd.proj);
  return multiply(proj_adj,
                  multiply(dd.weight, multiply(m, multiply(dd.weight, dd.proj))));
}

void require_parameter_shape(const DefectData& dd, const BlockMatrix& c, const char* who) {
  if (!(c.domain() == dd.coords) || !(c.codomain() == dd.coords))
    throw ShapeError(std::string(who) + ": transform does not act on the defect coordinates");
  if (!strictly_upper_support(c))
    throw ShapeError(std::string(who) + ": transform must be strictly upper");
}

}  // namespace

BlockMatrix harmonic_majorant(const BlockMatrix& h, const BlockMatrix& c, const Tolerance& tol) {
  const DefectData dd = defect_data(h, tol);
  require_parameter_shape(dd, c, "harmonic_majorant");
  return add(gram_analytic_form(h), conjugate_by_defects(dd, cayley(c)));
}

BlockMatrix parameter_from_majorant(const BlockMatrix& w, const BlockMatrix& h,
                                    const Tolerance& tol) {
  if (!w.is_square() || !(w.domain() == h.domain()))
    throw ShapeError("parameter_from_majorant: majorant does not act on the column space");
  if (!upper_support(w)) throw ShapeError("parameter_from_majorant: majorant must be upper");
  const DefectData dd = defect_data(h, tol);
  const Window win = w.domain().window();
  for (int j = win.lo; j <= win.hi; ++j) {
    const int d = w.domain().dim(j);
    if (d == 0) continue;
    const double gap = (w.block(j, j) - Mat::Identity(d, d)).norm();
    if (gap > tol.eq) {
      std::ostringstream msg;
      msg << "parameter_from_majorant: diagonal block " << j
          << " differs from the identity by " << gap;
      throw NumericError(msg.str());
    }
  }

  const BlockMatrix shift = subtract(w, gram_analytic_form(h));
  BlockMatrix k(dd.coords, dd.coords);
  std::vector<Mat> weight_inv(static_cast<size_t>(win.width()));
  for (int j = win.lo; j <= win.hi; ++j) {
    const Mat& s = dd.weight.block(j, j);
    weight_inv[static_cast<size_t>(j - win.lo)] =
        s.rows() > 0 ? Mat(s.partialPivLu().inverse()) : s;
  }
  for (const auto& [jk, blk] : shift.blocks()) {
    const auto [j, kk] = jk;
    const Mat& qj = dd.space(j).basis;
    const Mat& qk = dd.space(kk).basis;
    const double scale = std::max(1.0, blk.norm());
    const double row_leak = (blk - qj * (qj.adjoint() * blk)).norm();
    const double col_leak = (blk - (blk * qk) * qk.adjoint()).norm();
    if (row_leak > tol.eq * scale || col_leak > tol.eq * scale) {
      std::ostringstream msg;
      msg << "parameter_from_majorant: block (" << j << ", " << kk
          << ") of the shifted majorant is not supported on the defect spaces";
      throw NumericError(msg.str());
    }
    k.set_block(j, kk,
                weight_inv[static_cast<size_t>(j - win.lo)] * (qj.adjoint() * blk * qk) *
                    weight_inv[static_cast<size_t>(kk - win.lo)]);
  }
  return inverse_cayley(k, tol);
}

BlockMatrix resolvent_from_parameter(const BlockMatrix& h, const BlockMatrix& c,
                                     const Tolerance& tol) {
  const DefectData dd = defect_data(h, tol);
  require_parameter_shape(dd, c, "resolvent_from_parameter");
  return add(gram_upper_form(h), conjugate_by_defects(dd, neumann_inverse_of_id_minus(c)));
}

Mat StateSpaceSystem::b_col(int k) const {
  const BlockSpace& u = in_space();
  return b.middleCols(u.offset(k), u.dim(k));
}

Mat lyapunov_solve(const Mat& a, const Mat& e, const Tolerance& tol) {
  if (a.rows() != a.cols()) throw ShapeError("lyapunov_solve: state matrix must be square");
  if (e.cols() != a.rows()) throw ShapeError("lyapunov_solve: output matrix size mismatch");
  const double rho = spectral_radius(a);
  if (rho >= 1.0 - tol.rank) {
    std::ostringstream msg;
    msg << "lyapunov_solve: spectral radius " << rho << " is not below 1";
    throw NumericError(msg.str());
  }
  Mat p = e.adjoint() * e;
  Mat m = a;
  for (int iter = 0; iter < 128; ++iter) {
    const double mn = op_norm(m);
    if (mn * mn * (1.0 + op_norm(p)) < 1e-18) break;
    p = (p + m.adjoint() * p * m).eval();
    m = (m * m).eval();
  }
  const double residual = (p - a.adjoint() * p * a - e.adjoint() * e).norm();
  if (residual > tol.eq * (1.0 + p.norm())) {
    std::ostringstream msg;
    msg << "lyapunov_solve: series did not converge (residual " << residual << ")";
    throw NumericError(msg.str());
  }
  return p;
}

StateSpaceSystem make_state_space(Mat a, Mat b, Mat e, BlockMatrix d, const Tolerance& tol) {
  if (a.rows() != a.cols()) throw ShapeError("make_state_space: state matrix must be square");
  if (b.rows() != a.rows()) throw ShapeError("make_state_space: input matrix size mismatch");
  if (e.cols() != a.rows()) throw ShapeError("make_state_space: output matrix size mismatch");
  if (!upper_support(d)) throw ShapeError("make_state_space: feedthrough must be upper");
  if (d.domain().window().lo != 1)
    throw ShapeError("make_state_space: feedthrough window must start at 1");
  if (b.cols() != d.domain().total())
    throw ShapeError("make_state_space: input matrix columns must match the input space");
  StateSpaceSystem sys;
  sys.p = lyapunov_solve(a, e, tol);
  sys.a = std::move(a);
  sys.b = std::move(b);
  sys.e = std::move(e);
  sys.d = std::move(d);
  return sys;
}

BlockMatrix state_space_gram(const StateSpaceSystem& sys) {
  const Mat dense_d = to_dense(sys.d);
  const Mat gram = dense_d.adjoint() * dense_d + sys.b.adjoint() * sys.p * sys.b;
  return from_dense(sys.in_space(), sys.in_space(), gram);
}

StateSpaceRealization state_space_to_H(const StateSpaceSystem& sys, int depth,
                                       const Tolerance& tol) {
  if (depth < 1) throw ShapeError("state_space_to_H: depth must be positive");
  const BlockSpace& u = sys.in_space();
  const int n = u.window().hi;
  const Window w{-depth, n};

  std::vector<int> row_dims(static_cast<size_t>(w.width()), 0);
  std::vector<int> col_dims(static_cast<size_t>(w.width()), 0);
  const int m = static_cast<int>(sys.e.rows());
  for (int j = w.lo; j <= w.hi; ++j) {
    if (j < 0) row_dims[static_cast<size_t>(j - w.lo)] = m;
    if (j >= 1) {
      row_dims[static_cast<size_t>(j - w.lo)] = sys.d.codomain().dim(j);
      col_dims[static_cast<size_t>(j - w.lo)] = u.dim(j);
    }
  }
  StateSpaceRealization out;
  out.h = BlockMatrix(BlockSpace(w, row_dims), BlockSpace(w, col_dims));
  for (const auto& [jk, blk] : sys.d.blocks()) out.h.set_block(jk.first, jk.second, blk);

  Mat acc = Mat::Identity(sys.a.rows(), sys.a.cols());  // A^{t-1} when filling row -t
  double last_power_norm = op_norm(acc);
  for (int t = 1; t <= depth; ++t) {
    for (int k = 1; k <= n; ++k) {
      if (u.dim(k) == 0) continue;
      out.h.set_block(-t, k, sys.e * acc * sys.b_col(k));
    }
    acc = (acc * sys.a).eval();
    last_power_norm = op_norm(acc);
    if (last_power_norm < tol.rank) {
      out.truncation_converged = true;
      break;
    }
  }
  if (!out.truncation_converged) out.truncation_converged = last_power_norm < tol.rank;

  const double a_norm = op_norm(sys.a);
  if (a_norm < 1.0)
    out.tail_bound = op_norm(sys.e) * op_norm(sys.b) * last_power_norm / (1.0 - a_norm);
  else
    out.tail_bound = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace tvi
