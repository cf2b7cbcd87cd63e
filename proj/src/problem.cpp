#include "tvi/problem.hpp"

#include <sstream>

namespace tvi {

namespace {

bool exactly_zero(const Mat& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

/// Dense vertical stack [top; bottom] of two block matrices with a common
/// domain, used for the joint contraction test.
Mat stack_dense(const BlockMatrix& top, const BlockMatrix& bottom) {
  Mat t = to_dense(top), b = to_dense(bottom);
  Mat s(t.rows() + b.rows(), t.cols());
  s << t, b;
  return s;
}

}  // namespace

DataReport validate_data(const InterpolationData& data, const Tolerance& tol) {
  DataReport rep;
  auto complain = [&rep](int k, const std::string& what) {
    std::ostringstream os;
    os << "index " << k << ": " << what;
    rep.problems.push_back(os.str());
    rep.ok = false;
  };
  if (static_cast<int>(data.cols.size()) != data.window.width()) {
    rep.ok = false;
    rep.problems.push_back("constraint count does not match window width");
    return rep;
  }
  if (!(data.in_space.window() == data.window) || !(data.out_space.window() == data.window)) {
    rep.ok = false;
    rep.problems.push_back("space windows do not match the data window");
    return rep;
  }
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const ColumnConstraint& c = data.at(k);
    const int u = data.in_space.dim(k), y = data.out_space.dim(k);
    const int uprev = data.in_space.dim(k - 1);
    const int r = c.space.dim();
    if (c.space.ambient != u) complain(k, "subspace ambient dim != input dim");
    if (c.to_output.rows() != y || c.to_output.cols() != r)
      complain(k, "to_output has wrong shape");
    if (c.to_prev.rows() != uprev || c.to_prev.cols() != r)
      complain(k, "to_prev has wrong shape");
    if (r > 0 && op_norm(c.space.basis.adjoint() * c.space.basis - Mat::Identity(r, r)) > tol.eq)
      complain(k, "subspace basis not orthonormal");
    Mat stacked(y + uprev, r);
    if (c.to_output.rows() == y && c.to_prev.rows() == uprev && c.to_output.cols() == r &&
        c.to_prev.cols() == r) {
      stacked << c.to_output, c.to_prev;
      double n = op_norm(stacked);
      rep.omega_norms.push_back(n);
      if (n > 1.0 + tol.psd) {
        std::ostringstream os;
        os << "omega not contractive (norm " << n << ")";
        complain(k, os.str());
      }
    } else {
      rep.omega_norms.push_back(0.0);
    }
  }
  return rep;
}

StructuredData build_structured(const InterpolationData& data) {
  StructuredData s;
  std::vector<int> rdims;
  for (int k = data.window.lo; k <= data.window.hi; ++k) rdims.push_back(data.at(k).space.dim());
  s.f_space = BlockSpace(data.window, rdims);
  s.e = BlockMatrix(data.in_space, s.f_space);
  s.omega_out = BlockMatrix(data.out_space, s.f_space);
  s.omega_prev = BlockMatrix(data.in_space, s.f_space);
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const ColumnConstraint& c = data.at(k);
    if (c.space.dim() == 0) continue;
    s.e.set_block(k, k, c.space.basis);
    if (!exactly_zero(c.to_output)) s.omega_out.set_block(k, k, c.to_output);
    if (data.window.contains(k - 1) && !exactly_zero(c.to_prev))
      s.omega_prev.set_block(k - 1, k, c.to_prev);
  }
  return s;
}

InterpolationReport check_interpolation(const BlockMatrix& h, const InterpolationData& data,
                                        const Tolerance& tol) {
  if (!(h.domain() == data.in_space) || !(h.codomain() == data.out_space))
    throw ShapeError("check_interpolation: H spaces do not match the data");
  InterpolationReport rep;
  StructuredData s = build_structured(data);
  // Operator identity H E = OmegaOut + H OmegaPrev.
  BlockMatrix lhs = multiply(h, s.e);
  BlockMatrix rhs = add(s.omega_out, multiply(h, s.omega_prev));
  rep.identity_residual = diff_norm(lhs, rhs);
  rep.interpolation_ok = rep.identity_residual <= tol.eq;
  // Entrywise residuals for diagnostics.
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const ColumnConstraint& c = data.at(k);
    if (c.space.dim() == 0) continue;
    rep.entries.push_back(
        {k, k, op_norm(h.block(k, k) * c.space.basis - c.to_output)});
    for (int j = data.window.lo; j < k; ++j) {
      Mat lhs_jk = h.block(j, k) * c.space.basis;
      Mat rhs_jk = h.block(j, k - 1) * c.to_prev;
      rep.entries.push_back({j, k, op_norm(lhs_jk - rhs_jk)});
    }
  }
  rep.columns = is_column_contractive(h, tol);
  return rep;
}

PairReport check_pair(const SchurPair& pair, const InterpolationData& data, const Tolerance& tol) {
  if (!(pair.top.domain() == data.in_space) || !(pair.top.codomain() == data.out_space) ||
      !(pair.bottom.domain() == data.in_space) || !(pair.bottom.codomain() == data.in_space))
    throw ShapeError("check_pair: pair spaces do not match the data");
  PairReport rep;
  rep.stacked_norm = op_norm(stack_dense(pair.top, pair.bottom));
  rep.contractive = rep.stacked_norm <= 1.0 + tol.psd;
  StructuredData s = build_structured(data);
  rep.residual_out = diff_norm(multiply(pair.top, s.e), s.omega_out);
  rep.residual_prev = diff_norm(multiply(pair.bottom, s.e), s.omega_prev);
  rep.ok = rep.contractive && rep.residual_out <= tol.eq && rep.residual_prev <= tol.eq &&
           upper_support(pair.top) && strictly_upper_support(pair.bottom);
  return rep;
}

Realization construct(const SchurPair& pair) {
  if (!upper_support(pair.top)) throw ShapeError("construct: top part not upper triangular");
  if (!strictly_upper_support(pair.bottom))
    throw ShapeError("construct: bottom part not strictly upper triangular");
  Realization r;
  // (I - bottom)^{-1} is the finite Neumann sum of the nilpotent part.
  r.resolvent = neumann_inverse_of_id_minus(pair.bottom);
  r.solution = multiply(pair.top, r.resolvent);
  return r;
}

SchurPair recover_pair(const BlockMatrix& solution, const BlockMatrix& resolvent,
                       const Tolerance& tol) {
  if (!(solution.domain() == resolvent.domain()) || !resolvent.is_square())
    throw ShapeError("recover_pair: inconsistent spaces");
  if (!upper_support(resolvent)) throw ShapeError("recover_pair: resolvent not upper triangular");
  if (!upper_support(solution)) throw ShapeError("recover_pair: solution not upper triangular");
  const BlockSpace& u = resolvent.domain();
  for (int k = u.window().lo; k <= u.window().hi; ++k) {
    if (u.dim(k) == 0) continue;
    double dev = op_norm(resolvent.block(k, k) - Mat::Identity(u.dim(k), u.dim(k)));
    if (dev > tol.eq)
      throw NumericError("recover_pair: resolvent diagonal at index " + std::to_string(k) +
                         " differs from identity by " + std::to_string(dev));
  }
  // Majorant inequality F + F* >= H*H + I.
  Mat f = to_dense(resolvent);
  Mat h = to_dense(solution);
  Mat gap = f + f.adjoint() - h.adjoint() * h - Mat::Identity(f.rows(), f.cols());
  double margin = min_eigenvalue_hermitian(gap);
  if (margin < -tol.psd)
    throw NumericError("recover_pair: majorant inequality violated (margin " +
                       std::to_string(margin) + ")");
  BlockMatrix finv = invert_upper(resolvent, tol);
  SchurPair pair;
  pair.top = multiply(solution, finv);
  // F^{-1} has diagonal within tol.eq of the identity (checked above), so
  // I - F^{-1} is strictly upper up to a discardable diagonal residue.
  pair.bottom = project_strictly_upper(subtract(BlockMatrix::identity(u), finv), 2.0 * tol.eq);
  return pair;
}

BlockMatrix central_solution(const InterpolationData& data) {
  BlockMatrix h(data.out_space, data.in_space);
  const Window& w = data.window;
  for (int k = w.lo; k <= w.hi; ++k) {
    const ColumnConstraint& ck = data.at(k);
    if (data.in_space.dim(k) == 0) continue;
    // accum = (to_prev_{j+1} P_{j+1}) ... (to_prev_k P_k) : U_k -> U_j.
    Mat diag = ck.to_output * ck.space.basis.adjoint();
    if (!exactly_zero(diag)) h.set_block(k, k, diag);
    Mat accum = Mat::Identity(data.in_space.dim(k), data.in_space.dim(k));
    for (int j = k - 1; j >= w.lo; --j) {
      const ColumnConstraint& cnext = data.at(j + 1);
      accum = (cnext.to_prev * cnext.space.basis.adjoint()) * accum;
      const ColumnConstraint& cj = data.at(j);
      Mat blk = (cj.to_output * cj.space.basis.adjoint()) * accum;
      if (!exactly_zero(blk)) h.set_block(j, k, blk);
    }
  }
  return h;
}

SchurPair canonical_pair(const InterpolationData& data) {
  SchurPair pair;
  pair.top = BlockMatrix(data.out_space, data.in_space);
  pair.bottom = BlockMatrix(data.in_space, data.in_space);
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const ColumnConstraint& c = data.at(k);
    if (c.space.dim() == 0) continue;
    Mat diag = c.to_output * c.space.basis.adjoint();
    if (!exactly_zero(diag)) pair.top.set_block(k, k, diag);
    if (data.window.contains(k - 1)) {
      Mat sup = c.to_prev * c.space.basis.adjoint();
      if (!exactly_zero(sup)) pair.bottom.set_block(k - 1, k, sup);
    }
  }
  return pair;
}

ResolventReport check_resolvent_interpolation(const BlockMatrix& resolvent,
                                              const InterpolationData& data,
                                              const Tolerance& tol) {
  if (!(resolvent.domain() == data.in_space) || !(resolvent.codomain() == data.in_space))
    throw ShapeError("check_resolvent_interpolation: resolvent spaces do not match the data");
  StructuredData s = build_structured(data);
  ResolventReport rep;
  BlockMatrix lhs = subtract(multiply(resolvent, s.e), s.e);
  BlockMatrix rhs = multiply(resolvent, s.omega_prev);
  rep.residual = diff_norm(lhs, rhs);
  rep.ok = rep.residual <= tol.eq;
  return rep;
}

// ---- 4x4 slab-constrained completion --------------------------------------

std::array<double, 3> CompletionInstance4x4::slab_norms() const {
  std::array<double, 3> norms{};
  for (int c = 0; c < 3; ++c) {
    int rows = 0;
    for (int i = 0; i < 4; ++i) rows += out_dims[static_cast<size_t>(i)];
    int cols = in_dims[static_cast<size_t>(c)] + in_dims[static_cast<size_t>(c + 1)];
    Mat slab = Mat::Zero(rows, cols);
    int roff = 0;
    for (int i = 0; i < 4; ++i) {
      int yd = out_dims[static_cast<size_t>(i)];
      if (yd > 0) {
        slab.block(roff, 0, yd, in_dims[static_cast<size_t>(c)]) =
            entry[static_cast<size_t>(i)][static_cast<size_t>(c)];
        slab.block(roff, in_dims[static_cast<size_t>(c)], yd, in_dims[static_cast<size_t>(c + 1)]) =
            entry[static_cast<size_t>(i)][static_cast<size_t>(c + 1)];
      }
      roff += yd;
    }
    norms[static_cast<size_t>(c)] = op_norm(slab);
  }
  return norms;
}

CompletionEmbedding embed_completion_4x4(const std::array<int, 4>& in_dims,
                                         const std::array<int, 4>& out_dims) {
  for (int d : in_dims)
    if (d < 0) throw ShapeError("embed_completion_4x4: negative dim");
  for (int d : out_dims)
    if (d < 0) throw ShapeError("embed_completion_4x4: negative dim");
  CompletionEmbedding emb;
  emb.in_dims = in_dims;
  emb.out_dims = out_dims;
  Window w{1, 6};
  const int x1 = in_dims[0], x2 = in_dims[1], x3 = in_dims[2], x4 = in_dims[3];
  std::vector<int> u = {0, 0, 0, x1 + x2, x2 + x3, x3 + x4};
  std::vector<int> y = {out_dims[0], out_dims[1], out_dims[2], out_dims[3], 0, 0};
  InterpolationData data;
  data.window = w;
  data.in_space = BlockSpace(w, u);
  data.out_space = BlockSpace(w, y);
  data.cols.resize(6);
  for (int k = 1; k <= 6; ++k) {
    ColumnConstraint& c = data.at(k);
    c.space = Subspace::zero(data.in_space.dim(k));
    c.to_output = Mat(data.out_space.dim(k), 0);
    c.to_prev = Mat(data.in_space.dim(k - 1), 0);
  }
  // Columns 5 and 6 constrain the overlap: the leading slab columns must
  // reproduce the trailing columns of the previous slab, via the coordinate
  // shift x (+) 0 -> 0 (+) x.
  auto overlap = [&data](int k, int lead, int prev_lead) {
    ColumnConstraint& c = data.at(k);
    const int uk = data.in_space.dim(k), up = data.in_space.dim(k - 1);
    Mat basis = Mat::Zero(uk, lead);
    basis.topRows(lead) = Mat::Identity(lead, lead);
    c.space = Subspace(uk, basis);
    c.to_output = Mat::Zero(data.out_space.dim(k), lead);
    Mat shift = Mat::Zero(up, lead);
    shift.bottomRows(lead) = Mat::Identity(lead, lead);
    (void)prev_lead;
    c.to_prev = shift;
  };
  overlap(5, x2, x1);
  overlap(6, x3, x2);
  emb.data = data;
  return emb;
}

CompletionInstance4x4 extract_completion(const BlockMatrix& h, const CompletionEmbedding& emb,
                                         const Tolerance& tol) {
  InterpolationReport rep = check_interpolation(h, emb.data, tol);
  if (!rep.interpolation_ok)
    throw NumericError("extract_completion: H does not solve the embedded problem (residual " +
                       std::to_string(rep.identity_residual) + ")");
  CompletionInstance4x4 inst;
  inst.in_dims = emb.in_dims;
  inst.out_dims = emb.out_dims;
  const int x1 = emb.in_dims[0], x2 = emb.in_dims[1], x3 = emb.in_dims[2], x4 = emb.in_dims[3];
  double overlap = 0.0;
  for (int i = 1; i <= 4; ++i) {
    Mat slab1 = h.block(i, 4);  // [A_{i,1} A_{i,2}]
    Mat slab2 = h.block(i, 5);  // [A_{i,2} A_{i,3}]
    Mat slab3 = h.block(i, 6);  // [A_{i,3} A_{i,4}]
    auto& row = inst.entry[static_cast<size_t>(i - 1)];
    row[0] = slab1.leftCols(x1);
    row[1] = slab1.rightCols(x2);
    row[2] = slab2.rightCols(x3);
    row[3] = slab3.rightCols(x4);
    if (x2 > 0) overlap = std::max(overlap, op_norm(slab2.leftCols(x2) - row[1]));
    if (x3 > 0) overlap = std::max(overlap, op_norm(slab3.leftCols(x3) - row[2]));
  }
  inst.overlap_residual = overlap;
  return inst;
}

}  // namespace tvi
