#include "tvi/rcl.hpp"

#include <limits>
#include <sstream>

#include "tvi/dense.hpp"

namespace tvi {

namespace {

bool shape_matches(const Mat& m, int rows, int cols) {
  return m.rows() == rows && m.cols() == cols;
}

// Cumulative output-coordinate dimension up to and including k.
int cumulative_out(const InterpolationData& data, int k) {
  int s = 0;
  for (int i = data.window.lo; i <= k; ++i) s += data.out_space.dim(i);
  return s;
}

}  // namespace

LiftingValidation validate_lifting_problem(const LiftingProblem& prob, const Tolerance& tol) {
  LiftingValidation rep;
  const Window w = prob.window;
  const size_t width = static_cast<size_t>(w.width());
  auto complain = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.problems.push_back(msg);
  };

  if (!(prob.source.window() == w) || !(prob.target.window() == w) ||
      !(prob.anchor.window() == w)) {
    complain("space windows do not match the problem window");
    return rep;
  }
  if (prob.to_lift.size() != width || prob.evolution.size() != width ||
      prob.relax_old.size() != width || prob.relax_new.size() != width) {
    complain("operator sequences do not cover the window");
    return rep;
  }
  bool shapes_ok = true;
  for (int k = w.lo; k <= w.hi; ++k) {
    std::ostringstream at;
    at << " at index " << k;
    if (!shape_matches(prob.lift_at(k), prob.target.dim(k), prob.source.dim(k))) {
      complain("lifted contraction has wrong shape" + at.str());
      shapes_ok = false;
    }
    if (!shape_matches(prob.evolution_at(k), prob.target.dim(k), prob.target.dim(k - 1))) {
      complain("evolution has wrong shape" + at.str());
      shapes_ok = false;
    }
    if (!shape_matches(prob.old_at(k), prob.source.dim(k), prob.anchor.dim(k))) {
      complain("first relaxation coupling has wrong shape" + at.str());
      shapes_ok = false;
    }
    if (!shape_matches(prob.new_at(k), prob.source.dim(k), prob.anchor.dim(k - 1))) {
      complain("second relaxation coupling has wrong shape" + at.str());
      shapes_ok = false;
    }
  }
  if (!shapes_ok) return rep;

  for (int k = w.lo; k <= w.hi; ++k) {
    std::ostringstream at;
    at << " at index " << k;
    if (op_norm(prob.lift_at(k)) > 1.0 + tol.psd)
      complain("lifted operator is not a contraction" + at.str());
    if (op_norm(prob.evolution_at(k)) > 1.0 + tol.psd)
      complain("evolution is not a contraction" + at.str());

    Mat lhs = Mat::Zero(prob.target.dim(k), prob.anchor.dim(k - 1));
    if (k > w.lo) lhs = prob.evolution_at(k) * prob.lift_at(k - 1) * prob.old_at(k - 1);
    const double inter = (lhs - prob.lift_at(k) * prob.new_at(k)).norm();
    rep.intertwine_residuals.push_back(inter);
    if (inter > tol.eq) complain("intertwining relation fails" + at.str());

    const Mat& q = prob.new_at(k);
    Mat gap = q.adjoint() * q;
    if (k > w.lo) {
      const Mat& r = prob.old_at(k - 1);
      gap -= r.adjoint() * r;
    }
    const double margin = min_eigenvalue_hermitian(gap);
    rep.relaxation_margins.push_back(margin);
    if (margin < -tol.psd) complain("relaxation inequality fails" + at.str());
  }
  return rep;
}

UnderlyingData underlying_contractions(const LiftingProblem& prob, const Tolerance& tol) {
  const LiftingValidation v = validate_lifting_problem(prob, tol);
  if (!v.ok)
    throw NumericError("underlying_contractions: invalid problem (" + v.problems.front() + ")");
  const Window w = prob.window;
  Tolerance sqrt_tol = tol;
  sqrt_tol.psd = 3.0 * tol.psd;

  UnderlyingData und;
  std::vector<int> in_dims, out_dims;
  for (int k = w.lo; k <= w.hi; ++k) {
    const Mat& a = prob.lift_at(k);
    const Mat defect_a = hermitian_sqrt_psd(
        Mat::Identity(a.cols(), a.cols()) - a.adjoint() * a, sqrt_tol);
    und.lift_ranges.push_back(range_subspace(defect_a, tol));
    und.lift_defects.push_back(defect_a);

    const Mat& t = prob.evolution_at(k);
    const Mat defect_t = hermitian_sqrt_psd(
        Mat::Identity(t.cols(), t.cols()) - t.adjoint() * t, sqrt_tol);
    und.evolution_ranges.push_back(range_subspace(defect_t, tol));
    und.evolution_defects.push_back(defect_t);

    in_dims.push_back(und.lift_ranges.back().dim());
    out_dims.push_back(und.evolution_ranges.back().dim());
  }

  und.data.window = w;
  und.data.in_space = BlockSpace(w, in_dims);
  und.data.out_space = BlockSpace(w, out_dims);
  for (int k = w.lo; k <= w.hi; ++k) {
    const int y_k = und.data.out_space.dim(k);
    const int u_prev = und.data.in_space.dim(k - 1);

    const Mat image = und.lift_range(k).basis.adjoint() *
                      (und.lift_defect(k) * prob.new_at(k));
    Mat rhs(y_k + u_prev, prob.anchor.dim(k - 1));
    rhs.setZero();
    if (k > w.lo) {
      rhs.topRows(y_k) = und.evolution_range(k).basis.adjoint() *
                         (und.evolution_defect(k) * (prob.lift_at(k - 1) * prob.old_at(k - 1)));
      rhs.bottomRows(u_prev) = und.lift_range(k - 1).basis.adjoint() *
                               (und.lift_defect(k - 1) * prob.old_at(k - 1));
    }
    RangeSolve rs = solve_through_range(image, rhs, tol);
    if (rs.inconsistency > tol.eq * std::max(1.0, rhs.norm())) {
      std::ostringstream msg;
      msg << "underlying_contractions: defining relation inconsistent at index " << k
          << " (residual " << rs.inconsistency << ")";
      throw NumericError(msg.str());
    }
    const double norm = op_norm(rs.solution);
    if (norm > 1.0 + tol.psd) {
      std::ostringstream msg;
      msg << "underlying_contractions: constraint map at index " << k << " has norm " << norm;
      throw NumericError(msg.str());
    }
    ColumnConstraint col;
    col.space = std::move(rs.range);
    col.to_output = rs.solution.topRows(y_k);
    col.to_prev = rs.solution.bottomRows(u_prev);
    und.data.cols.push_back(std::move(col));
  }
  return und;
}

IsometricLifting build_isometric_lifting(const LiftingProblem& prob, const UnderlyingData& und) {
  const Window w = prob.window;
  IsometricLifting lift;
  lift.window = w;

  int cum = 0;
  std::vector<int> cums;  // cumulative defect coordinate dim up to each index
  for (int k = w.lo; k <= w.hi; ++k) {
    cum += und.data.out_space.dim(k);
    cums.push_back(cum);
    lift.lifted_dims.push_back(prob.target.dim(k) + cum);
  }
  for (int k = w.lo; k <= w.hi; ++k) {
    const int rows_top = prob.target.dim(k);
    const int y_k = und.data.out_space.dim(k);
    const int s_cur = cums[static_cast<size_t>(k - w.lo)];
    const int s_old = s_cur - y_k;
    const int cols_top = prob.target.dim(k - 1);
    Mat step = Mat::Zero(rows_top + s_cur, cols_top + s_old);
    step.block(0, 0, rows_top, cols_top) = prob.evolution_at(k);
    step.block(rows_top, cols_top, s_old, s_old) = Mat::Identity(s_old, s_old);
    step.block(rows_top + s_old, 0, y_k, cols_top) =
        und.evolution_range(k).basis.adjoint() * und.evolution_defect(k);
    lift.steps.push_back(std::move(step));
  }
  return lift;
}

LiftingSolutionReport check_lifting_solution(const LiftSequence& b, const LiftingProblem& prob,
                                             const UnderlyingData& und, const Tolerance& tol) {
  const Window w = prob.window;
  if (!(b.window == w)) throw ShapeError("check_lifting_solution: window mismatch");
  if (b.columns.size() != static_cast<size_t>(w.width()))
    throw ShapeError("check_lifting_solution: sequence does not cover the window");
  const IsometricLifting lift = build_isometric_lifting(prob, und);
  for (int k = w.lo; k <= w.hi; ++k)
    if (!shape_matches(b.at(k), lift.lifted_dim(k), prob.source.dim(k)))
      throw ShapeError("check_lifting_solution: column has wrong shape");

  LiftingSolutionReport rep;
  rep.tops_match = rep.contractive = rep.intertwined = true;
  for (int k = w.lo; k <= w.hi; ++k) {
    const double top = (b.at(k).topRows(prob.target.dim(k)) - prob.lift_at(k)).norm();
    rep.top_residuals.push_back(top);
    if (top > tol.eq) rep.tops_match = false;

    const double norm = op_norm(b.at(k));
    rep.norms.push_back(norm);
    if (norm > 1.0 + tol.psd) rep.contractive = false;

    double inter = 0.0;
    if (k > w.lo) {
      // B_{k-1} maps into the lifted space at k-1, which the step embeds.
      inter = (lift.step(k) * (b.at(k - 1) * prob.old_at(k - 1)) -
               b.at(k) * prob.new_at(k))
                  .norm();
    }
    rep.intertwine_residuals.push_back(inter);
    if (inter > tol.eq) rep.intertwined = false;
  }
  rep.ok = rep.tops_match && rep.contractive && rep.intertwined;
  return rep;
}

BlockMatrix interpolant_from_lifts(const LiftSequence& b, const LiftingProblem& prob,
                                   const UnderlyingData& und, const Tolerance& tol) {
  const Window w = prob.window;
  if (!(b.window == w)) throw ShapeError("interpolant_from_lifts: window mismatch");
  BlockMatrix h(und.data.out_space, und.data.in_space);

  for (int k = w.lo; k <= w.hi; ++k) {
    const int top_dim = prob.target.dim(k);
    const Mat& bk = b.at(k);
    if (!shape_matches(bk, top_dim + cumulative_out(und.data, k), prob.source.dim(k)))
      throw ShapeError("interpolant_from_lifts: column has wrong shape");

    const double top = (bk.topRows(top_dim) - prob.lift_at(k)).norm();
    if (top > tol.eq * std::max(1.0, prob.lift_at(k).norm())) {
      std::ostringstream msg;
      msg << "interpolant_from_lifts: top rows deviate from the lifted operator at index "
          << k << " (residual " << top << ")";
      throw NumericError(msg.str());
    }
    const double norm = op_norm(bk);
    if (norm > 1.0 + tol.psd) {
      std::ostringstream msg;
      msg << "interpolant_from_lifts: column at index " << k << " has norm " << norm;
      throw NumericError(msg.str());
    }

    const Mat bottom = bk.bottomRows(bk.rows() - top_dim);
    const Mat image = und.lift_range(k).basis.adjoint() * und.lift_defect(k);
    RangeSolve rs = solve_through_range(image, bottom, tol);
    if (rs.inconsistency > tol.eq * std::max(1.0, bottom.norm())) {
      std::ostringstream msg;
      msg << "interpolant_from_lifts: bottom rows not supported on the defect range at index "
          << k << " (residual " << rs.inconsistency << ")";
      throw NumericError(msg.str());
    }
    // Zero-extended beyond the range: the minimal-norm representative.
    const Mat gamma = rs.solution * rs.range.basis.adjoint();
    int offset = 0;
    for (int j = w.lo; j <= k; ++j) {
      const int y_j = und.data.out_space.dim(j);
      h.set_block(j, k, gamma.middleRows(offset, y_j));
      offset += y_j;
    }
  }
  return h;
}

LiftSequence lifts_from_interpolant(const BlockMatrix& h, const LiftingProblem& prob,
                                    const UnderlyingData& und, const Tolerance& /*tol*/) {
  if (!(h.domain() == und.data.in_space) || !(h.codomain() == und.data.out_space))
    throw ShapeError("lifts_from_interpolant: candidate does not act on the defect coordinates");
  if (!upper_support(h))
    throw ShapeError("lifts_from_interpolant: candidate must be upper");

  const Window w = prob.window;
  LiftSequence b;
  b.window = w;
  for (int k = w.lo; k <= w.hi; ++k) {
    const int top_dim = prob.target.dim(k);
    const int s_k = cumulative_out(und.data, k);
    const int u_k = und.data.in_space.dim(k);
    Mat gamma(s_k, u_k);
    int offset = 0;
    for (int j = w.lo; j <= k; ++j) {
      const int y_j = und.data.out_space.dim(j);
      gamma.middleRows(offset, y_j) = h.block(j, k);
      offset += y_j;
    }
    Mat bk(top_dim + s_k, prob.source.dim(k));
    bk.topRows(top_dim) = prob.lift_at(k);
    bk.bottomRows(s_k) =
        gamma * (und.lift_range(k).basis.adjoint() * und.lift_defect(k));
    b.columns.push_back(std::move(bk));
  }
  return b;
}

LiftingProblem embed_interpolation(const InterpolationData& data) {
  const Window w = data.window;
  const Window we{w.lo - 1, w.hi};
  auto y = [&data](int k) { return data.out_space.dim(k); };
  auto u = [&data](int k) { return data.in_space.dim(k); };
  auto f = [&data, &w](int k) { return w.contains(k) ? data.at(k).space.dim() : 0; };

  LiftingProblem prob;
  prob.window = we;
  std::vector<int> source_dims, target_dims, anchor_dims;
  for (int k = we.lo; k <= we.hi; ++k) {
    source_dims.push_back(y(k + 1) + u(k));
    target_dims.push_back(y(k + 1));
    anchor_dims.push_back(f(k + 1));
  }
  prob.source = BlockSpace(we, source_dims);
  prob.target = BlockSpace(we, target_dims);
  prob.anchor = BlockSpace(we, anchor_dims);

  for (int k = we.lo; k <= we.hi; ++k) {
    Mat a = Mat::Zero(y(k + 1), y(k + 1) + u(k));
    a.leftCols(y(k + 1)) = Mat::Identity(y(k + 1), y(k + 1));
    prob.to_lift.push_back(std::move(a));

    prob.evolution.push_back(Mat::Zero(y(k + 1), y(k)));

    Mat old_coupling(y(k + 1) + u(k), f(k + 1));
    old_coupling.setZero();
    if (w.contains(k + 1)) {
      old_coupling.topRows(y(k + 1)) = data.at(k + 1).to_output;
      old_coupling.bottomRows(u(k)) = data.at(k + 1).to_prev;
    }
    prob.relax_old.push_back(std::move(old_coupling));

    Mat new_coupling = Mat::Zero(y(k + 1) + u(k), f(k));
    if (w.contains(k)) new_coupling.bottomRows(u(k)) = data.at(k).space.basis;
    prob.relax_new.push_back(std::move(new_coupling));
  }
  return prob;
}

double embedding_roundtrip_residual(const InterpolationData& data, const Tolerance& tol) {
  const LiftingProblem prob = embed_interpolation(data);
  const UnderlyingData und = underlying_contractions(prob, tol);
  const Window w = data.window;

  // The extra bottom index must carry no constraint at all.
  if (und.data.in_space.dim(w.lo - 1) != 0 || und.data.out_space.dim(w.lo - 1) != 0)
    return std::numeric_limits<double>::infinity();

  // Unitary identification of the original input coordinates with the
  // recovered defect coordinates at index k.
  auto input_map = [&](int k) -> Mat {
    const int u_k = data.in_space.dim(k);
    const int y_next = data.out_space.dim(k + 1);
    Mat embed = Mat::Zero(y_next + u_k, u_k);
    embed.bottomRows(u_k) = Mat::Identity(u_k, u_k);
    return und.lift_range(k).basis.adjoint() * embed;
  };

  double residual = 0.0;
  for (int k = w.lo; k <= w.hi; ++k) {
    if (und.data.in_space.dim(k) != data.in_space.dim(k) ||
        und.data.out_space.dim(k) != data.out_space.dim(k))
      return std::numeric_limits<double>::infinity();
    const Mat s_k = input_map(k);
    const Mat s_prev = k > w.lo ? input_map(k - 1) : Mat(0, 0);
    const Mat t_k = und.evolution_range(k).basis.adjoint();
    residual = std::max(
        residual, (s_k.adjoint() * s_k -
                   Mat::Identity(data.in_space.dim(k), data.in_space.dim(k)))
                      .norm());
    residual = std::max(
        residual, (t_k.adjoint() * t_k -
                   Mat::Identity(data.out_space.dim(k), data.out_space.dim(k)))
                      .norm());

    const ColumnConstraint& orig = data.at(k);
    const ColumnConstraint& rec = und.data.at(k);
    residual = std::max(residual, (rec.space.projector() -
                                   s_k * orig.space.projector() * s_k.adjoint())
                                      .norm());
    residual = std::max(residual,
                        (rec.to_output * rec.space.basis.adjoint() * s_k -
                         t_k * orig.to_output * orig.space.basis.adjoint())
                            .norm());
    const Mat prev_lhs = rec.to_prev * rec.space.basis.adjoint() * s_k;
    const Mat prev_rhs =
        k > w.lo ? Mat(s_prev * orig.to_prev * orig.space.basis.adjoint())
                 : Mat::Zero(prev_lhs.rows(), prev_lhs.cols());
    residual = std::max(residual, (prev_lhs - prev_rhs).norm());
  }
  return residual;
}

}  // namespace tvi
