#include "tvi/param.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <sstream>

#include "tvi/dense.hpp"

namespace tvi {

namespace {

// Largest eigenvalue of a (small) hermitian matrix; -inf convention not
// needed here: 0x0 gives 0 so vacuous defects read as "no room left".
double max_eigenvalue(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().maxCoeff();
}

// First unit vector of the orthogonal complement of a subspace with
// orthonormal basis columns; requires dim < ambient.
Vec complement_vector(const Subspace& s) {
  Mat q = Mat::Identity(s.ambient, s.ambient);
  if (s.dim() > 0) {
    Eigen::HouseholderQR<Mat> qr(s.basis);
    q.applyOnTheLeft(qr.householderQ());
  }
  return q.col(s.dim());
}

}  // namespace

InducedData induced_contractions(const BlockMatrix& h, const InterpolationData& data,
                                 const Tolerance& tol) {
  const InterpolationReport rep = check_interpolation(h, data, tol);
  if (!rep.ok())
    throw NumericError("induced_contractions: candidate does not solve the problem");

  InducedData out;
  out.defects = defect_data(h, tol);
  const Window w = out.defects.coords.window();
  out.ranges.reserve(static_cast<size_t>(w.width()));
  out.couplings.reserve(static_cast<size_t>(w.width()));

  for (int k = w.lo; k <= w.hi; ++k) {
    const int rprev = out.defects.coords.dim(k - 1);
    const Mat& fbasis = data.at(k).space.basis;
    // Defect image of the constraint subspace, in defect coordinates.
    const Mat image =
        out.defects.space(k).basis.adjoint() * (out.defects.op(k) * fbasis);
    Mat rhs(rprev, fbasis.cols());
    if (k > w.lo && rprev > 0)
      rhs = out.defects.space(k - 1).basis.adjoint() *
            (out.defects.op(k - 1) * data.at(k).to_prev);
    else
      rhs.setZero();

    // Components of the requirement outside the row space of the image
    // cannot be met by any linear map on the range.
    RangeSolve rs = solve_through_range(image, rhs, tol);
    if (rs.inconsistency > tol.eq * std::max(1.0, rhs.norm())) {
      std::ostringstream msg;
      msg << "induced_contractions: defining relation inconsistent at index " << k
          << " (residual " << rs.inconsistency << ")";
      throw NumericError(msg.str());
    }
    const double norm = op_norm(rs.solution);
    if (norm > 1.0 + tol.psd) {
      std::ostringstream msg;
      msg << "induced_contractions: induced map at index " << k << " has norm " << norm;
      throw NumericError(msg.str());
    }
    out.ranges.push_back(std::move(rs.range));
    out.couplings.push_back(std::move(rs.solution));
  }
  return out;
}

ParameterReport check_parameter(const BlockMatrix& c, const InducedData& induced,
                                const Tolerance& tol) {
  const BlockSpace& coords = induced.defects.coords;
  if (!(c.domain() == coords) || !(c.codomain() == coords))
    throw ShapeError("check_parameter: transform does not act on the defect coordinates");
  const Window w = coords.window();

  ParameterReport rep;
  rep.structural = strictly_upper_support(c);
  if (!rep.structural) rep.problems.push_back("transform is not strictly upper");
  rep.norm = op_norm(c);
  rep.contractive = rep.norm <= 1.0 + tol.psd;
  if (!rep.contractive) rep.problems.push_back("transform norm exceeds 1");

  for (int k = w.lo; k <= w.hi; ++k) {
    const Mat& basis = induced.range(k).basis;
    if (basis.cols() == 0) continue;
    if (coords.dim(k - 1) > 0) {
      const double r = (c.block(k - 1, k) * basis - induced.coupling(k)).norm();
      rep.pinned_residual = std::max(rep.pinned_residual, r);
      if (r > tol.eq) {
        std::ostringstream msg;
        msg << "pinned block (" << k - 1 << ", " << k << ") deviates by " << r;
        rep.problems.push_back(msg.str());
      }
    }
    for (const auto& [jk, blk] : c.blocks()) {
      if (jk.second != k || jk.first == k - 1) continue;
      const double r = (blk * basis).norm();
      rep.free_residual = std::max(rep.free_residual, r);
      if (r > tol.eq) {
        std::ostringstream msg;
        msg << "block (" << jk.first << ", " << k << ") does not vanish on the range (leak "
            << r << ")";
        rep.problems.push_back(msg.str());
      }
    }
  }
  rep.ok = rep.structural && rep.contractive && rep.pinned_residual <= tol.eq &&
           rep.free_residual <= tol.eq;
  return rep;
}

BlockMatrix canonical_parameter(const InducedData& induced) {
  const BlockSpace& coords = induced.defects.coords;
  BlockMatrix c(coords, coords);
  const Window w = coords.window();
  for (int k = w.lo + 1; k <= w.hi; ++k)
    c.set_block(k - 1, k, induced.coupling(k) * induced.range(k).basis.adjoint());
  return c;
}

Parametrization parametrize_solution(const BlockMatrix& h, const InterpolationData& data,
                                     const BlockMatrix& c, const Tolerance& tol) {
  Parametrization out;
  out.resolvent = resolvent_from_parameter(h, c, tol);

  const ResolventReport rr = check_resolvent_interpolation(out.resolvent, data, tol);
  if (!rr.ok) {
    std::ostringstream msg;
    msg << "parametrize_solution: transform is not admissible (resolvent interpolation "
           "residual "
        << rr.residual << ")";
    throw NumericError(msg.str());
  }
  out.pair = recover_pair(h, out.resolvent, tol);

  const PairReport pr = check_pair(out.pair, data, tol);
  const Realization rec = construct(out.pair);
  out.reconstruction_residual = diff_norm(rec.solution, h);
  if (!pr.ok || out.reconstruction_residual > tol.eq * (1.0 + op_norm(h))) {
    std::ostringstream msg;
    msg << "parametrize_solution: output failed validation (pair ok=" << pr.ok
        << ", reconstruction residual " << out.reconstruction_residual << ")";
    throw NumericError(msg.str());
  }
  return out;
}

namespace {

UniquenessReport evaluate_conditions(Window w, std::vector<bool> full, std::vector<bool> coiso) {
  UniquenessReport rep;
  rep.window = w;
  rep.full_flags = std::move(full);
  rep.coiso_flags = std::move(coiso);
  rep.cond_full =
      std::all_of(rep.full_flags.begin(), rep.full_flags.end(), [](bool b) { return b; });
  rep.cond_coiso =
      std::all_of(rep.coiso_flags.begin(), rep.coiso_flags.end(), [](bool b) { return b; });
  for (int k0 = w.lo; k0 <= w.hi - 1 && !rep.cond_split; ++k0) {
    bool ok = true;
    for (int k = w.lo; k <= k0; ++k) ok = ok && rep.coiso(k);
    for (int k = k0 + 1; k <= w.hi; ++k) ok = ok && rep.full(k);
    if (ok) {
      rep.cond_split = true;
      rep.split_index = k0;
    }
  }
  rep.unique = rep.cond_full || rep.cond_coiso || rep.cond_split;
  return rep;
}

}  // namespace

UniquenessReport uniqueness_from_induced(const InducedData& induced, const Tolerance& tol) {
  const Window w = induced.window();
  std::vector<bool> full, coiso;
  for (int k = w.lo; k <= w.hi; ++k) {
    full.push_back(induced.range(k).dim() == induced.defects.coords.dim(k));
    const Mat& omega = induced.coupling(k);
    const Mat gap =
        Mat::Identity(omega.rows(), omega.rows()) - omega * omega.adjoint();
    coiso.push_back(max_eigenvalue(gap) <= tol.eq);
  }
  return evaluate_conditions(w, std::move(full), std::move(coiso));
}

namespace {

// Stacked data contraction of column k: output part on top, coupling to the
// previous input space below.
Mat stacked_data_map(const InterpolationData& data, int k) {
  const ColumnConstraint& col = data.at(k);
  Mat m(col.to_output.rows() + col.to_prev.rows(), col.space.dim());
  m.topRows(col.to_output.rows()) = col.to_output;
  m.bottomRows(col.to_prev.rows()) = col.to_prev;
  return m;
}

}  // namespace

UniquenessReport uniqueness_from_data(const InterpolationData& data, const Tolerance& tol) {
  const Window w = data.window;
  std::vector<bool> full, coiso;
  for (int k = w.lo; k <= w.hi; ++k) {
    full.push_back(data.at(k).space.is_full());
    const Mat m = stacked_data_map(data, k);
    const Mat gap = Mat::Identity(m.rows(), m.rows()) - m * m.adjoint();
    coiso.push_back(max_eigenvalue(gap) <= tol.eq);
  }
  return evaluate_conditions(w, std::move(full), std::move(coiso));
}

std::optional<NonuniquenessWitness> data_level_witness(const InterpolationData& data,
                                                       const Tolerance& tol) {
  const Window w = data.window;
  Tolerance sqrt_tol = tol;
  sqrt_tol.psd = 3.0 * tol.psd;

  // Best defect direction per row index: the strongest output-visible
  // component of the co-isometry defect.
  int best_m = 0, best_j = 0;
  double best_strength = 0.0;
  Vec best_dir;
  for (int m = w.lo; m <= w.hi; ++m) {
    const Mat stacked = stacked_data_map(data, m);
    const int rows = static_cast<int>(stacked.rows());
    const int y_dim = static_cast<int>(data.at(m).to_output.rows());
    if (rows == 0 || y_dim == 0) continue;
    const Mat gap = Mat::Identity(rows, rows) - stacked * stacked.adjoint();
    if (max_eigenvalue(gap) <= tol.eq) continue;
    const Mat defect_root = hermitian_sqrt_psd(gap, sqrt_tol);
    Eigen::JacobiSVD<Mat> svd(defect_root.topRows(y_dim),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues().size() == 0) continue;
    const double strength = svd.singularValues()(0);
    if (strength <= std::sqrt(tol.eq) || strength <= best_strength) continue;
    int j = -1;
    for (int cand = m; cand <= w.hi; ++cand) {
      const Subspace& f = data.at(cand).space;
      if (f.dim() < f.ambient) {
        j = cand;
        break;
      }
    }
    if (j < 0) continue;
    best_m = m;
    best_j = j;
    best_strength = strength;
    best_dir = defect_root * svd.matrixV().col(0);
  }
  if (best_strength == 0.0) return std::nullopt;

  const int y_dim = static_cast<int>(data.at(best_m).to_output.rows());
  const Vec g = complement_vector(data.at(best_j).space);
  const Mat bump = 0.5 * best_dir * g.adjoint();

  NonuniquenessWitness wit;
  wit.alternative = canonical_pair(data);
  wit.alternative.top.add_block(best_m, best_j, bump.topRows(y_dim));
  if (bump.rows() > y_dim && best_m - 1 >= w.lo)
    wit.alternative.bottom.add_block(best_m - 1, best_j, bump.bottomRows(bump.rows() - y_dim));
  wit.predicted_gap = bump.topRows(y_dim).norm();
  wit.row = best_m;
  wit.col = best_j;
  return wit;
}

std::optional<BlockMatrix> parameter_perturbation(const InducedData& induced,
                                                  const Tolerance& tol) {
  const BlockSpace& coords = induced.defects.coords;
  const Window w = coords.window();
  Tolerance sqrt_tol = tol;
  sqrt_tol.psd = 3.0 * tol.psd;

  int best_m = 0, best_j = 0;
  double best_gap = 0.0;
  for (int m = w.lo + 1; m <= w.hi; ++m) {
    if (coords.dim(m - 1) == 0) continue;
    const Mat& omega = induced.coupling(m);
    const Mat gap =
        Mat::Identity(omega.rows(), omega.rows()) - omega * omega.adjoint();
    const double lam = max_eigenvalue(gap);
    if (lam <= tol.eq || lam <= best_gap) continue;
    int j = -1;
    for (int cand = m; cand <= w.hi; ++cand) {
      if (induced.range(cand).dim() < coords.dim(cand)) {
        j = cand;
        break;
      }
    }
    if (j < 0) continue;
    best_m = m;
    best_j = j;
    best_gap = lam;
  }
  if (best_gap == 0.0) return std::nullopt;

  const Mat& omega = induced.coupling(best_m);
  const Mat gap = Mat::Identity(omega.rows(), omega.rows()) - omega * omega.adjoint();
  const Mat defect_root = hermitian_sqrt_psd(gap, sqrt_tol);
  Eigen::SelfAdjointEigenSolver<Mat> es((gap + gap.adjoint()) / 2.0);
  const Vec dir = es.eigenvectors().col(es.eigenvalues().size() - 1);
  const Vec g = complement_vector(induced.range(best_j));

  BlockMatrix bump(coords, coords);
  bump.set_block(best_m - 1, best_j, 0.5 * (defect_root * dir) * g.adjoint());
  return bump;
}

}  // namespace tvi
