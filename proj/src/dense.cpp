#include "tvi/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tvi {

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Mat& m) {
  if (m.rows() == 0 && m.cols() == 0) return 1.0;
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_hermitian(const Mat& m) {
  if (m.rows() != m.cols()) throw ShapeError("min_eigenvalue_hermitian: matrix not square");
  if (m.rows() == 0) return 1.0;
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat hermitian_sqrt_psd(const Mat& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_sqrt_psd: matrix not square");
  if (m.rows() == 0) return Mat(0, 0);
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& ev = es.eigenvalues();
  if (ev(0) < -tol.psd) throw NumericError("hermitian_sqrt_psd: matrix not PSD (min eigenvalue " +
                                           std::to_string(ev(0)) + ")");
  Eigen::VectorXd sq = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * sq.asDiagonal().toDenseMatrix().cast<Complex>() *
         es.eigenvectors().adjoint();
}

Subspace range_subspace(const Mat& m, const Tolerance& tol) {
  if (m.rows() == 0) return Subspace::zero(0);
  if (m.cols() == 0) return Subspace::zero(static_cast<int>(m.rows()));
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank) ++rank;
  return Subspace(static_cast<int>(m.rows()), svd.matrixU().leftCols(rank));
}

Mat pseudo_inverse(const Mat& m, const Tolerance& tol) {
  if (m.size() == 0) return Mat(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank) ++rank;
  if (rank == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::VectorXd inv = sv.head(rank).cwiseInverse();
  return svd.matrixV().leftCols(rank) *
         inv.asDiagonal().toDenseMatrix().cast<Complex>() *
         svd.matrixU().leftCols(rank).adjoint();
}

double spectral_radius(const Mat& m) {
  if (m.rows() != m.cols()) throw ShapeError("spectral_radius: matrix not square");
  if (m.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

RangeSolve solve_through_range(const Mat& image, const Mat& rhs, const Tolerance& tol) {
  if (image.cols() != rhs.cols())
    throw ShapeError("solve_through_range: image and rhs column counts differ");
  RangeSolve out;
  if (image.rows() == 0 || image.cols() == 0) {
    out.range = Subspace::zero(static_cast<int>(image.rows()));
    out.solution = Mat(rhs.rows(), 0);
    out.inconsistency = rhs.norm();
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(image, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank) ++rank;
  const Mat v_s = svd.matrixV().leftCols(rank);
  out.range = Subspace(static_cast<int>(image.rows()), svd.matrixU().leftCols(rank));
  out.solution = rhs * v_s;
  for (int i = 0; i < rank; ++i) out.solution.col(i) /= sv(i);
  out.inconsistency = (rhs - (rhs * v_s) * v_s.adjoint()).norm();
  return out;
}

}  // namespace tvi
