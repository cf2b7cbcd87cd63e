#include "tvi/random_gen.hpp"

#include <Eigen/QR>
#include <cmath>
#include <functional>

#include "tvi/dense.hpp"

namespace tvi {

double RandomSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double two_pi = 6.283185307179586;
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double theta = two_pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex RandomSource::gaussian_complex() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

int RandomSource::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

Mat RandomSource::matrix(int rows, int cols) {
  Mat m(rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) m(j, k) = gaussian_complex();
  return m;
}

Mat random_contraction(RandomSource& rng, int rows, int cols, double margin) {
  Mat g = rng.matrix(rows, cols);
  if (g.size() == 0) return g;
  return g / (op_norm(g) + margin);
}

Subspace random_subspace(RandomSource& rng, int ambient, int dim) {
  if (dim == 0 || ambient == 0) return Subspace::zero(ambient);
  const Mat g = rng.matrix(ambient, dim);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = Mat::Identity(ambient, dim);
  q.applyOnTheLeft(qr.householderQ());
  return Subspace(ambient, q);
}

InterpolationData random_data(RandomSource& rng, Window w, const RandomDataOptions& opts) {
  InterpolationData data;
  data.window = w;
  std::vector<int> in_dims, out_dims;
  for (int k = w.lo; k <= w.hi; ++k) {
    in_dims.push_back(rng.uniform_int(0, opts.max_dim));
    out_dims.push_back(rng.uniform_int(0, opts.max_dim));
  }
  int pick = w.lo - 1;
  if (opts.nontrivial) {
    // Ensure at least one column carries an actual constraint with output.
    pick = w.lo + (w.width() > 1 ? rng.uniform_int(0, w.width() - 1) : 0);
    in_dims[static_cast<size_t>(pick - w.lo)] =
        std::max(in_dims[static_cast<size_t>(pick - w.lo)], 1);
    out_dims[static_cast<size_t>(pick - w.lo)] =
        std::max(out_dims[static_cast<size_t>(pick - w.lo)], 1);
  }
  data.in_space = BlockSpace(w, in_dims);
  data.out_space = BlockSpace(w, out_dims);

  for (int k = w.lo; k <= w.hi; ++k) {
    const int u_k = data.in_space.dim(k);
    ColumnConstraint col;
    int f_dim = opts.force_full_spaces ? u_k : rng.uniform_int(0, u_k);
    if (k == pick) f_dim = std::max(f_dim, 1);
    col.space = random_subspace(rng, u_k, f_dim);

    const int y_k = data.out_space.dim(k);
    const int u_prev = data.in_space.dim(k - 1);
    const Mat stacked =
        opts.omega_scale * random_contraction(rng, y_k + u_prev, f_dim);
    col.to_output = stacked.topRows(y_k);
    col.to_prev = stacked.bottomRows(u_prev);
    data.cols.push_back(std::move(col));
  }
  return data;
}

namespace {

// Operator norm of the vertical stacking of top and bottom (the joint
// contraction measure of the pair, stronger than the per-column peaks).
double stacked_norm(const SchurPair& pair) {
  const Mat t = to_dense(pair.top);
  const Mat b = to_dense(pair.bottom);
  Mat s(t.rows() + b.rows(), t.cols());
  s.topRows(t.rows()) = t;
  s.bottomRows(b.rows()) = b;
  return op_norm(s);
}

// Largest t in [0, 1] with f(base + t * bump) <= threshold; f convex with
// f(base) <= threshold, so the admissible set is an interval containing 0.
double bisect_scale(const std::function<double(double)>& f, double threshold) {
  if (f(1.0) <= threshold) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double mid = (lo + hi) / 2.0;
    (f(mid) <= threshold ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

SchurPair random_admissible_pair(RandomSource& rng, const InterpolationData& data,
                                 const Tolerance& tol, double target_norm) {
  static_cast<void>(tol);
  const SchurPair canon = canonical_pair(data);
  const Window w = data.window;

  // Free directions: arbitrary upper (top) and strictly upper (bottom)
  // blocks, each multiplied on the right by the projection onto the
  // complement of the constraint subspace of its column, so the
  // interpolation conditions are untouched.
  SchurPair free_part{BlockMatrix(data.out_space, data.in_space),
                      BlockMatrix(data.in_space, data.in_space)};
  for (int k = w.lo; k <= w.hi; ++k) {
    const int u_k = data.in_space.dim(k);
    if (u_k == 0) continue;
    const Mat killer =
        Mat::Identity(u_k, u_k) - data.at(k).space.projector();
    for (int j = w.lo; j <= k; ++j) {
      if (data.out_space.dim(j) > 0)
        free_part.top.set_block(j, k, rng.matrix(data.out_space.dim(j), u_k) * killer);
      if (j < k && data.in_space.dim(j) > 0)
        free_part.bottom.set_block(j, k, rng.matrix(data.in_space.dim(j), u_k) * killer);
    }
  }

  auto scaled = [&](double t) {
    return SchurPair{add(canon.top, scale(t, free_part.top)),
                     add(canon.bottom, scale(t, free_part.bottom))};
  };
  if (stacked_norm(canon) > target_norm) return canon;
  const double t =
      bisect_scale([&](double s) { return stacked_norm(scaled(s)); }, target_norm);
  return scaled(t);
}

BlockMatrix random_parameter(RandomSource& rng, const InducedData& induced,
                             const Tolerance& tol, double target_norm) {
  static_cast<void>(tol);
  const BlockMatrix canon = canonical_parameter(induced);
  const BlockSpace& coords = induced.defects.coords;
  const Window w = coords.window();

  BlockMatrix free_part(coords, coords);
  for (int k = w.lo; k <= w.hi; ++k) {
    const int r_k = coords.dim(k);
    if (r_k == 0) continue;
    const Mat killer = Mat::Identity(r_k, r_k) - induced.range(k).projector();
    for (int j = w.lo; j < k; ++j)
      if (coords.dim(j) > 0)
        free_part.set_block(j, k, rng.matrix(coords.dim(j), r_k) * killer);
  }
  if (op_norm(canon) > target_norm) return canon;
  const double t = bisect_scale(
      [&](double s) { return op_norm(add(canon, scale(s, free_part))); }, target_norm);
  return add(canon, scale(t, free_part));
}

BlockMatrix random_strictly_upper_contraction(RandomSource& rng, const BlockSpace& space,
                                              double target_norm) {
  const Window w = space.window();
  BlockMatrix c(space, space);
  for (int k = w.lo; k <= w.hi; ++k)
    for (int j = w.lo; j < k; ++j)
      if (space.dim(j) > 0 && space.dim(k) > 0)
        c.set_block(j, k, rng.matrix(space.dim(j), space.dim(k)));
  const double n = op_norm(c);
  if (n > target_norm) c = scale(target_norm / n, c);
  return c;
}

LiftingProblem random_lifting_problem(RandomSource& rng, Window w,
                                      const RandomLiftingOptions& opts) {
  LiftingProblem prob;
  prob.window = w;
  std::vector<int> source_dims, target_dims, anchor_dims;

  if (opts.isometric_couplings) {
    // Equality in the relaxation inequality is arranged by routing the first
    // coupling through an isometry into the previous source space, which
    // requires non-increasing source dimensions.
    const int base = rng.uniform_int(1, opts.max_dim);
    for (int k = w.lo; k <= w.hi; ++k) {
      source_dims.push_back(base + (w.hi - k));
      target_dims.push_back(rng.uniform_int(1, opts.max_dim));
      anchor_dims.push_back(rng.uniform_int(0, opts.max_dim));
    }
    prob.source = BlockSpace(w, source_dims);
    prob.target = BlockSpace(w, target_dims);
    prob.anchor = BlockSpace(w, anchor_dims);

    std::vector<Mat> bridges;  // isometry source_k -> source_{k-1}
    for (int k = w.lo; k <= w.hi; ++k) {
      prob.evolution.push_back(
          random_contraction(rng, prob.target.dim(k), prob.target.dim(k - 1)));
      bridges.push_back(k == w.lo
                            ? Mat(0, 0)
                            : random_subspace(rng, prob.source.dim(k - 1), prob.source.dim(k))
                                  .basis);
      prob.relax_new.push_back(rng.matrix(prob.source.dim(k), prob.anchor.dim(k - 1)));
    }
    for (int k = w.lo; k <= w.hi; ++k) {
      if (k == w.lo)
        prob.to_lift.push_back(
            random_contraction(rng, prob.target.dim(k), prob.source.dim(k)));
      else
        prob.to_lift.push_back(prob.evolution_at(k) * prob.to_lift.back() *
                               bridges[static_cast<size_t>(k - w.lo)]);
      // First coupling at k feeds the intertwining at k+1.
      if (k < w.hi)
        prob.relax_old.push_back(bridges[static_cast<size_t>(k + 1 - w.lo)] *
                                 prob.new_at(k + 1));
      else
        prob.relax_old.push_back(Mat::Zero(prob.source.dim(k), prob.anchor.dim(k)));
    }
    return prob;
  }

  // General case: sources wide enough that the lifted operators have full
  // row rank and a kernel that can absorb the second coupling.
  std::vector<int> raw_anchor, raw_target;
  for (int k = w.lo; k <= w.hi; ++k) {
    raw_target.push_back(rng.uniform_int(1, opts.max_dim));
    raw_anchor.push_back(rng.uniform_int(0, opts.max_dim));
  }
  for (int k = w.lo; k <= w.hi; ++k) {
    const int anchor_prev = k == w.lo ? 0 : raw_anchor[static_cast<size_t>(k - 1 - w.lo)];
    source_dims.push_back(raw_target[static_cast<size_t>(k - w.lo)] + anchor_prev +
                          rng.uniform_int(1, 2));
  }
  prob.source = BlockSpace(w, source_dims);
  prob.target = BlockSpace(w, raw_target);
  prob.anchor = BlockSpace(w, raw_anchor);

  const Tolerance tol;
  for (int k = w.lo; k <= w.hi; ++k) {
    Mat a;
    do {
      a = random_contraction(rng, prob.target.dim(k), prob.source.dim(k));
    } while (smallest_singular_value(a) < 1e-2);
    prob.to_lift.push_back(std::move(a));
    prob.evolution.push_back(
        random_contraction(rng, prob.target.dim(k), prob.target.dim(k - 1)));
    prob.relax_old.push_back(
        0.7 * random_contraction(rng, prob.source.dim(k), prob.anchor.dim(k)));
  }
  for (int k = w.lo; k <= w.hi; ++k) {
    const int h_k = prob.source.dim(k);
    const int a_prev = prob.anchor.dim(k - 1);
    if (a_prev == 0) {
      prob.relax_new.push_back(Mat(h_k, 0));
      continue;
    }
    const Mat rhs = prob.evolution_at(k) * prob.lift_at(k - 1) * prob.old_at(k - 1);
    const Mat base = pseudo_inverse(prob.lift_at(k), tol) * rhs;

    // Kernel of the lifted operator: complement of the range of its adjoint.
    const Subspace row_space = range_subspace(prob.lift_at(k).adjoint(), tol);
    Mat q = Mat::Identity(h_k, h_k);
    Eigen::HouseholderQR<Mat> qr(row_space.basis);
    q.applyOnTheLeft(qr.householderQ());
    const Mat kernel = q.rightCols(h_k - row_space.dim());

    Mat mix;
    do {
      mix = rng.matrix(static_cast<int>(kernel.cols()), a_prev);
    } while (smallest_singular_value(mix) < 1e-1);
    const double lift = std::sqrt((std::pow(op_norm(prob.old_at(k - 1)), 2) + 0.05)) /
                        smallest_singular_value(mix);
    prob.relax_new.push_back(base + lift * (kernel * mix));
  }
  return prob;
}

StateSpaceSystem random_state_space(RandomSource& rng, int states, int n, int max_dim,
                                    const Tolerance& tol) {
  Mat a = rng.matrix(states, states);
  const double norm = op_norm(a);
  if (norm > 0.0) a *= 0.8 / norm;

  const Window w{1, n};
  std::vector<int> in_dims, out_dims;
  for (int k = 1; k <= n; ++k) {
    in_dims.push_back(rng.uniform_int(0, max_dim));
    out_dims.push_back(rng.uniform_int(0, max_dim));
  }
  in_dims[static_cast<size_t>(rng.uniform_int(0, n - 1))] += 1;
  const BlockSpace in_space(w, in_dims);
  const BlockSpace out_space(w, out_dims);

  const int outputs = rng.uniform_int(1, std::max(1, max_dim));
  const Mat e = random_contraction(rng, outputs, states);
  const Mat b = random_contraction(rng, states, in_space.total());

  BlockMatrix d(out_space, in_space);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= k; ++j)
      if (out_space.dim(j) > 0 && in_space.dim(k) > 0)
        d.set_block(j, k, 0.5 * random_contraction(rng, out_space.dim(j), in_space.dim(k)));
  return make_state_space(std::move(a), b, e, std::move(d), tol);
}

}  // namespace tvi
