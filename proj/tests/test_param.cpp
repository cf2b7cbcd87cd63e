#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tvi/param.hpp"
#include "tvi/problem.hpp"
#include "tvi/random_gen.hpp"

using namespace tvi;
using tvi::random_data;  // glibc declares a ::random_data struct
using tvi_test::m11;

TEST_CASE("induced contractions of the scalar chain") {
  Tolerance tol;
  InterpolationData data = tvi_test::scalar_chain_data();
  BlockMatrix h = central_solution(data);
  InducedData ind = induced_contractions(h, data, tol);

  CHECK(ind.window().lo == 0);
  CHECK(ind.window().hi == 2);
  for (int k = 0; k <= 2; ++k) {
    // Full constraint subspaces: the defect image fills the coordinates.
    CHECK(ind.range(k).dim() == ind.defects.coords.dim(k));
    if (k > 0) CHECK(op_norm(ind.coupling(k)) <= 1.0 + tol.psd);
  }

  SUBCASE("non-solutions are refused") {
    BlockMatrix zero(data.out_space, data.in_space);
    CHECK_THROWS_AS(induced_contractions(zero, data, tol), NumericError);
  }
}

TEST_CASE("parameter membership") {
  Tolerance tol;
  InterpolationData data = tvi_test::scalar_chain_data();
  BlockMatrix h = central_solution(data);
  InducedData ind = induced_contractions(h, data, tol);
  BlockMatrix canon = canonical_parameter(ind);

  SUBCASE("canonical member passes") {
    ParameterReport r = check_parameter(canon, ind, tol);
    CHECK(r.ok);
    CHECK(r.structural);
    CHECK(r.contractive);
    CHECK(r.pinned_residual < 1e-12);
    CHECK(r.free_residual < 1e-12);
  }

  SUBCASE("pinned deviation is caught") {
    BlockMatrix c = canon;
    c.set_block(1, 2, Mat::Zero(ind.defects.coords.dim(1), ind.defects.coords.dim(2)));
    ParameterReport r = check_parameter(c, ind, tol);
    CHECK(!r.ok);
    CHECK(r.pinned_residual > 1e-3);
  }

  SUBCASE("range leakage is caught") {
    BlockMatrix c = canon;
    Mat leak = Mat::Zero(ind.defects.coords.dim(0), ind.defects.coords.dim(2));
    leak(0, 0) = 0.3;  // hits the range basis head-on (ranges are full here)
    c.add_block(0, 2, leak);
    ParameterReport r = check_parameter(c, ind, tol);
    CHECK(!r.ok);
    CHECK(r.free_residual > 1e-3);
  }

  SUBCASE("expansive member is caught") {
    BlockMatrix c = canon;
    Mat big = Mat::Zero(ind.defects.coords.dim(0), ind.defects.coords.dim(2));
    big(0, 0) = 5.0;
    c.set_block(0, 2, big);
    ParameterReport r = check_parameter(c, ind, tol);
    CHECK(!r.contractive);
    CHECK(!r.ok);
  }

  SUBCASE("wrong coordinates are a shape error") {
    Window other{0, 1};
    BlockSpace s = tvi_test::scalar_space(other);
    BlockMatrix c(s, s);
    CHECK_THROWS_AS(check_parameter(c, ind, tol), ShapeError);
  }
}

TEST_CASE("parametrization reconstructs the solution") {
  Tolerance tol;
  RandomSource rng(501);
  for (int trial = 0; trial < 20; ++trial) {
    Window w{0, rng.uniform_int(1, 3)};
    InterpolationData data = random_data(rng, w);
    // Alternate between the distinguished solution and a random pair solution.
    BlockMatrix h = (trial % 2 == 0)
                        ? central_solution(data)
                        : construct(random_admissible_pair(rng, data, tol)).solution;
    InducedData ind = induced_contractions(h, data, tol);

    BlockMatrix canon = canonical_parameter(ind);
    Parametrization pc = parametrize_solution(h, data, canon, tol);
    CHECK(pc.reconstruction_residual <= 1e-8);
    CHECK(check_pair(pc.pair, data, tol).ok);

    BlockMatrix c = random_parameter(rng, ind, tol);
    CHECK(check_parameter(c, ind, tol).ok);
    Parametrization pr = parametrize_solution(h, data, c, tol);
    CHECK(pr.reconstruction_residual <= 1e-8);
    CHECK(check_pair(pr.pair, data, tol).ok);

    // Distinct members yield distinct pairs.
    double param_gap = tvi_test::dense_diff(c, canon);
    if (param_gap > 1e-3) {
      double pair_gap = tvi_test::dense_diff(pr.pair.top, pc.pair.top) +
                        tvi_test::dense_diff(pr.pair.bottom, pc.pair.bottom);
      CHECK(pair_gap > 1e-6);
    }
  }
}

TEST_CASE("resolvent interpolation holds exactly for members") {
  // Both directions on random instances: a member's resolvent satisfies the
  // resolvent-level conditions; breaking membership breaks them.
  Tolerance tol;
  RandomSource rng(502);
  int nonmember_checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Window w{0, rng.uniform_int(1, 3)};
    InterpolationData data = random_data(rng, w);
    BlockMatrix h = central_solution(data);
    InducedData ind = induced_contractions(h, data, tol);

    BlockMatrix c = random_parameter(rng, ind, tol);
    BlockMatrix f = resolvent_from_parameter(h, c, tol);
    CHECK(check_resolvent_interpolation(f, data, tol).ok);

    // Zero out a substantial pinned block, if one exists.
    for (int k = w.lo + 1; k <= w.hi; ++k) {
      int rows = ind.defects.coords.dim(k - 1);
      int cols = ind.defects.coords.dim(k);
      if (rows == 0 || cols == 0) continue;
      if (ind.range(k).dim() == 0 || ind.coupling(k).norm() < 0.1) continue;
      BlockMatrix bad = c;
      bad.set_block(k - 1, k, Mat::Zero(rows, cols));
      if (check_parameter(bad, ind, tol).ok) continue;  // pinned block was free anyway
      BlockMatrix fbad = resolvent_from_parameter(h, bad, tol);
      CHECK(!check_resolvent_interpolation(fbad, data, tol).ok);
      ++nonmember_checked;
      break;
    }
  }
  CHECK(nonmember_checked > 5);
}

TEST_CASE("uniqueness verdicts") {
  Tolerance tol;

  SUBCASE("full constraint subspaces") {
    RandomSource rng(503);
    RandomDataOptions opts;
    opts.force_full_spaces = true;
    InterpolationData data = random_data(rng, Window{0, 2}, opts);
    UniquenessReport rd = uniqueness_from_data(data, tol);
    CHECK(rd.cond_full);
    CHECK(rd.unique);

    BlockMatrix h = central_solution(data);
    InducedData ind = induced_contractions(h, data, tol);
    UniquenessReport ri = uniqueness_from_induced(ind, tol);
    CHECK(ri.cond_full);
    CHECK(ri.unique);
    CHECK(!parameter_perturbation(ind, tol).has_value());
    CHECK(!data_level_witness(data, tol).has_value());

    // Criterion-(1) instances determine the pair: two random admissible pairs
    // coincide, and so do their solutions.
    SchurPair p1 = random_admissible_pair(rng, data, tol);
    SchurPair p2 = random_admissible_pair(rng, data, tol);
    CHECK(tvi_test::dense_diff(construct(p1).solution, construct(p2).solution) < 1e-9);
  }

  SUBCASE("isometric data maps") {
    InterpolationData data = tvi_test::isometric_fixture();
    UniquenessReport rd = uniqueness_from_data(data, tol);
    CHECK(rd.unique);
    BlockMatrix h = central_solution(data);
    InducedData ind = induced_contractions(h, data, tol);
    CHECK(uniqueness_from_induced(ind, tol).unique);
    CHECK(!parameter_perturbation(ind, tol).has_value());
  }

  SUBCASE("scalar chain is unique through fullness") {
    InterpolationData data = tvi_test::scalar_chain_data();
    CHECK(uniqueness_from_data(data, tol).cond_full);
    CHECK(!data_level_witness(data, tol).has_value());
  }

  SUBCASE("witness fixture violates every condition") {
    InterpolationData data = tvi_test::witness_fixture();
    UniquenessReport rd = uniqueness_from_data(data, tol);
    CHECK(!rd.cond_full);
    CHECK(!rd.cond_coiso);
    CHECK(!rd.cond_split);
    CHECK(!rd.unique);

    BlockMatrix h = central_solution(data);
    InducedData ind = induced_contractions(h, data, tol);
    CHECK(!uniqueness_from_induced(ind, tol).unique);
    CHECK(parameter_perturbation(ind, tol).has_value());
  }
}

TEST_CASE("non-uniqueness witness on the designed fixture") {
  Tolerance tol;
  InterpolationData data = tvi_test::witness_fixture();
  BlockMatrix h = central_solution(data);

  auto witness = data_level_witness(data, tol);
  REQUIRE(witness.has_value());
  CHECK(witness->row == 0);
  CHECK(witness->col == 0);
  CHECK(std::abs(witness->predicted_gap - 0.5) < 1e-12);

  PairReport pr = check_pair(witness->alternative, data, tol);
  CHECK(pr.ok);

  BlockMatrix h2 = construct(witness->alternative).solution;
  CHECK(check_interpolation(h2, data, tol).ok());
  double gap = tvi_test::dense_diff(h2, h);
  CHECK(gap >= 1e-3);
  Mat block_gap = h2.block(witness->row, witness->col) - h.block(witness->row, witness->col);
  CHECK(std::abs(op_norm(block_gap) - witness->predicted_gap) < 1e-9);
}

TEST_CASE("perturbed parameters stay admissible") {
  Tolerance tol;
  InterpolationData data = tvi_test::witness_fixture();
  BlockMatrix h = central_solution(data);
  InducedData ind = induced_contractions(h, data, tol);

  auto bump = parameter_perturbation(ind, tol);
  REQUIRE(bump.has_value());
  BlockMatrix canon = canonical_parameter(ind);
  BlockMatrix shifted = add(canon, *bump);
  ParameterReport r = check_parameter(shifted, ind, tol);
  CHECK(r.ok);
  CHECK(tvi_test::dense_diff(shifted, canon) > 1e-3);

  Parametrization p1 = parametrize_solution(h, data, canon, tol);
  Parametrization p2 = parametrize_solution(h, data, shifted, tol);
  double pair_gap = tvi_test::dense_diff(p1.pair.top, p2.pair.top) +
                    tvi_test::dense_diff(p1.pair.bottom, p2.pair.bottom);
  CHECK(pair_gap > 1e-6);
}

TEST_CASE("verdicts agree with perturbation existence") {
  Tolerance tol;
  RandomSource rng(504);
  for (int trial = 0; trial < 20; ++trial) {
    Window w{0, rng.uniform_int(1, 3)};
    RandomDataOptions opts;
    opts.force_full_spaces = (trial % 4 == 0);
    InterpolationData data = random_data(rng, w, opts);
    BlockMatrix h = central_solution(data);
    InducedData ind = induced_contractions(h, data, tol);
    UniquenessReport rep = uniqueness_from_induced(ind, tol);
    CHECK(rep.unique == !parameter_perturbation(ind, tol).has_value());
  }
}
