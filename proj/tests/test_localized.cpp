#include "latentkit/localized.hpp"

#include "latentkit/core.hpp"
#include "latentkit/cluster.hpp"
#include "latentkit/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace latentkit;

namespace {

JacobianMatrix planted_jacobian(const OracleWorld& world) {
  Matrix j = world.u_star * world.v_star.transpose();
  return JacobianMatrix{std::move(j), {world.spec.s}};
}

}  // namespace

TEST_CASE("objective hand example: identity factorization of the identity") {
  ComponentModel model;
  model.u = Matrix::Identity(2, 2);
  model.v_hat = Matrix::Identity(2, 2);
  model.alpha = 1.0;
  model.beta = 1.0;
  const JacobianMatrix j{Matrix(Matrix::Identity(2, 2)), {2}};
  const auto val = objective(model, j);
  CHECK(val.recon == 0.0);
  CHECK(val.l1 == 2.0);
  CHECK(val.ortho == 0.0);
  CHECK(val.total == 2.0);
}

TEST_CASE("penalty-free exact factorization has zero objective") {
  const auto world = make_world({8, 16, 3, 0.5, 0.0, 4});
  ComponentModel model{world.u_star, world.v_star, 0.0, 0.0};
  const auto val = objective(model, planted_jacobian(world));
  CHECK(val.total < 1e-18);
}

TEST_CASE("single component has no orthogonality term") {
  const auto world = make_world({6, 10, 1, 1.0, 0.0, 5});
  ComponentModel model{world.u_star, world.v_star, 2.0, 100.0};
  CHECK(objective(model, planted_jacobian(world)).ortho == 0.0);
}

TEST_CASE("objective validates unit columns and shapes") {
  ComponentModel model;
  model.u = Matrix::Identity(2, 2);
  model.v_hat = 2.0 * Matrix::Identity(2, 2);
  const JacobianMatrix j{Matrix(Matrix::Identity(2, 2)), {2}};
  CHECK_THROWS_AS(objective(model, j), std::invalid_argument);

  model.v_hat = Matrix::Identity(3, 2);
  CHECK_THROWS_AS(objective(model, j), std::invalid_argument);
}

TEST_CASE("objective is invariant under paired permutation and sign flips") {
  const auto world = make_world({8, 20, 4, 0.4, 0.0, 6});
  const auto j = planted_jacobian(world);
  ComponentModel model{world.u_star, world.v_star, 0.7, 1.3};
  const auto base = objective(model, j);
  CHECK(base.total == base.recon + base.l1 + base.ortho);

  ComponentModel shuffled = model;
  const int perm[4] = {2, 0, 3, 1};
  for (int c = 0; c < 4; ++c) {
    shuffled.u.col(c) = model.u.col(perm[c]);
    shuffled.v_hat.col(c) = model.v_hat.col(perm[c]);
  }
  shuffled.u.col(1) *= -1.0;
  shuffled.v_hat.col(1) *= -1.0;
  const auto flipped = objective(shuffled, j);
  CHECK(flipped.total == doctest::Approx(base.total).epsilon(1e-12));
}

TEST_CASE("solve recovers a small planted factorization") {
  const auto world = make_world({8, 32, 2, 0.3, 0.0, 11});
  const auto j = planted_jacobian(world);
  SolveConfig cfg;
  cfg.max_iters = 30000;
  cfg.tol = 1e-7;
  cfg.seed = 11;
  auto [model, report] = solve(j, 3, 0.01, 1.0, cfg);

  // unit-norm constraint held at the end
  for (Index c = 0; c < model.components(); ++c)
    CHECK(std::abs(model.v_hat.col(c).norm() - 1.0) <= 1e-9);

  // every logged point decomposes exactly
  for (const auto& t : report.objective_trace) {
    CHECK(t.total == doctest::Approx(t.recon + t.l1 + t.ortho).epsilon(1e-9));
  }
  // non-increasing across logged windows; the final pair is the one whose
  // sub-tolerance decrease (or uptick) triggered the stop, so it is exempt
  for (std::size_t i = 1; i + 1 < report.objective_trace.size(); ++i) {
    const double prev = report.objective_trace[i - 1].total;
    const double cur = report.objective_trace[i].total;
    CHECK(cur <= prev);
  }

  const auto kept = prune(model, 0.01);
  REQUIRE(kept.components() >= 2);
  ComponentModel truth{world.u_star, world.v_star, 0.0, 0.0};
  const auto match = match_components(kept, truth);
  for (double c : match.abs_cos) CHECK(c >= 0.9);
  for (double iou : match.support_iou) CHECK(iou >= 0.6);

  // the cross-similarity view of the same recovery: every truth column has a
  // near-parallel solved column
  const Matrix sim = cross_similarity(kept.v_hat, world.v_star);
  for (Index t = 0; t < sim.cols(); ++t) CHECK(sim.col(t).maxCoeff() >= 0.9);
}

TEST_CASE("proximal mode also factorizes the planted problem") {
  const auto world = make_world({8, 32, 2, 0.3, 0.0, 12});
  SolveConfig cfg;
  cfg.max_iters = 30000;
  cfg.tol = 1e-7;
  cfg.seed = 12;
  cfg.proximal_l1 = true;
  auto [model, report] = solve(planted_jacobian(world), 3, 0.01, 1.0, cfg);
  const auto kept = prune(model, 0.01);
  REQUIRE(kept.components() >= 2);
  ComponentModel truth{world.u_star, world.v_star, 0.0, 0.0};
  const auto match = match_components(kept, truth);
  for (double c : match.abs_cos) CHECK(c >= 0.9);
}

TEST_CASE("overcomplete request is flagged") {
  const auto world = make_world({4, 6, 2, 1.0, 0.0, 13});
  SolveConfig cfg;
  cfg.max_iters = 10;
  auto [model, report] = solve(planted_jacobian(world), 5, 0.1, 0.1, cfg);
  CHECK(model.components() == 5);
  REQUIRE(!report.warnings.empty());
}

TEST_CASE("diverging objective aborts with a diagnostic") {
  const auto world = make_world({6, 12, 2, 0.5, 0.0, 14});
  SolveConfig cfg;
  cfg.max_iters = 5000;
  cfg.lr = 1e200;  // one step overflows the residual
  CHECK_THROWS_AS(solve(planted_jacobian(world), 2, 1.0, 1.0, cfg), std::runtime_error);
}

TEST_CASE("prune keeps order and drops weak columns") {
  ComponentModel model;
  model.u = Matrix::Zero(4, 3);
  model.u.col(0).setConstant(0.5);
  model.u.col(2).setConstant(0.3);  // col 1 stays zero
  model.v_hat = Matrix::Zero(2, 3);
  model.v_hat.row(0).setOnes();

  const auto kept = prune(model, 0.01);
  CHECK(kept.components() == 2);
  CHECK(kept.u.col(0)(0) == 0.5);
  CHECK(kept.u.col(1)(0) == 0.3);

  const auto all = prune(model, 0.0);
  CHECK(all.components() == 3);

  const auto none = prune(model, 100.0);
  CHECK(none.components() == 0);

  CHECK_THROWS_AS(prune(model, -1.0), std::invalid_argument);
}

TEST_CASE("match_components identity and permutation invariance") {
  const auto world = make_world({8, 20, 4, 0.4, 0.0, 15});
  ComponentModel truth{world.u_star, world.v_star, 0.0, 0.0};

  const auto self = match_components(truth, truth);
  for (Index t = 0; t < 4; ++t) {
    CHECK(self.assignment[t] == t);
    CHECK(self.abs_cos[t] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(self.support_iou[t] == 1.0);
  }

  ComponentModel scrambled = truth;
  const int perm[4] = {3, 1, 0, 2};
  for (int c = 0; c < 4; ++c) {
    scrambled.u.col(c) = truth.u.col(perm[c]);
    scrambled.v_hat.col(c) = truth.v_hat.col(perm[c]);
  }
  scrambled.u.col(2) *= -1.0;
  scrambled.v_hat.col(2) *= -1.0;
  const auto match = match_components(scrambled, truth);
  for (Index t = 0; t < 4; ++t) {
    CHECK(perm[match.assignment[t]] == t);
    CHECK(match.abs_cos[t] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(match.support_iou[t] == 1.0);
  }
}

TEST_CASE("match_components needs at least as many found components") {
  const auto world = make_world({8, 20, 3, 0.4, 0.0, 16});
  ComponentModel truth{world.u_star, world.v_star, 0.0, 0.0};
  ComponentModel fewer = prune(truth, 0.0);
  fewer.u.conservativeResize(Eigen::NoChange, 2);
  fewer.v_hat.conservativeResize(Eigen::NoChange, 2);
  CHECK_THROWS_AS(match_components(fewer, truth), std::invalid_argument);
}
