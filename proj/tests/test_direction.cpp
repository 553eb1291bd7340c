#include "latentkit/direction.hpp"

#include "latentkit/core.hpp"

#include <doctest.h>

#include <cmath>

using namespace latentkit;

TEST_CASE("fit_direction normal-equations hand example") {
  Matrix dw(3, 2);
  dw << 1, 0, 0, 1, 1, 1;
  Vector dy(3);
  dy << 1, 2, 3;
  const auto dir = fit_direction({dw, dy}, 0.0);

  const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
  CHECK(std::abs(dir.v(0) - 1.0 * inv_sqrt5) < 1e-12);
  CHECK(std::abs(dir.v(1) - 2.0 * inv_sqrt5) < 1e-12);
  CHECK(dir.residual_rms < 1e-12);
  CHECK(dir.sigma_w == 0.0);
}

TEST_CASE("fit_direction recovers an exact linear model") {
  const Index d = 6;
  const auto dw = sample_gaussian(4 * d, d, RngSeed{17}).data;
  Vector u = sample_gaussian(1, d, RngSeed{18}).data.row(0).transpose();
  u.normalize();
  const Vector dy = dw * u;
  const auto dir = fit_direction({dw, dy});
  CHECK(std::abs(std::abs(dir.v.dot(u)) - 1.0) < 1e-10);
  CHECK(dir.residual_rms < 1e-10);
}

TEST_CASE("fit_direction is scale-invariant after normalization") {
  const auto dw = sample_gaussian(30, 4, RngSeed{3}).data;
  const Vector dy = sample_gaussian(30, 1, RngSeed{4}).data.col(0);
  const auto a = fit_direction({dw, dy});
  const auto b = fit_direction({dw, Vector(3.0 * dy)});
  CHECK((a.v - b.v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit_direction error paths") {
  // duplicated column -> singular normal matrix
  Matrix dw(10, 3);
  dw.setRandom();
  dw.col(2) = dw.col(1);
  const Vector dy = Vector::Ones(10);
  CHECK_THROWS_WITH_AS(fit_direction({dw, dy}, 0.0), "rank-deficient system, supply ridge",
                       std::runtime_error);
  CHECK_NOTHROW(fit_direction({dw, dy}, 1e-6));

  // too few rows without ridge
  Matrix small = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(fit_direction({small, Vector::Ones(3)}, 0.0), std::invalid_argument);
  CHECK_NOTHROW(fit_direction({small, Vector::Ones(3)}, 1e-8));

  // constant semantic
  Matrix ok = sample_gaussian(12, 3, RngSeed{9}).data;
  CHECK_THROWS_WITH_AS(fit_direction({ok, Vector::Zero(12)}),
                       "semantic is constant over samples", std::runtime_error);
}

TEST_CASE("make_differences subtracts pairwise") {
  Matrix w0(2, 2), w1(2, 2);
  w0 << 0, 0, 1, 1;
  w1 << 1, 2, 1, 1;
  Vector y0(2), y1(2);
  y0 << 1, 5;
  y1 << 4, 5;
  const auto diffs = make_differences(w1, w0, y1, y0);
  CHECK(diffs.delta_w(0, 0) == 1.0);
  CHECK(diffs.delta_w(0, 1) == 2.0);
  CHECK(diffs.delta_y(0) == 3.0);
  CHECK(diffs.delta_w.row(1).cwiseAbs().maxCoeff() == 0.0);  // identical pair
  CHECK(diffs.delta_y(1) == 0.0);

  CHECK_THROWS_AS(make_differences(w1, Matrix(Matrix::Zero(3, 2)), y1, y0),
                  std::invalid_argument);
}

TEST_CASE("attach_sigma hand example and degenerate reference") {
  DirectionVector dir;
  dir.v = Vector(2);
  dir.v << 1, 0;

  Matrix ref(2, 2);
  ref << 1, 0, -1, 0;
  const auto with_sigma = attach_sigma(dir, LatentBatch{ref});
  CHECK(with_sigma.sigma_w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  Matrix flat(3, 2);
  flat << 2, 5, 2, 5, 2, 5;
  CHECK(attach_sigma(dir, LatentBatch{flat}).sigma_w == 0.0);

  Matrix one(1, 2);
  one << 1, 2;
  CHECK_THROWS_AS(attach_sigma(dir, LatentBatch{one}), std::invalid_argument);
}

TEST_CASE("sigma of unit projections of a standard normal batch is near 1") {
  DirectionVector dir;
  dir.v = Vector::Zero(8);
  dir.v(3) = 1.0;
  const auto with_sigma = attach_sigma(dir, sample_gaussian(20000, 8, RngSeed{12}));
  CHECK(std::abs(with_sigma.sigma_w - 1.0) < 0.05);
}

TEST_CASE("manipulate hand example") {
  DirectionVector dir;
  dir.v = Vector(2);
  dir.v << 1, 0;
  dir.sigma_w = 2.0;
  Vector w(2);
  w << 3, 4;
  const Vector moved = manipulate(w, dir, 1.0);
  CHECK(moved(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(moved(1) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("manipulate projection identity and idempotence") {
  Rng rng(77);
  DirectionVector dir;
  dir.v = sample_gaussian(1, 16, RngSeed{5}).data.row(0).transpose();
  dir.v.normalize();
  dir.sigma_w = 1.7;
  for (int trial = 0; trial < 1000; ++trial) {
    Vector w(16);
    for (Index i = 0; i < 16; ++i) w(i) = rng.gaussian();
    const double s = rng.uniform(-10.0, 10.0);
    const Vector once = manipulate(w, dir, s);
    CHECK(std::abs(once.dot(dir.v) - s * dir.sigma_w) <= 1e-12);
    const Vector twice = manipulate(once, dir, s);
    CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("manipulate leaves orthogonal vectors alone at scale 0") {
  DirectionVector dir;
  dir.v = Vector(3);
  dir.v << 1, 0, 0;
  dir.sigma_w = 4.0;
  Vector w(3);
  w << 0, 2, -5;
  const Vector moved = manipulate(w, dir, 0.0);
  CHECK((moved - w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ema direction initialization, sign alignment, and norm") {
  EmaDirection state;
  CHECK(state.momentum == 0.995);
  CHECK(state.update_interval == 10);

  Vector u(3);
  u << 1, 0, 0;
  ema_update(state, u);
  CHECK(state.v_ema == u);
  CHECK(state.step_counter == 1);

  // anti-parallel estimate flips before averaging, so the state is unchanged
  ema_update(state, Vector(-u));
  CHECK((state.v_ema - u).cwiseAbs().maxCoeff() == 0.0);

  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    Vector v(3);
    for (Index j = 0; j < 3; ++j) v(j) = rng.gaussian();
    v.normalize();
    ema_update(state, v);
    CHECK(std::abs(state.v_ema.norm() - 1.0) <= 1e-12);
  }
  CHECK(state.step_counter == 52);

  CHECK_THROWS_AS(ema_update(state, Vector(Vector::Zero(3))), std::invalid_argument);
  CHECK_THROWS_AS(ema_update(state, Vector(2.0 * u)), std::invalid_argument);
}

TEST_CASE("augmentation scale bounds") {
  Rng rng(9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double s = augmentation_scale(rng);
    CHECK(s >= -10.0);
    CHECK(s <= 10.0);
    sum += s;
  }
  CHECK(std::abs(sum / 100000.0) < 0.1);

  Rng rng2(10);
  CHECK(augmentation_scale(rng2, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(augmentation_scale(rng2, 1.0, -1.0), std::invalid_argument);
}
