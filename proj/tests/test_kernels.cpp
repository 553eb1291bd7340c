#include "latentkit/kernels.hpp"

#include "latentkit/core.hpp"

#include <doctest.h>

using namespace latentkit;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  return sample_gaussian(rows, cols, RngSeed{seed}).data;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Matrix a = random_matrix(37, 11, seed);
    const Matrix b = random_matrix(11, 23, seed + 100);
    const Matrix c = random_matrix(37, 23, seed + 200);
    const Matrix e = random_matrix(5, 11, seed + 300);

    CHECK(bitwise_equal(kernels::gram_serial(a), kernels::gram_parallel(a, 4)));
    CHECK(bitwise_equal(kernels::multiply_serial(a, b), kernels::multiply_parallel(a, b, 4)));
    CHECK(bitwise_equal(kernels::multiply_at_b_serial(a, c),
                        kernels::multiply_at_b_parallel(a, c, 4)));
    CHECK(bitwise_equal(kernels::multiply_a_bt_serial(a, e),
                        kernels::multiply_a_bt_parallel(a, e, 4)));
  }
}

TEST_CASE("kernels agree with dense algebra") {
  const Matrix a = random_matrix(19, 7, 42);
  const Matrix b = random_matrix(7, 13, 43);
  const Matrix c = random_matrix(19, 5, 44);
  const Matrix e = random_matrix(9, 7, 45);

  CHECK((kernels::gram_serial(a) - Matrix(a.transpose() * a)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((kernels::multiply_serial(a, b) - Matrix(a * b)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((kernels::multiply_at_b_serial(a, c) - Matrix(a.transpose() * c)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((kernels::multiply_a_bt_serial(a, e) - Matrix(a * e.transpose())).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("gram output is exactly symmetric") {
  const Matrix a = random_matrix(31, 9, 7);
  const Matrix g = kernels::gram(a);
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) CHECK(g(i, j) == g(j, i));
}

TEST_CASE("dispatch honors the global thread setting") {
  const Matrix a = random_matrix(16, 6, 11);
  set_max_threads(1);
  const Matrix serial = kernels::gram(a);
  set_max_threads(4);
  const Matrix parallel = kernels::gram(a);
  set_max_threads(1);
  CHECK(bitwise_equal(serial, parallel));
}

TEST_CASE("kernel shape mismatches are rejected") {
  const Matrix a = random_matrix(4, 3, 0);
  const Matrix b = random_matrix(4, 3, 1);
  CHECK_THROWS_AS(kernels::multiply_serial(a, b), std::invalid_argument);
  CHECK_THROWS_AS(kernels::multiply_at_b_serial(a, random_matrix(5, 2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernels::multiply_a_bt_serial(a, random_matrix(5, 2, 3)),
                  std::invalid_argument);
}
