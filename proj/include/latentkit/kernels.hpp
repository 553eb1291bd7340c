#pragma once

#include "latentkit/types.hpp"

namespace latentkit {

/// Global thread budget for the parallel kernels. 1 selects the serial
/// reference path. Every parallel kernel assigns whole output rows to
/// threads and reduces each row in a fixed serial order, so results are
/// bit-identical to the serial path for any thread count.
int max_threads();
void set_max_threads(int n);

namespace kernels {

// a' * a  (symmetric, both triangles filled)
Matrix gram_serial(const Matrix& a);
Matrix gram_parallel(const Matrix& a, int threads);
Matrix gram(const Matrix& a);

// a * b
Matrix multiply_serial(const Matrix& a, const Matrix& b);
Matrix multiply_parallel(const Matrix& a, const Matrix& b, int threads);
Matrix multiply(const Matrix& a, const Matrix& b);

// a' * b
Matrix multiply_at_b_serial(const Matrix& a, const Matrix& b);
Matrix multiply_at_b_parallel(const Matrix& a, const Matrix& b, int threads);
Matrix multiply_at_b(const Matrix& a, const Matrix& b);

// a * b'
Matrix multiply_a_bt_serial(const Matrix& a, const Matrix& b);
Matrix multiply_a_bt_parallel(const Matrix& a, const Matrix& b, int threads);
Matrix multiply_a_bt(const Matrix& a, const Matrix& b);

}  // namespace kernels
}  // namespace latentkit
