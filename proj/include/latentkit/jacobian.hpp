#pragma once

#include "latentkit/types.hpp"

#include <vector>

namespace latentkit {

/// S x d stack of per-target-dimension direction estimates. Rows keep their
/// least-squares magnitude (no normalization): the downstream factorization
/// reconstructs this matrix, so relative row scale matters. target_shape
/// multiplies out to S.
struct JacobianMatrix {
  Matrix data;
  std::vector<Index> target_shape;

  Index targets() const { return data.rows(); }
  Index dim() const { return data.cols(); }
};

/// One regression per target dimension against shared difference inputs.
/// The normal-matrix factorization is computed once and reused by all S
/// solves; columns are independent, so the result is identical for any
/// thread count.
JacobianMatrix build_jacobian(const Matrix& delta_w, const Matrix& delta_targets,
                              std::vector<Index> target_shape = {}, double ridge = 0.0);

}  // namespace latentkit
