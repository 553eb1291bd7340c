#include "latentkit/jacobian.hpp"

#include "latentkit/kernels.hpp"

#include <numeric>

namespace latentkit {

JacobianMatrix build_jacobian(const Matrix& delta_w, const Matrix& delta_targets,
                              std::vector<Index> target_shape, double ridge) {
  const Index n = delta_w.rows(), d = delta_w.cols(), s = delta_targets.cols();
  require(delta_targets.rows() == n, "build_jacobian: row count mismatch");
  require(s >= 1, "build_jacobian: need at least one target dimension");
  require(ridge >= 0.0, "build_jacobian: ridge must be nonnegative");
  require(n > d || ridge > 0.0, "build_jacobian: need N > d, or a positive ridge");

  if (target_shape.empty()) target_shape = {s};
  const Index prod = std::accumulate(target_shape.begin(), target_shape.end(),
                                     Index{1}, std::multiplies<Index>());
  require(prod == s, "build_jacobian: target_shape does not multiply out to S");

  Matrix normal = kernels::gram(delta_w);
  normal.diagonal().array() += ridge;
  Eigen::ColPivHouseholderQR<Matrix> qr(normal);
  if (ridge == 0.0 && qr.rank() < d)
    throw std::runtime_error("rank-deficient system, supply ridge");

  const Matrix rhs = kernels::multiply_at_b(delta_w, delta_targets);  // d x S

  Matrix j(s, d);
  const int threads = max_threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
  for (Index p = 0; p < s; ++p) {
    const Vector col = rhs.col(p);
    const Vector x = qr.solve(col);
    j.row(p) = x.transpose();
  }
  return JacobianMatrix{std::move(j), std::move(target_shape)};
}

}  // namespace latentkit
