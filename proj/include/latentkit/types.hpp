#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace latentkit {

// Row-major throughout: batches store one sample per row and the hot loops
// walk rows contiguously.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// N x d batch of latent codes, one sample per row. Entries must be finite.
struct LatentBatch {
  Matrix data;

  Index n_samples() const { return data.rows(); }
  Index dim() const { return data.cols(); }
};

/// Validates shape and finiteness before wrapping.
LatentBatch make_batch(Matrix data);

/// Sample statistics of a batch. Variance is unbiased (denominator N-1).
/// A zero-variance column correlates 0 with every other column and 1 with
/// itself, so downstream losses stay finite.
struct BatchStats {
  Vector mean;
  Vector variance;
  Matrix correlation;
};

}  // namespace latentkit
