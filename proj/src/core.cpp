#include "latentkit/core.hpp"

#include "latentkit/kernels.hpp"

#include <cmath>

namespace latentkit {

LatentBatch make_batch(Matrix data) {
  require(data.rows() >= 1 && data.cols() >= 1, "batch must be at least 1x1");
  require(data.allFinite(), "batch contains non-finite entries");
  return LatentBatch{std::move(data)};
}

LatentBatch sample_gaussian(Index n, Index d, RngSeed seed) {
  require(n >= 1, "sample_gaussian: n must be >= 1");
  require(d >= 1, "sample_gaussian: d must be >= 1");
  Rng rng(seed);
  Matrix m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = rng.gaussian();
  return LatentBatch{std::move(m)};
}

BatchStats batch_stats(const LatentBatch& batch) {
  const Index n = batch.n_samples(), d = batch.dim();
  require(n >= 2, "insufficient samples");

  Vector mean = Vector::Zero(d);
  for (Index i = 0; i < n; ++i) mean += batch.data.row(i).transpose();
  mean /= static_cast<double>(n);

  Matrix centered = batch.data.rowwise() - mean.transpose();
  Matrix cov = kernels::gram(centered) / static_cast<double>(n - 1);
  Vector variance = cov.diagonal();

  Matrix corr(d, d);
  for (Index i = 0; i < d; ++i) {
    corr(i, i) = 1.0;
    for (Index j = i + 1; j < d; ++j) {
      double r = 0.0;
      if (variance(i) > 0.0 && variance(j) > 0.0) {
        r = cov(i, j) / std::sqrt(variance(i) * variance(j));
        if (r > 1.0) r = 1.0;
        if (r < -1.0) r = -1.0;
      }
      corr(i, j) = r;
      corr(j, i) = r;
    }
  }
  return BatchStats{std::move(mean), std::move(variance), std::move(corr)};
}

}  // namespace latentkit
