#include "latentkit/decorr.hpp"

#include "latentkit/core.hpp"
#include "latentkit/kernels.hpp"

#include <cmath>

namespace latentkit {

namespace {

struct CenteredStats {
  Matrix centered;  // N x d
  Vector variance;  // unbiased
  Matrix rho;       // clamped to [-1, 1], zero-variance convention applied
};

CenteredStats centered_stats(const LatentBatch& batch) {
  const Index n = batch.n_samples(), d = batch.dim();
  require(n >= 2, "insufficient samples");
  Vector mean = Vector::Zero(d);
  for (Index i = 0; i < n; ++i) mean += batch.data.row(i).transpose();
  mean /= static_cast<double>(n);
  Matrix centered = batch.data.rowwise() - mean.transpose();
  Matrix cov = kernels::gram(centered) / static_cast<double>(n - 1);
  Vector variance = cov.diagonal();
  Matrix rho(d, d);
  for (Index i = 0; i < d; ++i) {
    rho(i, i) = 1.0;
    for (Index j = i + 1; j < d; ++j) {
      double r = 0.0;
      if (variance(i) > 0.0 && variance(j) > 0.0) {
        r = cov(i, j) / std::sqrt(variance(i) * variance(j));
        r = std::clamp(r, -1.0, 1.0);
      }
      rho(i, j) = rho(j, i) = r;
    }
  }
  return {std::move(centered), std::move(variance), std::move(rho)};
}

double variance_reference(const Vector& variance, VarianceTerm mode) {
  return mode == VarianceTerm::kMean ? variance.mean() : variance.sum();
}

}  // namespace

DecorrLoss decorr_loss(const LatentBatch& batch, VarianceTerm mode) {
  const auto st = centered_stats(batch);
  const Index d = batch.dim();

  DecorrLoss loss;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i == j) continue;
      double a = std::abs(st.rho(i, j));
      if (a > 1.0 - kRhoClamp) {
        a = 1.0 - kRhoClamp;
        ++loss.clamp_count;
      }
      loss.corr_term += -std::log1p(-a);
    }
  }
  const double ref = variance_reference(st.variance, mode);
  for (Index i = 0; i < d; ++i) {
    const double t = st.variance(i) - ref;
    loss.var_term += t * t;
  }
  loss.total = loss.corr_term + loss.var_term;
  return loss;
}

Matrix decorr_grad(const LatentBatch& batch, VarianceTerm mode) {
  const auto st = centered_stats(batch);
  const Index n = batch.n_samples(), d = batch.dim();
  const double inv_nm1 = 1.0 / static_cast<double>(n - 1);

  // The gradient factors as centered * M:
  //   M(k,j) = 2 g_kj / ((N-1) sqrt(s_k s_j))          for j != k,
  //   M(k,k) = dV/ds_k * 2/(N-1) - sum_j 2 g_kj rho_kj / ((N-1) s_k),
  // with g_kj = sign(rho_kj) / (1 - |rho_kj|); clamped or zero-variance
  // pairs drop out.
  Matrix m = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    if (st.variance(k) <= 0.0) continue;
    double b = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (j == k || st.variance(j) <= 0.0) continue;
      const double r = st.rho(k, j);
      const double a = std::abs(r);
      if (a > 1.0 - kRhoClamp) continue;
      const double sgn = (r > 0.0) - (r < 0.0);
      const double g = sgn / (1.0 - a);
      m(k, j) = 2.0 * g * inv_nm1 / std::sqrt(st.variance(k) * st.variance(j));
      b += 2.0 * g * r * inv_nm1 / st.variance(k);
    }
    m(k, k) = -b;
  }

  const double ref = variance_reference(st.variance, mode);
  double dev_sum = 0.0;
  for (Index k = 0; k < d; ++k) dev_sum += st.variance(k) - ref;
  for (Index k = 0; k < d; ++k) {
    double dv = 2.0 * (st.variance(k) - ref);
    if (mode == VarianceTerm::kSum) dv -= 2.0 * dev_sum;
    m(k, k) += dv * 2.0 * inv_nm1;
  }

  return kernels::multiply(st.centered, m);
}

}  // namespace latentkit
