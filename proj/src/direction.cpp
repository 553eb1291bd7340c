#include "latentkit/direction.hpp"

#include "latentkit/kernels.hpp"

#include <cmath>

namespace latentkit {

DifferenceSet make_differences(const Matrix& w1, const Matrix& w0,
                               const Vector& y1, const Vector& y0) {
  require(w1.rows() == w0.rows() && w1.cols() == w0.cols(),
          "make_differences: latent pair shapes differ");
  require(y1.size() == y0.size() && y1.size() == w1.rows(),
          "make_differences: semantic values do not match pair count");
  require(w1.allFinite() && w0.allFinite() && y1.allFinite() && y0.allFinite(),
          "make_differences: non-finite input");
  return DifferenceSet{w1 - w0, y1 - y0};
}

DirectionVector fit_direction(const DifferenceSet& diffs, double ridge) {
  const Index n = diffs.delta_w.rows(), d = diffs.delta_w.cols();
  require(n == diffs.delta_y.size(), "fit_direction: row count mismatch");
  require(ridge >= 0.0, "fit_direction: ridge must be nonnegative");
  require(n > d || ridge > 0.0, "fit_direction: need N > d, or a positive ridge");

  Matrix normal = kernels::gram(diffs.delta_w);
  normal.diagonal().array() += ridge;
  Vector rhs = diffs.delta_w.transpose() * diffs.delta_y;

  Eigen::ColPivHouseholderQR<Matrix> qr(normal);
  if (ridge == 0.0 && qr.rank() < d)
    throw std::runtime_error("rank-deficient system, supply ridge");

  Vector v_raw = qr.solve(rhs);
  const double norm = v_raw.norm();
  if (norm == 0.0) throw std::runtime_error("semantic is constant over samples");

  DirectionVector dir;
  dir.v = v_raw / norm;
  dir.residual_rms =
      (diffs.delta_y - diffs.delta_w * v_raw).norm() / std::sqrt(static_cast<double>(n));
  return dir;
}

DirectionVector attach_sigma(DirectionVector dir, const LatentBatch& reference) {
  const Index n = reference.n_samples();
  require(n >= 2, "insufficient samples");
  require(reference.dim() == dir.v.size(), "attach_sigma: dimension mismatch");
  Vector proj = reference.data * dir.v;
  const double mean = proj.mean();
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double t = proj(i) - mean;
    ss += t * t;
  }
  dir.sigma_w = std::sqrt(ss / static_cast<double>(n - 1));
  return dir;
}

Vector manipulate(const Vector& w, const DirectionVector& dir, double scale) {
  require(w.size() == dir.v.size(), "manipulate: dimension mismatch");
  const double proj = w.dot(dir.v);
  return w - proj * dir.v + scale * dir.sigma_w * dir.v;
}

void ema_update(EmaDirection& state, const Vector& new_v) {
  const double norm = new_v.norm();
  require(norm > 0.0, "ema_update: zero direction");
  require(std::abs(norm - 1.0) <= 1e-6, "ema_update: direction must be unit norm");
  if (!state.initialized()) {
    state.v_ema = new_v / norm;
  } else {
    Vector aligned = state.v_ema.dot(new_v) < 0.0 ? Vector(-new_v) : new_v;
    Vector mixed = state.momentum * state.v_ema + (1.0 - state.momentum) * aligned;
    const double mnorm = mixed.norm();
    require(mnorm > 0.0, "ema_update: degenerate average");
    state.v_ema = mixed / mnorm;
  }
  ++state.step_counter;
}

double augmentation_scale(Rng& rng, double lo, double hi) {
  require(lo <= hi, "augmentation_scale: empty range");
  return rng.uniform(lo, hi);
}

}  // namespace latentkit
