#pragma once

#include "latentkit/rng.hpp"
#include "latentkit/types.hpp"

namespace latentkit {

/// Paired latent/semantic differences: delta_w row r is w1 - w0 of pair r,
/// delta_y(r) the matching semantic-value difference.
struct DifferenceSet {
  Matrix delta_w;
  Vector delta_y;
};

DifferenceSet make_differences(const Matrix& w1, const Matrix& w0,
                               const Vector& y1, const Vector& y0);

/// Unit-norm semantic direction with the projection spread sigma_w used by
/// manipulate(). sigma_w stays 0 until attach_sigma supplies a reference
/// batch.
struct DirectionVector {
  Vector v;
  double sigma_w = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares direction from difference pairs via the normal equations
/// (rank-revealing QR; ridge lifts the N > d requirement). The returned v is
/// unit norm; the pre-normalization magnitude is only reflected in
/// residual_rms.
DirectionVector fit_direction(const DifferenceSet& diffs, double ridge = 0.0);

/// Sets sigma_w to the unbiased standard deviation of w'v over the reference.
DirectionVector attach_sigma(DirectionVector dir, const LatentBatch& reference);

/// w - (w'v) v + scale * sigma_w * v. The result's projection onto v is
/// exactly scale * sigma_w.
Vector manipulate(const Vector& w, const DirectionVector& dir, double scale);

/// Exponentially smoothed direction estimate. Sign-aligns each incoming
/// estimate before averaging (directions are sign-ambiguous) and renormalizes
/// after every update. Single-writer: serialize updates externally.
struct EmaDirection {
  Vector v_ema;
  double momentum = 0.995;
  int update_interval = 10;
  long step_counter = 0;

  bool initialized() const { return v_ema.size() > 0; }
};

void ema_update(EmaDirection& state, const Vector& new_v);

/// Uniform extrapolation scale, default range [-10, 10].
double augmentation_scale(Rng& rng, double lo = -10.0, double hi = 10.0);

}  // namespace latentkit
