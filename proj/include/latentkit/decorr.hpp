#pragma once

#include "latentkit/types.hpp"

namespace latentkit {

/// Reading of the variance-equalization term: deviations are taken from the
/// mean of the per-dimension variances (default) or from their sum.
enum class VarianceTerm { kMean, kSum };

/// |rho| is clamped to 1 - kRhoClamp before the log so the loss stays finite
/// when two dimensions are (numerically) perfectly correlated. Clamped pairs
/// contribute zero gradient.
inline constexpr double kRhoClamp = 1e-7;

struct DecorrLoss {
  double total = 0.0;
  double corr_term = 0.0;  // -sum_{i != j} log(1 - |rho_ij|), ordered pairs
  double var_term = 0.0;   // sum_i (Var[w_i] - ref)^2
  int clamp_count = 0;     // ordered pairs that hit the clamp
};

/// Decorrelation penalty of a batch: pairwise-correlation term plus
/// variance-equalization term. Needs N >= 2.
DecorrLoss decorr_loss(const LatentBatch& batch, VarianceTerm mode = VarianceTerm::kMean);

/// Analytic gradient of decorr_loss(...).total with respect to every batch
/// entry. Matches central finite differences away from the clamp band.
Matrix decorr_grad(const LatentBatch& batch, VarianceTerm mode = VarianceTerm::kMean);

}  // namespace latentkit
