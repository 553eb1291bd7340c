#pragma once

#include "latentkit/rng.hpp"
#include "latentkit/types.hpp"

namespace latentkit {

/// N x d batch of i.i.d. standard normal draws, deterministic per seed.
LatentBatch sample_gaussian(Index n, Index d, RngSeed seed);

/// Mean, unbiased variance and Pearson correlation of a batch. Needs N >= 2.
BatchStats batch_stats(const LatentBatch& batch);

}  // namespace latentkit
