#pragma once

#include "latentkit/jacobian.hpp"
#include "latentkit/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace latentkit {

/// Factorization of a Jacobian into sparse target-space components (columns
/// of u) paired with unit-norm latent representations (columns of v_hat).
struct ComponentModel {
  Matrix u;      // S x P
  Matrix v_hat;  // d x P, unit-norm columns
  double alpha = 1.0;
  double beta = 1.0;

  Index components() const { return u.cols(); }
};

struct ObjectiveValue {
  double total = 0.0;
  double recon = 0.0;  // squared Frobenius residual of J - U V'
  double l1 = 0.0;     // alpha * sum |U|
  double ortho = 0.0;  // beta * sum over ordered pairs of (v_i'v_j)^2
};

/// Evaluates the factorization objective. Columns of v_hat must be unit norm
/// within 1e-6.
ObjectiveValue objective(const ComponentModel& model, const JacobianMatrix& j);

struct TracePoint {
  long iteration = 0;
  double total = 0.0, recon = 0.0, l1 = 0.0, ortho = 0.0;
};

struct SolveReport {
  std::vector<TracePoint> objective_trace;
  long iterations_run = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct SolveConfig {
  long max_iters = 500000;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  double tol = 1e-6;        // windowed relative-decrease stop threshold
  long window = 1000;       // iterations between logged objective points
  bool proximal_l1 = false; // soft-threshold U instead of subgradient
};

/// Alternating adaptive-moment updates on U and V with the V columns
/// projected back to the unit sphere after every step. Initialized from a
/// truncated SVD of J plus seeded 1e-3 jitter. Stops at max_iters or when
/// the relative objective decrease over one window falls below tol.
std::pair<ComponentModel, SolveReport> solve(const JacobianMatrix& j, Index p,
                                             double alpha, double beta,
                                             const SolveConfig& config = {});

/// Drops every component whose u column norm falls below threshold,
/// preserving the order of survivors.
ComponentModel prune(const ComponentModel& model, double threshold = 0.01);

/// One-to-one assignment of truth components to found components maximizing
/// total |cos| between latent representations; exact (subset DP) for up to
/// 16 truth components. Support IoU is taken at support_scale times the max
/// |entry| of each truth column.
struct MatchResult {
  std::vector<Index> assignment;   // truth column -> found column
  std::vector<double> abs_cos;     // per truth column
  std::vector<double> support_iou; // per truth column
  double total_score = 0.0;
};

MatchResult match_components(const ComponentModel& found, const ComponentModel& truth,
                             double support_scale = 0.05);

}  // namespace latentkit
