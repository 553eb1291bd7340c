#pragma once

#include "latentkit/rng.hpp"
#include "latentkit/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace latentkit {

/// Parameters of a planted linear-generative world.
struct OracleSpec {
  Index d = 32;            // latent dimension
  Index s = 256;           // target (canonical) dimension
  Index p_true = 6;        // planted component count
  double sparsity = 0.1;   // nonzero fraction per planted component
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> direction_names;  // default: dir_0, dir_1, dir_2
};

/// Ground-truth world: sparse target components u_star paired with
/// orthonormal latent representations v_star, plus named unit directions for
/// scalar semantics. Observations are exactly linear up to Gaussian noise.
struct OracleWorld {
  OracleSpec spec;
  Matrix u_star;   // S x p_true, sparse columns, norms in [0.5, 2]
  Matrix v_star;   // d x p_true, orthonormal columns
  Vector bias;     // S
  std::map<std::string, Vector> direction_truths;
};

OracleWorld make_world(const OracleSpec& spec);

/// v'w + noise for the named direction.
double observe_scalar(const OracleWorld& world, const std::string& name,
                      const Vector& w, Rng& rng);

/// bias + u_star (v_star' w) + noise.
Vector observe_canonical(const OracleWorld& world, const Vector& w, Rng& rng);

}  // namespace latentkit
