#include "latentkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latentkit {

OracleWorld make_world(const OracleSpec& spec) {
  require(spec.d >= 1 && spec.s >= 1, "make_world: dimensions must be positive");
  require(spec.p_true >= 1 && spec.p_true <= std::min(spec.s, spec.d),
          "make_world: p_true must be in [1, min(S, d)]");
  require(spec.sparsity > 0.0 && spec.sparsity <= 1.0, "make_world: sparsity in (0, 1]");
  require(spec.noise_sigma >= 0.0, "make_world: noise_sigma must be nonnegative");

  OracleWorld world;
  world.spec = spec;
  Rng rng(spec.seed);

  // Orthonormal latent representations from QR of a Gaussian draw; the sign
  // fix against the R diagonal makes the decomposition canonical.
  Matrix gauss(spec.d, spec.p_true);
  for (Index i = 0; i < spec.d; ++i)
    for (Index j = 0; j < spec.p_true; ++j) gauss(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix thin_q = qr.householderQ() * Matrix::Identity(spec.d, spec.p_true);
  const Matrix r = qr.matrixQR().topRows(spec.p_true).triangularView<Eigen::Upper>();
  for (Index j = 0; j < spec.p_true; ++j)
    if (r(j, j) < 0.0) thin_q.col(j) = -thin_q.col(j);
  world.v_star = std::move(thin_q);

  Vector magnitudes(spec.p_true);
  for (Index p = 0; p < spec.p_true; ++p) magnitudes(p) = rng.uniform(0.5, 2.0);

  const Index support = std::max<Index>(1, static_cast<Index>(std::llround(spec.sparsity * spec.s)));
  world.u_star = Matrix::Zero(spec.s, spec.p_true);
  std::vector<Index> idx(spec.s);
  for (Index p = 0; p < spec.p_true; ++p) {
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index t = 0; t < support; ++t) {
      const Index other = t + static_cast<Index>(rng.integer(spec.s - t));
      std::swap(idx[t], idx[other]);
    }
    Vector vals(support);
    for (Index t = 0; t < support; ++t) vals(t) = rng.gaussian();
    vals *= magnitudes(p) / vals.norm();
    for (Index t = 0; t < support; ++t) world.u_star(idx[t], p) = vals(t);
  }

  world.bias.resize(spec.s);
  for (Index i = 0; i < spec.s; ++i) world.bias(i) = rng.gaussian();

  std::vector<std::string> names = spec.direction_names;
  if (names.empty()) names = {"dir_0", "dir_1", "dir_2"};
  for (const auto& name : names) {
    Vector v(spec.d);
    for (Index i = 0; i < spec.d; ++i) v(i) = rng.gaussian();
    const double norm = v.norm();
    require(norm > 0.0, "make_world: degenerate direction draw");
    world.direction_truths[name] = v / norm;
  }
  return world;
}

double observe_scalar(const OracleWorld& world, const std::string& name,
                      const Vector& w, Rng& rng) {
  const auto it = world.direction_truths.find(name);
  require(it != world.direction_truths.end(), "observe_scalar: unknown direction " + name);
  require(w.size() == world.spec.d, "observe_scalar: dimension mismatch");
  return it->second.dot(w) + world.spec.noise_sigma * rng.gaussian();
}

Vector observe_canonical(const OracleWorld& world, const Vector& w, Rng& rng) {
  require(w.size() == world.spec.d, "observe_canonical: dimension mismatch");
  Vector out = world.bias + world.u_star * (world.v_star.transpose() * w);
  for (Index i = 0; i < world.spec.s; ++i) out(i) += world.spec.noise_sigma * rng.gaussian();
  return out;
}

}  // namespace latentkit
