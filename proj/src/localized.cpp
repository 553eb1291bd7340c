#include "latentkit/localized.hpp"

#include "latentkit/kernels.hpp"
#include "latentkit/rng.hpp"

#include <cmath>
#include <string>

namespace latentkit {

namespace {

void check_shapes(const ComponentModel& model, const JacobianMatrix& j) {
  require(model.u.rows() == j.targets(), "component model S does not match Jacobian");
  require(model.v_hat.rows() == j.dim(), "component model d does not match Jacobian");
  require(model.u.cols() == model.v_hat.cols(), "U and V component counts differ");
}

void check_unit_columns(const Matrix& v_hat) {
  for (Index p = 0; p < v_hat.cols(); ++p)
    require(std::abs(v_hat.col(p).norm() - 1.0) <= 1e-6,
            "v_hat column " + std::to_string(p) + " is not unit norm");
}

ObjectiveValue objective_unchecked(const Matrix& u, const Matrix& v_hat,
                                   double alpha, double beta, const Matrix& j) {
  ObjectiveValue val;
  Matrix residual = kernels::multiply_a_bt(u, v_hat);
  residual -= j;
  val.recon = residual.squaredNorm();
  val.l1 = alpha * u.cwiseAbs().sum();
  const Matrix g = kernels::gram(v_hat);
  val.ortho = beta * (g.squaredNorm() - g.diagonal().squaredNorm());
  val.total = val.recon + val.l1 + val.ortho;
  return val;
}

struct AdamState {
  Matrix m, v;
  explicit AdamState(Index rows, Index cols)
      : m(Matrix::Zero(rows, cols)), v(Matrix::Zero(rows, cols)) {}
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

void adam_step(Matrix& x, const Matrix& grad, AdamState& st, long t, double lr) {
  st.m = kBeta1 * st.m + (1.0 - kBeta1) * grad;
  st.v = kBeta2 * st.v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
  x.array() -= lr * (st.m.array() / c1) / ((st.v.array() / c2).sqrt() + kEps);
}

void renormalize_columns(Matrix& v_hat) {
  for (Index p = 0; p < v_hat.cols(); ++p) {
    const double norm = v_hat.col(p).norm();
    if (!(norm > 0.0))
      throw std::runtime_error("v_hat column collapsed to zero during optimization");
    v_hat.col(p) /= norm;
  }
}

}  // namespace

ObjectiveValue objective(const ComponentModel& model, const JacobianMatrix& j) {
  check_shapes(model, j);
  check_unit_columns(model.v_hat);
  return objective_unchecked(model.u, model.v_hat, model.alpha, model.beta, j.data);
}

std::pair<ComponentModel, SolveReport> solve(const JacobianMatrix& j, Index p,
                                             double alpha, double beta,
                                             const SolveConfig& config) {
  const Index s = j.targets(), d = j.dim();
  require(p >= 1, "solve: need at least one component");
  require(alpha >= 0.0 && beta >= 0.0, "solve: alpha and beta must be nonnegative");
  require(config.lr > 0.0, "solve: learning rate must be positive");
  require(config.window >= 1, "solve: window must be positive");

  SolveReport report;
  if (p > std::min(s, d))
    report.warnings.push_back("requested components exceed min(S, d); factorization is overcomplete");

  // SVD start: U carries the singular values, V the right singular vectors.
  // The jitter breaks ties between equal singular directions and makes runs
  // reproducible per seed.
  Eigen::JacobiSVD<Matrix> svd(j.data, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index rank = std::min(p, svd.singularValues().size());
  Matrix u = Matrix::Zero(s, p);
  Matrix v_hat = Matrix::Zero(d, p);
  for (Index c = 0; c < rank; ++c) {
    u.col(c) = svd.matrixU().col(c) * svd.singularValues()(c);
    v_hat.col(c) = svd.matrixV().col(c);
  }
  Rng rng(mix_seed(config.seed, 0x6c6f63));
  for (Index c = rank; c < p; ++c)
    for (Index r = 0; r < d; ++r) v_hat(r, c) = rng.gaussian();
  for (Index c = rank; c < p; ++c)
    for (Index r = 0; r < s; ++r) u(r, c) = 1e-3 * rng.gaussian();
  for (Index c = 0; c < p; ++c)
    for (Index r = 0; r < s; ++r) u(r, c) += 1e-3 * rng.gaussian();
  for (Index c = 0; c < p; ++c)
    for (Index r = 0; r < d; ++r) v_hat(r, c) += 1e-3 * rng.gaussian();
  renormalize_columns(v_hat);

  AdamState adam_u(s, p), adam_v(d, p);
  const double shrink = config.lr * alpha;
  bool have_prev = false;
  double prev_total = 0.0;
  long iter = 0;

  auto log_point = [&](long it) {
    const ObjectiveValue val = objective_unchecked(u, v_hat, alpha, beta, j.data);
    if (!std::isfinite(val.total))
      throw std::runtime_error("objective diverged to a non-finite value at iteration " +
                               std::to_string(it));
    report.objective_trace.push_back({it, val.total, val.recon, val.l1, val.ortho});
    return val.total;
  };

  for (iter = 1; iter <= config.max_iters; ++iter) {
    Matrix residual = kernels::multiply_a_bt(u, v_hat);
    residual -= j.data;
    Matrix grad_u = 2.0 * kernels::multiply(residual, v_hat);
    if (!config.proximal_l1)
      grad_u.array() += alpha * u.array().sign();
    adam_step(u, grad_u, adam_u, iter, config.lr);
    if (config.proximal_l1)
      u = (u.array().sign() * (u.array().abs() - shrink).max(0.0)).matrix();

    residual = kernels::multiply_a_bt(u, v_hat);
    residual -= j.data;
    Matrix g = kernels::gram(v_hat);
    g.diagonal().setZero();
    Matrix grad_v = 2.0 * kernels::multiply_at_b(residual, u) +
                    4.0 * beta * kernels::multiply(v_hat, g);
    adam_step(v_hat, grad_v, adam_v, iter, config.lr);
    renormalize_columns(v_hat);

    if (iter == 1 || iter % config.window == 0) {
      const double total = log_point(iter);
      if (have_prev) {
        const double rel = (prev_total - total) / std::max(std::abs(prev_total), 1e-300);
        if (rel < config.tol) {
          report.converged = true;
          break;
        }
      }
      have_prev = true;
      prev_total = total;
    }
  }
  report.iterations_run = std::min(iter, config.max_iters);
  if (report.objective_trace.empty() ||
      report.objective_trace.back().iteration != report.iterations_run)
    log_point(report.iterations_run);

  ComponentModel model{std::move(u), std::move(v_hat), alpha, beta};
  return {std::move(model), std::move(report)};
}

ComponentModel prune(const ComponentModel& model, double threshold) {
  require(threshold >= 0.0, "prune: threshold must be nonnegative");
  std::vector<Index> keep;
  for (Index p = 0; p < model.components(); ++p)
    if (model.u.col(p).norm() >= threshold) keep.push_back(p);

  ComponentModel out;
  out.alpha = model.alpha;
  out.beta = model.beta;
  out.u.resize(model.u.rows(), static_cast<Index>(keep.size()));
  out.v_hat.resize(model.v_hat.rows(), static_cast<Index>(keep.size()));
  for (Index c = 0; c < static_cast<Index>(keep.size()); ++c) {
    out.u.col(c) = model.u.col(keep[c]);
    out.v_hat.col(c) = model.v_hat.col(keep[c]);
  }
  return out;
}

MatchResult match_components(const ComponentModel& found, const ComponentModel& truth,
                             double support_scale) {
  const Index pf = found.components(), pt = truth.components();
  require(pf >= pt, "match_components: found fewer components than truth");
  require(pt >= 1, "match_components: empty truth model");
  require(pt <= 16, "match_components: exact assignment supports at most 16 truth components");
  require(found.u.rows() == truth.u.rows() && found.v_hat.rows() == truth.v_hat.rows(),
          "match_components: shape mismatch");

  Matrix cos(pf, pt);
  for (Index f = 0; f < pf; ++f)
    for (Index t = 0; t < pt; ++t) {
      const double nf = found.v_hat.col(f).norm(), nt = truth.v_hat.col(t).norm();
      require(nf > 0.0 && nt > 0.0, "match_components: zero-norm column");
      cos(f, t) = std::abs(found.v_hat.col(f).dot(truth.v_hat.col(t))) / (nf * nt);
    }

  // Subset DP over truth columns, scanning found columns once.
  const std::size_t n_masks = std::size_t{1} << pt;
  std::vector<double> best(n_masks, -1.0);
  std::vector<std::int8_t> choice(n_masks * static_cast<std::size_t>(pf), -2);
  best[0] = 0.0;
  for (Index f = 0; f < pf; ++f) {
    std::vector<double> next = best;
    std::int8_t* ch = choice.data() + static_cast<std::size_t>(f) * n_masks;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (best[mask] < 0.0) continue;
      if (next[mask] <= best[mask]) ch[mask] = -1;  // found column f left unmatched
      for (Index t = 0; t < pt; ++t) {
        if (mask & (std::size_t{1} << t)) continue;
        const std::size_t m2 = mask | (std::size_t{1} << t);
        const double cand = best[mask] + cos(f, t);
        if (cand > next[m2]) {
          next[m2] = cand;
          ch[m2] = static_cast<std::int8_t>(t);
        }
      }
    }
    best = std::move(next);
  }

  const std::size_t full = n_masks - 1;
  MatchResult result;
  result.total_score = best[full];
  result.assignment.assign(pt, -1);

  std::size_t mask = full;
  for (Index f = pf - 1; f >= 0 && mask != 0; --f) {
    const std::int8_t t = choice[static_cast<std::size_t>(f) * n_masks + mask];
    if (t >= 0) {
      result.assignment[t] = f;
      mask &= ~(std::size_t{1} << t);
    }
  }
  require(mask == 0, "match_components: assignment reconstruction failed");

  result.abs_cos.resize(pt);
  result.support_iou.resize(pt);
  for (Index t = 0; t < pt; ++t) {
    const Index f = result.assignment[t];
    result.abs_cos[t] = cos(f, t);
    const double tau = support_scale * truth.u.col(t).cwiseAbs().maxCoeff();
    Index inter = 0, uni = 0;
    for (Index r = 0; r < truth.u.rows(); ++r) {
      const bool in_f = std::abs(found.u(r, f)) >= tau;
      const bool in_t = std::abs(truth.u(r, t)) >= tau;
      inter += in_f && in_t;
      uni += in_f || in_t;
    }
    result.support_iou[t] = uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
  }
  return result;
}

}  // namespace latentkit
