// Command-line front end: reproducible synthesize / regress / factorize /
// prune / cluster pipelines over CSV matrices with JSON manifests.

#include "latentkit/cluster.hpp"
#include "latentkit/core.hpp"
#include "latentkit/csv.hpp"
#include "latentkit/decorr.hpp"
#include "latentkit/direction.hpp"
#include "latentkit/jacobian.hpp"
#include "latentkit/kernels.hpp"
#include "latentkit/localized.hpp"
#include "latentkit/manifest.hpp"
#include "latentkit/oracle.hpp"
#include "latentkit/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latentkit;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
};

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return json::parse(in);
}

void dump_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << j.dump(2) << '\n';
}

OracleSpec spec_from_file(const fs::path& path, std::uint64_t fallback_seed) {
  const json j = load_json(path);
  OracleSpec spec;
  spec.d = j.value("d", 32);
  spec.s = j.value("S", 256);
  spec.p_true = j.value("p_true", 6);
  spec.sparsity = j.value("sparsity", 0.1);
  spec.noise_sigma = j.value("noise_sigma", 0.0);
  spec.seed = j.value("seed", fallback_seed);
  if (j.contains("directions"))
    spec.direction_names = j.at("directions").get<std::vector<std::string>>();
  return spec;
}

json direction_json(const DirectionVector& dir) {
  json v = json::array();
  for (Index i = 0; i < dir.v.size(); ++i) v.push_back(dir.v(i));
  return json{{"v", v}, {"sigma_w", dir.sigma_w}, {"residual_rms", dir.residual_rms}};
}

DirectionVector direction_from_json(const json& j) {
  DirectionVector dir;
  const auto vec = j.at("v").get<std::vector<double>>();
  dir.v = Eigen::Map<const Vector>(vec.data(), static_cast<Index>(vec.size()));
  dir.sigma_w = j.value("sigma_w", 0.0);
  dir.residual_rms = j.value("residual_rms", 0.0);
  return dir;
}

std::vector<Index> parse_shape(const std::string& spec) {
  std::vector<Index> shape;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t next = spec.find(',', pos);
    if (next == std::string::npos) next = spec.size();
    shape.push_back(std::stoll(spec.substr(pos, next - pos)));
    pos = next + 1;
  }
  return shape;
}

int cmd_synth(const GlobalOpts& g, const fs::path& spec_path, const fs::path& out) {
  const OracleSpec spec = spec_from_file(spec_path, g.seed);
  const OracleWorld world = make_world(spec);
  fs::create_directories(out);
  write_matrix_csv(out / "u_star.csv", world.u_star, "planted_components", spec.seed);
  write_matrix_csv(out / "v_star.csv", world.v_star, "planted_representations", spec.seed);
  write_matrix_csv(out / "bias.csv", Matrix(world.bias.transpose()), "canonical_bias", spec.seed);
  json dirs = json::object();
  for (const auto& [name, v] : world.direction_truths) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    dirs[name] = arr;
  }
  dump_json(out / "directions.json", dirs);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.parameters = {{"spec", spec_path.string()}};
  manifest.seed = spec.seed;
  manifest.input_hashes[spec_path.string()] = hash_hex(hash_file(spec_path));
  write_run_manifest(out, manifest);
  if (!g.quiet)
    std::fprintf(stderr, "world: d=%lld S=%lld p_true=%lld -> %s\n",
                 static_cast<long long>(spec.d), static_cast<long long>(spec.s),
                 static_cast<long long>(spec.p_true), out.string().c_str());
  return 0;
}

int cmd_synth_observe(const GlobalOpts& g, const fs::path& spec_path,
                      const std::string& semantic, bool canonical, Index n_pairs,
                      const std::string& pairing, double perturb_scale,
                      const fs::path& out) {
  const OracleSpec spec = spec_from_file(spec_path, g.seed);
  const OracleWorld world = make_world(spec);
  Rng rng(mix_seed(spec.seed, 0x0b5e));
  fs::create_directories(out);

  Matrix delta_w(n_pairs, spec.d);
  Matrix delta_t;
  Vector delta_y;
  if (canonical)
    delta_t.resize(n_pairs, spec.s);
  else
    delta_y.resize(n_pairs);

  const std::string name =
      semantic.empty() ? world.direction_truths.begin()->first : semantic;
  for (Index r = 0; r < n_pairs; ++r) {
    Vector w0(spec.d), w1(spec.d);
    for (Index c = 0; c < spec.d; ++c) w0(c) = rng.gaussian();
    if (pairing == "perturb")
      for (Index c = 0; c < spec.d; ++c) w1(c) = w0(c) + perturb_scale * rng.gaussian();
    else
      for (Index c = 0; c < spec.d; ++c) w1(c) = rng.gaussian();
    delta_w.row(r) = (w1 - w0).transpose();
    if (canonical)
      delta_t.row(r) =
          (observe_canonical(world, w1, rng) - observe_canonical(world, w0, rng)).transpose();
    else
      delta_y(r) = observe_scalar(world, name, w1, rng) - observe_scalar(world, name, w0, rng);
  }

  write_matrix_csv(out / "dw.csv", delta_w, "latent_differences", spec.seed);
  if (canonical)
    write_matrix_csv(out / "dtargets.csv", delta_t, "canonical_differences", spec.seed);
  else
    write_matrix_csv(out / "dy.csv", Matrix(delta_y), "semantic_differences", spec.seed);

  RunManifest manifest;
  manifest.command = "synth-observe";
  manifest.parameters = {{"spec", spec_path.string()},
                         {"semantic", canonical ? "<canonical>" : name},
                         {"n_pairs", n_pairs},
                         {"pairing", pairing}};
  manifest.seed = spec.seed;
  manifest.input_hashes[spec_path.string()] = hash_hex(hash_file(spec_path));
  write_run_manifest(out, manifest);
  return 0;
}

int cmd_decorr_eval(const fs::path& batch_path, bool as_json, const std::string& var_term) {
  const LatentBatch batch = make_batch(read_matrix_csv(batch_path));
  const VarianceTerm mode = var_term == "sum" ? VarianceTerm::kSum : VarianceTerm::kMean;
  const DecorrLoss loss = decorr_loss(batch, mode);
  if (as_json) {
    json j{{"total", loss.total}, {"corr_term", loss.corr_term},
           {"var_term", loss.var_term}, {"clamp_count", loss.clamp_count}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::printf("total       %s\n", format_double(loss.total).c_str());
    std::printf("corr_term   %s\n", format_double(loss.corr_term).c_str());
    std::printf("var_term    %s\n", format_double(loss.var_term).c_str());
    std::printf("clamp_count %d\n", loss.clamp_count);
  }
  return 0;
}

int cmd_fit_direction(const GlobalOpts& g, const fs::path& dw_path, const fs::path& dy_path,
                      double ridge, const fs::path& reference_path, Index n_reference,
                      const fs::path& out) {
  const Matrix dw = read_matrix_csv(dw_path);
  const Matrix dy = read_matrix_csv(dy_path);
  require(dy.cols() == 1, "fit-direction: --dy must be a single-column matrix");
  DifferenceSet diffs{dw, dy.col(0)};
  DirectionVector dir = fit_direction(diffs, ridge);
  if (!reference_path.empty()) {
    dir = attach_sigma(dir, make_batch(read_matrix_csv(reference_path)));
  } else if (n_reference > 0) {
    dir = attach_sigma(dir, sample_gaussian(n_reference, dw.cols(), RngSeed{g.seed}));
  }
  dump_json(out, direction_json(dir));
  if (!g.quiet)
    std::fprintf(stderr, "residual_rms=%g sigma_w=%g -> %s\n", dir.residual_rms, dir.sigma_w,
                 out.string().c_str());
  return 0;
}

int cmd_manipulate(const fs::path& w_path, const fs::path& dir_path, double scale,
                   const fs::path& out) {
  const Matrix w = read_matrix_csv(w_path);
  const DirectionVector dir = direction_from_json(load_json(dir_path));
  require(w.cols() == dir.v.size(), "manipulate: dimension mismatch");
  if (dir.sigma_w == 0.0 && scale != 0.0)
    std::fprintf(stderr, "warning: sigma_w is 0 (unset?); the scale term vanishes\n");
  Matrix result(w.rows(), w.cols());
  for (Index r = 0; r < w.rows(); ++r)
    result.row(r) = manipulate(w.row(r).transpose(), dir, scale).transpose();
  if (out.empty()) {
    for (Index r = 0; r < result.rows(); ++r) {
      for (Index c = 0; c < result.cols(); ++c) {
        if (c) std::printf(",");
        std::printf("%s", format_double(result(r, c)).c_str());
      }
      std::printf("\n");
    }
  } else {
    write_matrix_csv(out, result, "manipulated_latents");
  }
  return 0;
}

int cmd_jacobian(const GlobalOpts& g, const fs::path& dw_path, const fs::path& targets_path,
                 const std::string& shape_spec, double ridge, const fs::path& out) {
  const Matrix dw = read_matrix_csv(dw_path);
  const Matrix targets = read_matrix_csv(targets_path);
  std::vector<Index> shape;
  if (!shape_spec.empty()) shape = parse_shape(shape_spec);
  const JacobianMatrix jac = build_jacobian(dw, targets, shape, ridge);
  write_matrix_csv(out, jac.data, "jacobian");
  if (!g.quiet)
    std::fprintf(stderr, "jacobian %lldx%lld -> %s\n", static_cast<long long>(jac.targets()),
                 static_cast<long long>(jac.dim()), out.string().c_str());
  return 0;
}

int cmd_fit_components(const GlobalOpts& g, const fs::path& jac_path, Index p, double alpha,
                       double beta, const SolveConfig& cfg, const std::string& preset,
                       bool alpha_set, bool beta_set, const fs::path& out) {
  if (preset == "casia") {
    if (!alpha_set) alpha = 5.0;
    if (!beta_set) beta = 10.0;
  } else if (!preset.empty() && preset != "ffhq") {
    throw std::invalid_argument("unknown preset: " + preset);
  }
  const Matrix jdata = read_matrix_csv(jac_path);
  const JacobianMatrix jac{jdata, {jdata.rows()}};
  auto [model, report] = solve(jac, p, alpha, beta, cfg);

  fs::create_directories(out);
  write_matrix_csv(out / "U.csv", model.u, "components");
  write_matrix_csv(out / "Vhat.csv", model.v_hat, "representations");
  json trace = json::array();
  for (const auto& t : report.objective_trace)
    trace.push_back({t.iteration, t.total, t.recon, t.l1, t.ortho});
  dump_json(out / "report.json", json{{"iterations_run", report.iterations_run},
                                      {"converged", report.converged},
                                      {"warnings", report.warnings},
                                      {"alpha", alpha},
                                      {"beta", beta},
                                      {"P", p},
                                      {"objective_trace", trace}});
  RunManifest manifest;
  manifest.command = "fit-components";
  manifest.parameters = {{"jacobian", jac_path.string()}, {"P", p},       {"alpha", alpha},
                         {"beta", beta},                  {"lr", cfg.lr}, {"max_iters", cfg.max_iters},
                         {"tol", cfg.tol},                {"proximal", cfg.proximal_l1}};
  manifest.seed = cfg.seed;
  manifest.input_hashes[jac_path.string()] = hash_hex(hash_file(jac_path));
  write_run_manifest(out, manifest);
  if (!g.quiet)
    std::fprintf(stderr, "solved in %ld iterations (converged=%d) -> %s\n",
                 report.iterations_run, report.converged ? 1 : 0, out.string().c_str());
  return 0;
}

int cmd_prune(const GlobalOpts& g, const fs::path& model_dir, double threshold,
              const fs::path& out) {
  ComponentModel model;
  model.u = read_matrix_csv(model_dir / "U.csv");
  model.v_hat = read_matrix_csv(model_dir / "Vhat.csv");
  const ComponentModel kept = prune(model, threshold);
  fs::create_directories(out);
  write_matrix_csv(out / "U.csv", kept.u, "pruned_components");
  write_matrix_csv(out / "Vhat.csv", kept.v_hat, "pruned_representations");
  RunManifest manifest;
  manifest.command = "prune";
  manifest.parameters = {{"model", model_dir.string()}, {"threshold", threshold}};
  manifest.input_hashes[(model_dir / "U.csv").string()] = hash_hex(hash_file(model_dir / "U.csv"));
  manifest.input_hashes[(model_dir / "Vhat.csv").string()] =
      hash_hex(hash_file(model_dir / "Vhat.csv"));
  write_run_manifest(out, manifest);
  if (!g.quiet)
    std::fprintf(stderr, "kept %lld of %lld components -> %s\n",
                 static_cast<long long>(kept.components()),
                 static_cast<long long>(model.components()), out.string().c_str());
  return 0;
}

void write_dot(const fs::path& path, const Dendrogram& dendro) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << "graph dendrogram {\n";
  for (int leaf = 0; leaf < dendro.leaf_count; ++leaf)
    out << "  n" << leaf << " [label=\"" << leaf << "\", shape=box];\n";
  int next = dendro.leaf_count;
  for (const auto& m : dendro.merges) {
    out << "  n" << next << " [label=\"h=" << m.height << "\"];\n";
    out << "  n" << next << " -- n" << m.a << ";\n";
    out << "  n" << next << " -- n" << m.b << ";\n";
    ++next;
  }
  out << "}\n";
}

int cmd_cluster(const fs::path& vectors_path, int k, const std::string& metric,
                const fs::path& dot_path, const fs::path& out) {
  const Matrix vectors = read_matrix_csv(vectors_path);  // columns are compared
  const auto dist = abs_cosine_dissimilarity(
      vectors, metric == "one-minus-cos" ? CosineMetric::kAbsOneMinus
                                         : CosineMetric::kOneMinusAbs);
  const Dendrogram dendro = ward_linkage(dist);
  json merges = json::array();
  for (const auto& m : dendro.merges) merges.push_back({m.a, m.b, m.height, m.size});
  json j{{"leaf_count", dendro.leaf_count}, {"metric", dist.metric_tag}, {"merges", merges}};
  if (k >= 1) {
    j["k"] = k;
    j["labels"] = cut_clusters(dendro, k);
  }
  dump_json(out, j);
  if (!dot_path.empty()) write_dot(dot_path, dendro);
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const fs::path& config_path, const fs::path& out) {
  const json config = load_json(config_path);
  const auto rows = run_sweep(config, g.quiet);
  write_sweep_csv(out, rows);
  if (!g.quiet) std::fprintf(stderr, "%zu grid rows -> %s\n", rows.size(), out.string().c_str());
  return 0;
}

int cmd_pipeline(const GlobalOpts& g, const fs::path& config_path, const fs::path& out) {
  json config = load_json(config_path);
  if (g.seed != 0) config["seed"] = g.seed;
  const json report = run_pipeline(config, out, config_path, g.quiet);
  if (!g.quiet)
    std::fprintf(stderr, "pipeline %s -> %s\n",
                 report.value("pass", false) ? "pass" : "done", out.string().c_str());
  return 0;
}

int cmd_report(const fs::path& dir) {
  const json report = load_json(dir / "report.json");
  std::cout << report.dump(2) << '\n';

  // Recompute every hash recorded by the manifests under this directory.
  bool hashes_ok = true;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().filename() != "manifest.json") continue;
    const json manifest = load_json(entry.path());
    for (const auto& [file, expected] : manifest.at("input_hashes").items()) {
      if (!fs::exists(file)) {
        std::fprintf(stderr, "missing input: %s\n", file.c_str());
        hashes_ok = false;
        continue;
      }
      const std::string actual = hash_hex(hash_file(file));
      if (actual != expected.get<std::string>()) {
        std::fprintf(stderr, "hash mismatch: %s\n", file.c_str());
        hashes_ok = false;
      }
    }
  }
  std::fprintf(stderr, "input hashes %s\n", hashes_ok ? "verified" : "FAILED");
  return hashes_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent-space disentanglement toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--threads", g.threads, "thread budget for parallel kernels (0 = all cores)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  auto* synth = app.add_subcommand("synth", "generate a planted ground-truth world");
  fs::path synth_spec, synth_out;
  synth->add_option("--spec", synth_spec, "world spec JSON")->required();
  synth->add_option("--out", synth_out, "output directory")->required();

  auto* observe = app.add_subcommand("synth-observe", "sample difference datasets from a world");
  fs::path obs_spec, obs_out;
  std::string obs_semantic, obs_pairing = "independent";
  bool obs_canonical = false;
  Index obs_pairs = 4096;
  double obs_perturb = 0.1;
  observe->add_option("--spec", obs_spec, "world spec JSON")->required();
  observe->add_option("--semantic", obs_semantic, "named scalar semantic to observe");
  observe->add_flag("--canonical", obs_canonical, "observe the canonical target vector");
  observe->add_option("--n-pairs", obs_pairs, "number of difference pairs");
  observe->add_option("--pairing", obs_pairing, "independent | perturb");
  observe->add_option("--perturb-scale", obs_perturb, "perturbation scale for --pairing perturb");
  observe->add_option("--out", obs_out, "output directory")->required();

  auto* decorr = app.add_subcommand("decorr-eval", "evaluate the decorrelation penalty of a batch");
  fs::path decorr_batch;
  bool decorr_json = false;
  std::string decorr_var = "mean";
  decorr->add_option("--batch", decorr_batch, "batch CSV (rows are samples)")->required();
  decorr->add_flag("--json", decorr_json, "print JSON");
  decorr->add_option("--variance-term", decorr_var, "mean | sum");

  auto* fitdir = app.add_subcommand("fit-direction", "least-squares semantic direction");
  fs::path fd_dw, fd_dy, fd_ref, fd_out;
  double fd_ridge = 0.0;
  Index fd_nref = 4096;
  fitdir->add_option("--dw", fd_dw, "latent differences CSV")->required();
  fitdir->add_option("--dy", fd_dy, "semantic differences CSV (one column)")->required();
  fitdir->add_option("--ridge", fd_ridge, "ridge regularizer");
  fitdir->add_option("--reference", fd_ref, "reference batch CSV for sigma_w");
  fitdir->add_option("--n-reference", fd_nref, "sampled reference size when --reference absent");
  fitdir->add_option("--out", fd_out, "direction JSON output")->required();

  auto* manip = app.add_subcommand("manipulate", "project out a direction and extrapolate");
  fs::path mp_w, mp_dir, mp_out;
  double mp_scale = 0.0;
  manip->add_option("--w", mp_w, "latent codes CSV (rows)")->required();
  manip->add_option("--dir", mp_dir, "direction JSON")->required();
  manip->add_option("--scale", mp_scale, "extrapolation scale")->required();
  manip->add_option("--out", mp_out, "output CSV (default stdout)");

  auto* jac = app.add_subcommand("jacobian", "stacked per-target direction regression");
  fs::path jc_dw, jc_targets, jc_out;
  std::string jc_shape;
  double jc_ridge = 0.0;
  jac->add_option("--dw", jc_dw, "latent differences CSV")->required();
  jac->add_option("--targets", jc_targets, "target differences CSV (N x S)")->required();
  jac->add_option("--shape", jc_shape, "target shape, e.g. 16,16,1");
  jac->add_option("--ridge", jc_ridge, "ridge regularizer");
  jac->add_option("--out", jc_out, "output CSV path")->required();

  auto* fitc = app.add_subcommand("fit-components", "sparse + orthogonal factorization of a Jacobian");
  fs::path fc_jac, fc_out;
  Index fc_p = 200;
  double fc_alpha = 1.0, fc_beta = 1.0;
  SolveConfig fc_cfg;
  std::string fc_preset;
  auto* fc_alpha_opt = fitc->add_option("--alpha", fc_alpha, "sparsity weight");
  auto* fc_beta_opt = fitc->add_option("--beta", fc_beta, "orthogonality weight");
  fitc->add_option("-P,--components", fc_p, "component count");
  fitc->add_option("--jacobian", fc_jac, "Jacobian CSV")->required();
  fitc->add_option("--lr", fc_cfg.lr, "learning rate");
  fitc->add_option("--max-iters", fc_cfg.max_iters, "iteration cap");
  fitc->add_option("--tol", fc_cfg.tol, "windowed relative-decrease stop threshold");
  fitc->add_option("--window", fc_cfg.window, "iterations per objective checkpoint");
  fitc->add_flag("--proximal", fc_cfg.proximal_l1, "soft-threshold U instead of subgradient");
  fitc->add_option("--preset", fc_preset, "parameter preset: ffhq (1,1) | casia (5,10)");
  fitc->add_option("--out", fc_out, "output directory")->required();

  auto* prune_cmd = app.add_subcommand("prune", "drop components with small u norm");
  fs::path pr_model, pr_out;
  double pr_threshold = 0.01;
  prune_cmd->add_option("--model", pr_model, "model directory (U.csv, Vhat.csv)")->required();
  prune_cmd->add_option("--threshold", pr_threshold, "minimum u column norm");
  prune_cmd->add_option("--out", pr_out, "output directory")->required();

  auto* cluster_cmd = app.add_subcommand("cluster", "Ward agglomeration over column vectors");
  fs::path cl_vectors, cl_dot, cl_out;
  int cl_k = 0;
  std::string cl_metric = "abs-cos";
  cluster_cmd->add_option("--vectors", cl_vectors, "matrix CSV; columns are clustered")->required();
  cluster_cmd->add_option("--k", cl_k, "emit flat labels for k clusters");
  cluster_cmd->add_option("--metric", cl_metric, "abs-cos | one-minus-cos");
  cluster_cmd->add_option("--dot", cl_dot, "also write a graphviz file");
  cluster_cmd->add_option("--out", cl_out, "dendrogram JSON output")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "alpha/beta grid over the factorization");
  fs::path sw_config, sw_out;
  sweep_cmd->add_option("--config", sw_config, "sweep config JSON")->required();
  sweep_cmd->add_option("--out", sw_out, "output CSV")->required();

  auto* pipe_cmd = app.add_subcommand("pipeline", "run a staged config end to end");
  fs::path pl_config, pl_out;
  pipe_cmd->add_option("--config", pl_config, "pipeline config JSON")->required();
  pipe_cmd->add_option("--out", pl_out, "output directory")->required();

  auto* report_cmd = app.add_subcommand("report", "print a pipeline report and verify hashes");
  fs::path rp_dir;
  report_cmd->add_option("--dir", rp_dir, "pipeline output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  set_max_threads(g.threads);
  try {
    if (*synth) return cmd_synth(g, synth_spec, synth_out);
    if (*observe)
      return cmd_synth_observe(g, obs_spec, obs_semantic, obs_canonical, obs_pairs,
                               obs_pairing, obs_perturb, obs_out);
    if (*decorr) return cmd_decorr_eval(decorr_batch, decorr_json, decorr_var);
    if (*fitdir) return cmd_fit_direction(g, fd_dw, fd_dy, fd_ridge, fd_ref, fd_nref, fd_out);
    if (*manip) return cmd_manipulate(mp_w, mp_dir, mp_scale, mp_out);
    if (*jac) return cmd_jacobian(g, jc_dw, jc_targets, jc_shape, jc_ridge, jc_out);
    if (*fitc) {
      fc_cfg.seed = g.seed;
      return cmd_fit_components(g, fc_jac, fc_p, fc_alpha, fc_beta, fc_cfg, fc_preset,
                                fc_alpha_opt->count() > 0, fc_beta_opt->count() > 0, fc_out);
    }
    if (*prune_cmd) return cmd_prune(g, pr_model, pr_threshold, pr_out);
    if (*cluster_cmd) return cmd_cluster(cl_vectors, cl_k, cl_metric, cl_dot, cl_out);
    if (*sweep_cmd) return cmd_sweep(g, sw_config, sw_out);
    if (*pipe_cmd) return cmd_pipeline(g, pl_config, pl_out);
    if (*report_cmd) return cmd_report(rp_dir);
  } catch (const PipelineConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
