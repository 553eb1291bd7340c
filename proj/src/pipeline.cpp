#include "latentkit/pipeline.hpp"

#include "latentkit/cluster.hpp"
#include "latentkit/core.hpp"
#include "latentkit/csv.hpp"
#include "latentkit/decorr.hpp"
#include "latentkit/direction.hpp"
#include "latentkit/jacobian.hpp"
#include "latentkit/localized.hpp"
#include "latentkit/manifest.hpp"
#include "latentkit/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>

namespace latentkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::set<std::string> kKnownStages = {
    "synth",         "observe-scalar", "observe-canonical", "fit-direction",
    "jacobian",      "fit-components", "prune",             "match",
    "cluster",       "report"};

OracleSpec parse_oracle_spec(const json& j, std::uint64_t default_seed) {
  OracleSpec spec;
  spec.d = j.value("d", 32);
  spec.s = j.value("S", 256);
  spec.p_true = j.value("p_true", 6);
  spec.sparsity = j.value("sparsity", 0.1);
  spec.noise_sigma = j.value("noise_sigma", 0.0);
  spec.seed = j.value("seed", default_seed);
  if (j.contains("directions"))
    spec.direction_names = j.at("directions").get<std::vector<std::string>>();
  return spec;
}

json direction_to_json(const DirectionVector& dir) {
  json v = json::array();
  for (Index i = 0; i < dir.v.size(); ++i) v.push_back(dir.v(i));
  return json{{"v", v}, {"sigma_w", dir.sigma_w}, {"residual_rms", dir.residual_rms}};
}

json dendrogram_to_json(const Dendrogram& dendro) {
  json merges = json::array();
  for (const auto& m : dendro.merges) merges.push_back({m.a, m.b, m.height, m.size});
  return json{{"leaf_count", dendro.leaf_count}, {"merges", merges}};
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

struct PipelineContext {
  std::optional<OracleWorld> world;
  std::optional<DifferenceSet> scalar_diffs;
  std::string scalar_name;
  std::optional<Matrix> canon_delta_w;
  std::optional<Matrix> canon_delta_targets;
  std::optional<JacobianMatrix> jac;
  std::optional<ComponentModel> model;
  std::optional<SolveReport> solve_report;
  std::optional<ComponentModel> pruned;
  std::optional<Dendrogram> dendro;
  json report = json::object();
  std::vector<std::string> prev_outputs;  // files written by the previous stage
};

/// Sampled difference pairs against the oracle's scalar or canonical output.
template <typename Observe>
void sample_pairs(const OracleWorld& world, Index n_pairs, const std::string& pairing,
                  double perturb_scale, Rng& rng, Matrix& delta_w, Observe&& observe) {
  const Index d = world.spec.d;
  delta_w.resize(n_pairs, d);
  for (Index r = 0; r < n_pairs; ++r) {
    Vector w0(d), w1(d);
    for (Index c = 0; c < d; ++c) w0(c) = rng.gaussian();
    if (pairing == "perturb") {
      for (Index c = 0; c < d; ++c) w1(c) = w0(c) + perturb_scale * rng.gaussian();
    } else {
      for (Index c = 0; c < d; ++c) w1(c) = rng.gaussian();
    }
    delta_w.row(r) = (w1 - w0).transpose();
    observe(r, w1, w0);
  }
}

void validate_config(const json& config) {
  if (!config.is_object()) throw PipelineConfigError("config must be a JSON object");
  if (!config.contains("stages") || !config.at("stages").is_array() ||
      config.at("stages").empty())
    throw PipelineConfigError("config needs a nonempty 'stages' array");

  bool world = false, scalar = false, canon = false, jac = false, model = false;
  for (const auto& stage : config.at("stages")) {
    if (!stage.is_object() || !stage.contains("stage") || !stage.at("stage").is_string())
      throw PipelineConfigError("every stage needs a 'stage' name");
    const std::string name = stage.at("stage").get<std::string>();
    if (!kKnownStages.count(name)) throw PipelineConfigError("unknown stage name: " + name);

    if (name == "synth") {
      if (!config.contains("oracle"))
        throw PipelineConfigError("synth stage needs a top-level 'oracle' object");
      world = true;
    } else if (name == "observe-scalar") {
      if (!world) throw PipelineConfigError("observe-scalar needs a prior synth stage");
      scalar = true;
    } else if (name == "observe-canonical") {
      if (!world) throw PipelineConfigError("observe-canonical needs a prior synth stage");
      canon = true;
    } else if (name == "fit-direction") {
      if (!scalar) throw PipelineConfigError("fit-direction needs a prior observe-scalar stage");
    } else if (name == "jacobian") {
      const std::string source = stage.value("source", "estimate");
      if (source == "exact") {
        if (!world) throw PipelineConfigError("jacobian source 'exact' needs a prior synth stage");
      } else if (source == "estimate") {
        if (!canon)
          throw PipelineConfigError("jacobian needs a prior observe-canonical stage");
      } else {
        throw PipelineConfigError("jacobian source must be 'estimate' or 'exact'");
      }
      jac = true;
    } else if (name == "fit-components") {
      if (!jac) throw PipelineConfigError("fit-components needs a prior jacobian stage");
      model = true;
    } else if (name == "prune" || name == "cluster") {
      if (!model) throw PipelineConfigError(name + " needs a prior fit-components stage");
    } else if (name == "match") {
      if (!model || !world)
        throw PipelineConfigError("match needs prior synth and fit-components stages");
    }
  }
}

class StageRunner {
 public:
  StageRunner(const json& config, const fs::path& out_dir, bool quiet)
      : config_(config), out_dir_(out_dir), quiet_(quiet),
        master_seed_(config.value("seed", std::uint64_t{0})) {}

  json run(const fs::path& config_path) {
    fs::create_directories(out_dir_);
    const auto& stages = config_.at("stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const json& stage = stages[i];
      const std::string name = stage.at("stage").get<std::string>();
      const std::uint64_t stage_seed = mix_seed(master_seed_, i + 1);
      char prefix[8];
      std::snprintf(prefix, sizeof(prefix), "%02zu-", i);
      const fs::path stage_dir = out_dir_ / (prefix + name);
      fs::create_directories(stage_dir);
      if (!quiet_) std::fprintf(stderr, "[pipeline] stage %zu: %s\n", i, name.c_str());

      std::vector<std::string> outputs;
      try {
        outputs = execute(name, stage, stage_dir, stage_seed);
      } catch (const std::exception& e) {
        throw std::runtime_error("stage '" + name + "' failed: " + e.what());
      }

      RunManifest manifest;
      manifest.command = name;
      manifest.parameters = stage;
      manifest.seed = stage_seed;
      for (const auto& f : ctx_.prev_outputs)
        manifest.input_hashes[f] = hash_hex(hash_file(f));
      write_run_manifest(stage_dir, manifest);
      ctx_.prev_outputs = std::move(outputs);
    }

    finalize_report();
    write_json_file(out_dir_ / "report.json", ctx_.report);

    RunManifest top;
    top.command = "pipeline";
    top.parameters = config_;
    top.seed = master_seed_;
    if (!config_path.empty() && fs::exists(config_path))
      top.input_hashes[config_path.string()] = hash_hex(hash_file(config_path));
    write_run_manifest(out_dir_, top);
    return ctx_.report;
  }

 private:
  std::vector<std::string> execute(const std::string& name, const json& stage,
                                   const fs::path& dir, std::uint64_t seed) {
    if (name == "synth") return run_synth(stage, dir);
    if (name == "observe-scalar") return run_observe_scalar(stage, dir, seed);
    if (name == "observe-canonical") return run_observe_canonical(stage, dir, seed);
    if (name == "fit-direction") return run_fit_direction(stage, dir, seed);
    if (name == "jacobian") return run_jacobian(stage, dir);
    if (name == "fit-components") return run_fit_components(stage, dir, seed);
    if (name == "prune") return run_prune(stage, dir);
    if (name == "match") return run_match(stage, dir);
    if (name == "cluster") return run_cluster(stage, dir);
    return {};  // report: assembled at the end
  }

  std::vector<std::string> run_synth(const json&, const fs::path& dir) {
    const OracleSpec spec = parse_oracle_spec(config_.at("oracle"), master_seed_);
    ctx_.world = make_world(spec);
    const auto& w = *ctx_.world;
    write_matrix_csv(dir / "u_star.csv", w.u_star, "planted_components", spec.seed);
    write_matrix_csv(dir / "v_star.csv", w.v_star, "planted_representations", spec.seed);
    write_matrix_csv(dir / "bias.csv", Matrix(w.bias.transpose()), "canonical_bias", spec.seed);
    json dirs = json::object();
    for (const auto& [dname, v] : w.direction_truths) {
      json arr = json::array();
      for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
      dirs[dname] = arr;
    }
    write_json_file(dir / "directions.json", dirs);
    ctx_.report["oracle"] = {{"d", spec.d}, {"S", spec.s}, {"p_true", spec.p_true},
                             {"sparsity", spec.sparsity}, {"noise_sigma", spec.noise_sigma},
                             {"seed", spec.seed}};
    return {(dir / "u_star.csv").string(), (dir / "v_star.csv").string(),
            (dir / "bias.csv").string(), (dir / "directions.json").string()};
  }

  std::vector<std::string> run_observe_scalar(const json& stage, const fs::path& dir,
                                              std::uint64_t seed) {
    const auto& world = *ctx_.world;
    ctx_.scalar_name = stage.value("name", world.direction_truths.begin()->first);
    const Index n_pairs = stage.value("n_pairs", 4096);
    const std::string pairing = stage.value("pairing", "independent");
    const double perturb_scale = stage.value("perturb_scale", 0.1);

    Rng rng(seed);
    Matrix delta_w;
    Vector delta_y(n_pairs);
    sample_pairs(world, n_pairs, pairing, perturb_scale, rng, delta_w,
                 [&](Index r, const Vector& w1, const Vector& w0) {
                   delta_y(r) = observe_scalar(world, ctx_.scalar_name, w1, rng) -
                                observe_scalar(world, ctx_.scalar_name, w0, rng);
                 });
    ctx_.scalar_diffs = DifferenceSet{std::move(delta_w), std::move(delta_y)};
    write_matrix_csv(dir / "dw.csv", ctx_.scalar_diffs->delta_w, "latent_differences", seed);
    write_matrix_csv(dir / "dy.csv", Matrix(ctx_.scalar_diffs->delta_y), "semantic_differences", seed);
    return {(dir / "dw.csv").string(), (dir / "dy.csv").string()};
  }

  std::vector<std::string> run_observe_canonical(const json& stage, const fs::path& dir,
                                                 std::uint64_t seed) {
    const auto& world = *ctx_.world;
    const Index n_pairs = stage.value("n_pairs", 8192);
    const std::string pairing = stage.value("pairing", "independent");
    const double perturb_scale = stage.value("perturb_scale", 0.1);

    Rng rng(seed);
    Matrix delta_w;
    Matrix delta_t(n_pairs, world.spec.s);
    sample_pairs(world, n_pairs, pairing, perturb_scale, rng, delta_w,
                 [&](Index r, const Vector& w1, const Vector& w0) {
                   delta_t.row(r) = (observe_canonical(world, w1, rng) -
                                     observe_canonical(world, w0, rng)).transpose();
                 });
    ctx_.canon_delta_w = std::move(delta_w);
    ctx_.canon_delta_targets = std::move(delta_t);
    write_matrix_csv(dir / "dw.csv", *ctx_.canon_delta_w, "latent_differences", seed);
    write_matrix_csv(dir / "dtargets.csv", *ctx_.canon_delta_targets, "canonical_differences", seed);
    return {(dir / "dw.csv").string(), (dir / "dtargets.csv").string()};
  }

  std::vector<std::string> run_fit_direction(const json& stage, const fs::path& dir,
                                             std::uint64_t seed) {
    const double ridge = stage.value("ridge", 0.0);
    DirectionVector dir_vec = fit_direction(*ctx_.scalar_diffs, ridge);
    const Index n_ref = stage.value("n_reference", 4096);
    const LatentBatch reference =
        sample_gaussian(n_ref, dir_vec.v.size(), RngSeed{mix_seed(seed, 1)});
    dir_vec = attach_sigma(dir_vec, reference);
    write_json_file(dir / "direction.json", direction_to_json(dir_vec));

    json section{{"name", ctx_.scalar_name},
                 {"sigma_w", dir_vec.sigma_w},
                 {"residual_rms", dir_vec.residual_rms}};
    if (ctx_.world) {
      const Vector& truth = ctx_.world->direction_truths.at(ctx_.scalar_name);
      const double cos = std::abs(dir_vec.v.dot(truth));
      section["abs_cos_truth"] = cos;
      if (stage.contains("min_cos")) section["pass"] = cos >= stage.at("min_cos").get<double>();
    }
    ctx_.report["direction"] = section;
    return {(dir / "direction.json").string()};
  }

  std::vector<std::string> run_jacobian(const json& stage, const fs::path& dir) {
    const std::string source = stage.value("source", "estimate");
    if (source == "exact") {
      const auto& world = *ctx_.world;
      Matrix exact(world.u_star * world.v_star.transpose());
      ctx_.jac = JacobianMatrix{std::move(exact), {world.spec.s}};
    } else {
      ctx_.jac = build_jacobian(*ctx_.canon_delta_w, *ctx_.canon_delta_targets, {},
                                stage.value("ridge", 0.0));
    }
    write_matrix_csv(dir / "jacobian.csv", ctx_.jac->data, "jacobian");

    json section{{"S", ctx_.jac->targets()}, {"d", ctx_.jac->dim()}, {"source", source}};
    if (ctx_.world) {
      const Matrix truth = ctx_.world->u_star * ctx_.world->v_star.transpose();
      const double rel = (ctx_.jac->data - truth).norm() / truth.norm();
      section["rel_frobenius_error"] = rel;
      if (stage.contains("max_rel_error"))
        section["pass"] = rel < stage.at("max_rel_error").get<double>();
    }
    ctx_.report["jacobian"] = section;
    return {(dir / "jacobian.csv").string()};
  }

  std::vector<std::string> run_fit_components(const json& stage, const fs::path& dir,
                                              std::uint64_t seed) {
    SolveConfig cfg;
    cfg.max_iters = stage.value("max_iters", 500000L);
    cfg.lr = stage.value("lr", 1e-4);
    cfg.tol = stage.value("tol", 1e-6);
    cfg.window = stage.value("window", 1000L);
    cfg.proximal_l1 = stage.value("proximal", false);
    cfg.seed = stage.value("solve_seed", seed);
    const Index p = stage.value("P", 200);
    const double alpha = stage.value("alpha", 1.0);
    const double beta = stage.value("beta", 1.0);

    auto [model, rep] = solve(*ctx_.jac, p, alpha, beta, cfg);
    ctx_.model = std::move(model);
    ctx_.solve_report = std::move(rep);

    write_matrix_csv(dir / "U.csv", ctx_.model->u, "components");
    write_matrix_csv(dir / "Vhat.csv", ctx_.model->v_hat, "representations");
    json trace = json::array();
    for (const auto& t : ctx_.solve_report->objective_trace)
      trace.push_back({t.iteration, t.total, t.recon, t.l1, t.ortho});
    json rep_json{{"iterations_run", ctx_.solve_report->iterations_run},
                  {"converged", ctx_.solve_report->converged},
                  {"warnings", ctx_.solve_report->warnings},
                  {"objective_trace", trace}};
    write_json_file(dir / "report.json", rep_json);

    ctx_.report["fit_components"] = {{"P", p}, {"alpha", alpha}, {"beta", beta},
                                     {"iterations_run", ctx_.solve_report->iterations_run},
                                     {"converged", ctx_.solve_report->converged},
                                     {"final_objective", ctx_.solve_report->objective_trace.back().total}};
    return {(dir / "U.csv").string(), (dir / "Vhat.csv").string(),
            (dir / "report.json").string()};
  }

  std::vector<std::string> run_prune(const json& stage, const fs::path& dir) {
    const double threshold = stage.value("threshold", 0.01);
    ctx_.pruned = prune(*ctx_.model, threshold);
    write_matrix_csv(dir / "U.csv", ctx_.pruned->u, "pruned_components");
    write_matrix_csv(dir / "Vhat.csv", ctx_.pruned->v_hat, "pruned_representations");
    ctx_.report["prune"] = {{"threshold", threshold},
                            {"survivors", ctx_.pruned->components()}};
    return {(dir / "U.csv").string(), (dir / "Vhat.csv").string()};
  }

  std::vector<std::string> run_match(const json& stage, const fs::path& dir) {
    const auto& world = *ctx_.world;
    const ComponentModel& found = ctx_.pruned ? *ctx_.pruned : *ctx_.model;
    ComponentModel truth{world.u_star, world.v_star, 0.0, 0.0};
    const MatchResult res = match_components(found, truth, stage.value("support_scale", 0.05));

    const double min_cos = stage.value("min_cos", 0.95);
    const double min_iou = stage.value("min_iou", 0.8);
    bool pass = true;
    for (double c : res.abs_cos) pass = pass && c >= min_cos;
    for (double i : res.support_iou) pass = pass && i >= min_iou;
    if (stage.contains("kept_min"))
      pass = pass && found.components() >= stage.at("kept_min").get<Index>();
    if (stage.contains("kept_max"))
      pass = pass && found.components() <= stage.at("kept_max").get<Index>();

    json section{{"assignment", res.assignment}, {"abs_cos", res.abs_cos},
                 {"support_iou", res.support_iou}, {"total_score", res.total_score},
                 {"found_components", found.components()},
                 {"min_cos", min_cos}, {"min_iou", min_iou}, {"pass", pass}};
    write_json_file(dir / "match.json", section);
    ctx_.report["match"] = section;
    return {(dir / "match.json").string()};
  }

  std::vector<std::string> run_cluster(const json& stage, const fs::path& dir) {
    const ComponentModel& model = ctx_.pruned ? *ctx_.pruned : *ctx_.model;
    require(model.components() >= 2, "cluster: need at least two components");
    const std::string metric = stage.value("metric", "abs-cos");
    const auto dist = abs_cosine_dissimilarity(
        model.v_hat,
        metric == "one-minus-cos" ? CosineMetric::kAbsOneMinus : CosineMetric::kOneMinusAbs);
    ctx_.dendro = ward_linkage(dist);
    json section = dendrogram_to_json(*ctx_.dendro);
    const int k = stage.value("k", 3);
    if (k >= 1 && k <= ctx_.dendro->leaf_count) {
      section["k"] = k;
      section["labels"] = cut_clusters(*ctx_.dendro, k);
    }
    write_json_file(dir / "dendrogram.json", section);
    ctx_.report["cluster"] = section;
    return {(dir / "dendrogram.json").string()};
  }

  void finalize_report() {
    bool all_pass = true;
    bool any = false;
    for (const auto& [key, section] : ctx_.report.items()) {
      if (section.is_object() && section.contains("pass")) {
        any = true;
        all_pass = all_pass && section.at("pass").get<bool>();
      }
    }
    ctx_.report["pass"] = any && all_pass;
    ctx_.report["artifact_version"] = kArtifactVersion;
  }

  const json& config_;
  fs::path out_dir_;
  bool quiet_;
  std::uint64_t master_seed_;
  PipelineContext ctx_;
};

}  // namespace

json run_pipeline(const json& config, const fs::path& out_dir,
                  const fs::path& config_path, bool quiet) {
  validate_config(config);
  StageRunner runner(config, out_dir, quiet);
  return runner.run(config_path);
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<SweepRow> run_sweep(const json& config, bool quiet) {
  if (!config.is_object() || !config.contains("grid"))
    throw PipelineConfigError("sweep config needs a 'grid' object");
  const json& grid = config.at("grid");
  if (!grid.contains("alpha") || !grid.contains("beta") ||
      grid.at("alpha").empty() || grid.at("beta").empty())
    throw PipelineConfigError("sweep grid needs nonempty 'alpha' and 'beta' lists");
  if (!config.contains("oracle"))
    throw PipelineConfigError("sweep config needs an 'oracle' object");

  const auto alphas = grid.at("alpha").get<std::vector<double>>();
  const auto betas = grid.at("beta").get<std::vector<double>>();
  std::vector<std::uint64_t> seeds =
      config.value("seeds", std::vector<std::uint64_t>{config.value("seed", std::uint64_t{0})});
  if (seeds.empty()) throw PipelineConfigError("sweep needs at least one seed");

  SolveConfig base;
  base.max_iters = config.value("max_iters", 60000L);
  base.lr = config.value("lr", 1e-4);
  base.tol = config.value("tol", 1e-6);
  base.window = config.value("window", 1000L);
  base.proximal_l1 = config.value("proximal", false);
  const Index p = config.value("P", 8);
  const double threshold = config.value("prune_threshold", 0.01);
  const std::string source = config.value("source", "exact");
  if (source != "exact")
    throw PipelineConfigError("sweep currently factorizes the exact planted Jacobian");

  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    for (double beta : betas) {
      std::vector<double> survivors, mean_l1, offdiag, objective;
      for (std::uint64_t seed : seeds) {
        OracleSpec spec = parse_oracle_spec(config.at("oracle"), seed);
        spec.seed = seed;
        const OracleWorld world = make_world(spec);
        JacobianMatrix jac{Matrix(world.u_star * world.v_star.transpose()), {spec.s}};
        SolveConfig cfg = base;
        cfg.seed = seed;
        auto [model, rep] = solve(jac, p, alpha, beta, cfg);

        const ComponentModel kept = prune(model, threshold);
        survivors.push_back(static_cast<double>(kept.components()));
        double l1 = 0.0;
        for (Index c = 0; c < kept.components(); ++c) l1 += kept.u.col(c).cwiseAbs().sum();
        mean_l1.push_back(kept.components() ? l1 / kept.components() : 0.0);

        double off = 0.0;
        for (Index i = 0; i < model.components(); ++i)
          for (Index j = i + 1; j < model.components(); ++j)
            off = std::max(off, std::abs(model.v_hat.col(i).dot(model.v_hat.col(j))));
        offdiag.push_back(off);
        objective.push_back(rep.objective_trace.back().total);
        if (!quiet)
          std::fprintf(stderr, "[sweep] alpha=%g beta=%g seed=%llu survivors=%g\n", alpha,
                       beta, static_cast<unsigned long long>(seed), survivors.back());
      }
      SweepRow row;
      row.alpha = alpha;
      row.beta = beta;
      row.survivors = mean_of(survivors);
      row.mean_u_l1 = mean_of(mean_l1);
      row.max_offdiag = mean_of(offdiag);
      row.objective = mean_of(objective);
      row.survivors_std = std_of(survivors);
      row.mean_u_l1_std = std_of(mean_l1);
      row.max_offdiag_std = std_of(offdiag);
      row.objective_std = std_of(objective);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "alpha,beta,survivors,mean_u_l1,max_offdiag,objective,"
         "survivors_std,mean_u_l1_std,max_offdiag_std,objective_std\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.beta) << ','
        << format_double(r.survivors) << ',' << format_double(r.mean_u_l1) << ','
        << format_double(r.max_offdiag) << ',' << format_double(r.objective) << ','
        << format_double(r.survivors_std) << ',' << format_double(r.mean_u_l1_std) << ','
        << format_double(r.max_offdiag_std) << ',' << format_double(r.objective_std) << '\n';
  }
}

}  // namespace latentkit
