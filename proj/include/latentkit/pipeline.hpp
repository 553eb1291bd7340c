#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace latentkit {

/// Configuration problems (unknown stage, missing dependency, bad schema).
/// The CLI maps these to exit code 2; nothing is written once thrown.
struct PipelineConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validates the whole config up front, then executes the declared stages in
/// order. Every stage writes its outputs plus a manifest under
/// out_dir/NN-<stage>/; the final report lands in out_dir/report.json.
/// Returns the report.
nlohmann::json run_pipeline(const nlohmann::json& config,
                            const std::filesystem::path& out_dir,
                            const std::filesystem::path& config_path = {},
                            bool quiet = true);

/// One grid point of an (alpha, beta) sweep, averaged over the configured
/// seeds. survivors/mean_u_l1 are post-prune statistics; max_offdiag is the
/// largest off-diagonal |v_i'v_j| of the full solved model.
struct SweepRow {
  double alpha = 0.0, beta = 0.0;
  double survivors = 0.0, mean_u_l1 = 0.0, max_offdiag = 0.0, objective = 0.0;
  double survivors_std = 0.0, mean_u_l1_std = 0.0, max_offdiag_std = 0.0, objective_std = 0.0;
};

std::vector<SweepRow> run_sweep(const nlohmann::json& config, bool quiet = true);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace latentkit
