#pragma once

#include <string>
#include <vector>

#include "topobreak/config.hpp"
#include "topobreak/stability.hpp"

namespace topobreak {

struct RunResult {
  std::vector<std::string> files;  // paths of everything written, manifest last
};

// Feature pipeline for a single cloud: filtration -> dimension-k diagram ->
// padding to N_k -> feature vector -> feature map row.
Eigen::VectorXd cloud_features(const PointCloud& x, const ExperimentConfig& cfg, double T,
                               RngStream* tie_stream);

// One row per cloud; tie-break streams are derived from rep_seed and t.
StatSeries series_features(const std::vector<PointCloud>& series, const ExperimentConfig& cfg,
                           std::uint64_t rep_seed);

struct RepOutcome {
  TestResult test;
  ChangePointEstimate cp;
  bool has_cp = false;
};

// Full pipeline for one replication; the stream identity depends only on
// (master seed, replication index, phase label).
RepOutcome run_replication(const ExperimentConfig& cfg, long rep);

RunResult cmd_stability(const ExperimentConfig& cfg);
RunResult cmd_critvals(const ExperimentConfig& cfg);
RunResult cmd_test(const ExperimentConfig& cfg);
RunResult cmd_approx(const ExperimentConfig& cfg);
RunResult cmd_simulate(const ExperimentConfig& cfg);

}  // namespace topobreak
