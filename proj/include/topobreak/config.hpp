#pragma once

#include <string>
#include <vector>

#include "topobreak/changepoint.hpp"
#include "topobreak/persistence.hpp"
#include "topobreak/procgen.hpp"

namespace topobreak {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Full experiment description. Every field has a canonical key in the
// `key = value` config format; serialize_config() emits all of them, so
// parse -> serialize -> parse is the identity.
struct ExperimentConfig {
  std::string run_id = "run";
  std::uint64_t seed = 1;
  long replications = 1;
  int threads = 1;
  std::string out_dir = "out";

  CloudSeriesSpec generator;
  bool has_break = false;
  BreakSpec brk;

  FiltrationKind filtration = FiltrationKind::VietorisRips;
  int dim_cap = 1;
  int k = 0;
  TieBreak tie_break = TieBreak::Deterministic;
  FeatureMapSpec feature_map{FeatureComponent{}};

  Statistic statistic = Statistic::Lambda;
  double level = 0.05;
  CvSettings cv;
  int bandwidth = -1;
  bool estimate_cp = false;

  long stability_samples = 100000;
  double stability_t_lo = 1e-4;  // window as fractions of diam(M)
  double stability_t_hi = 1e-2;

  double approx_p = 2.0;
  std::vector<int> approx_m_list{1, 2, 4, 8, 16, 32};
  long approx_n_mc = 1000;
  double approx_delta = 0.1;
  double approx_alpha = 1.0;

  Statistic critvals_statistic = Statistic::Lambda;
  int critvals_ell = 1;
};

// Parses config text; unknown keys, malformed lines, bad values and a missing
// or mismatched schema_version are ConfigErrors carrying the line number.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace topobreak
