#include "topobreak.h"

#include <string>

#include "topobreak/harness.hpp"

struct tb_config {
  topobreak::ExperimentConfig cfg;
  std::string serialized;  // buffer backing tb_config_serialize
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
tb_status guarded(Fn fn) {
  try {
    fn();
    g_last_error.clear();
    return TB_OK;
  } catch (const topobreak::ConfigError& e) {
    g_last_error = e.what();
    return TB_ERR_CONFIG;
  } catch (const topobreak::IoError& e) {
    g_last_error = e.what();
    return TB_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TB_ERR_NUMERIC;
  }
}

}  // namespace

extern "C" {

const char* tb_version(void) { return topobreak::kVersion; }

const char* tb_last_error(void) { return g_last_error.c_str(); }

tb_status tb_config_load(const char* path, tb_config** out) {
  if (!path || !out) {
    g_last_error = "tb_config_load: null argument";
    return TB_ERR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] { *out = new tb_config{topobreak::load_config(path), {}}; });
}

tb_status tb_config_parse(const char* text, tb_config** out) {
  if (!text || !out) {
    g_last_error = "tb_config_parse: null argument";
    return TB_ERR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] { *out = new tb_config{topobreak::parse_config(text), {}}; });
}

void tb_config_free(tb_config* cfg) { delete cfg; }

const char* tb_config_serialize(tb_config* cfg) {
  if (!cfg) return nullptr;
  cfg->serialized = topobreak::serialize_config(cfg->cfg);
  return cfg->serialized.c_str();
}

tb_status tb_config_set_seed(tb_config* cfg, uint64_t seed) {
  if (!cfg) return TB_ERR_CONFIG;
  cfg->cfg.seed = seed;
  return TB_OK;
}

tb_status tb_config_set_replications(tb_config* cfg, long reps) {
  if (!cfg) return TB_ERR_CONFIG;
  if (reps < 1) {
    g_last_error = "replications >= 1 required";
    return TB_ERR_CONFIG;
  }
  cfg->cfg.replications = reps;
  return TB_OK;
}

tb_status tb_config_set_threads(tb_config* cfg, int threads) {
  if (!cfg) return TB_ERR_CONFIG;
  if (threads < 1) {
    g_last_error = "threads >= 1 required";
    return TB_ERR_CONFIG;
  }
  cfg->cfg.threads = threads;
  return TB_OK;
}

tb_status tb_config_set_out_dir(tb_config* cfg, const char* dir) {
  if (!cfg || !dir) return TB_ERR_CONFIG;
  if (!*dir) {
    g_last_error = "out_dir must be non-empty";
    return TB_ERR_CONFIG;
  }
  cfg->cfg.out_dir = dir;
  return TB_OK;
}

tb_status tb_run_stability(tb_config* cfg) {
  if (!cfg) return TB_ERR_CONFIG;
  return guarded([&] { topobreak::cmd_stability(cfg->cfg); });
}

tb_status tb_run_critvals(tb_config* cfg) {
  if (!cfg) return TB_ERR_CONFIG;
  return guarded([&] { topobreak::cmd_critvals(cfg->cfg); });
}

tb_status tb_run_test(tb_config* cfg) {
  if (!cfg) return TB_ERR_CONFIG;
  return guarded([&] { topobreak::cmd_test(cfg->cfg); });
}

tb_status tb_run_approx(tb_config* cfg) {
  if (!cfg) return TB_ERR_CONFIG;
  return guarded([&] { topobreak::cmd_approx(cfg->cfg); });
}

tb_status tb_run_simulate(tb_config* cfg) {
  if (!cfg) return TB_ERR_CONFIG;
  return guarded([&] { topobreak::cmd_simulate(cfg->cfg); });
}

}  // extern "C"
