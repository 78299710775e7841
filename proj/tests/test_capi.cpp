// Exercises the shared library strictly through its C interface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "topobreak.h"

namespace {

const char* kMinimal =
    "schema_version = 1\n"
    "run_id = capi\n"
    "seed = 3\n"
    "out_dir = test_out_capi\n"
    "generator.kind = iid\n"
    "generator.n = 5\n"
    "generator.r = 4\n"
    "generator.domain.lo = 0,0\n"
    "generator.domain.hi = 1,1\n"
    "generator.innovation.lo = 0,0\n"
    "generator.innovation.hi = 1,1\n";

bool file_exists(const std::string& path) {
  if (std::FILE* f = std::fopen(path.c_str(), "rb")) {
    std::fclose(f);
    return true;
  }
  return false;
}

}  // namespace

TEST_CASE("version string") {
  CHECK(std::string(tb_version()) == "0.1.0");
}

TEST_CASE("parse and serialize round trip") {
  tb_config* cfg = nullptr;
  REQUIRE(tb_config_parse(kMinimal, &cfg) == TB_OK);
  REQUIRE(cfg != nullptr);
  const std::string once = tb_config_serialize(cfg);
  CHECK(once.find("run_id = capi") != std::string::npos);

  tb_config* cfg2 = nullptr;
  REQUIRE(tb_config_parse(once.c_str(), &cfg2) == TB_OK);
  CHECK(std::string(tb_config_serialize(cfg2)) == once);
  tb_config_free(cfg2);
  tb_config_free(cfg);
}

TEST_CASE("parse errors set the status and the thread-local message") {
  tb_config* cfg = nullptr;
  CHECK(tb_config_parse("schema_version = 1\nbogus = 1\n", &cfg) == TB_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(tb_last_error()) == "config line 2: unknown key 'bogus'");

  REQUIRE(tb_config_parse(kMinimal, &cfg) == TB_OK);
  CHECK(std::string(tb_last_error()).empty());  // success clears the message
  tb_config_free(cfg);

  CHECK(tb_config_parse(nullptr, &cfg) == TB_ERR_CONFIG);
}

TEST_CASE("loading a missing file is an I/O error") {
  tb_config* cfg = nullptr;
  CHECK(tb_config_load("no/such/file.cfg", &cfg) == TB_ERR_IO);
  CHECK(cfg == nullptr);
  CHECK(std::string(tb_last_error()).find("no/such/file.cfg") != std::string::npos);
}

TEST_CASE("setters validate their arguments") {
  tb_config* cfg = nullptr;
  REQUIRE(tb_config_parse(kMinimal, &cfg) == TB_OK);
  CHECK(tb_config_set_seed(cfg, 99) == TB_OK);
  CHECK(tb_config_set_replications(cfg, 0) == TB_ERR_CONFIG);
  CHECK(tb_config_set_replications(cfg, 2) == TB_OK);
  CHECK(tb_config_set_threads(cfg, -1) == TB_ERR_CONFIG);
  CHECK(tb_config_set_threads(cfg, 2) == TB_OK);
  CHECK(tb_config_set_out_dir(cfg, "") == TB_ERR_CONFIG);
  CHECK(tb_config_set_out_dir(cfg, "test_out_capi") == TB_OK);
  const std::string text = tb_config_serialize(cfg);
  CHECK(text.find("seed = 99") != std::string::npos);
  CHECK(text.find("replications = 2") != std::string::npos);
  tb_config_free(cfg);

  CHECK(tb_config_set_seed(nullptr, 1) == TB_ERR_CONFIG);
}

TEST_CASE("tb_run_simulate writes its artifacts") {
  tb_config* cfg = nullptr;
  REQUIRE(tb_config_parse(kMinimal, &cfg) == TB_OK);
  REQUIRE(tb_run_simulate(cfg) == TB_OK);
  CHECK(file_exists("test_out_capi/capi_series.csv"));
  CHECK(file_exists("test_out_capi/capi_diagrams.csv"));
  CHECK(file_exists("test_out_capi/capi_manifest.json"));
  tb_config_free(cfg);

  CHECK(tb_run_simulate(nullptr) == TB_ERR_CONFIG);
}

TEST_CASE("tb_run_test propagates pipeline validation failures") {
  tb_config* cfg = nullptr;
  const std::string bad = std::string(kMinimal) + "feature.k = 3\n";  // k + 2 > r
  REQUIRE(tb_config_parse(bad.c_str(), &cfg) == TB_OK);
  CHECK(tb_run_test(cfg) == TB_ERR_CONFIG);
  CHECK(std::string(tb_last_error()).find("feature.k") != std::string::npos);
  tb_config_free(cfg);
}
