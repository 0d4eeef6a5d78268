#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "wco/experiment.hpp"

using namespace wco;

namespace {

Json load(const std::string& name) {
  std::ifstream in(std::string(WCO_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  Json j;
  in >> j;
  return j;
}

std::string fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("wco-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir.string();
}

Json basic_disk_config(const std::string& command) {
  Json j = load("verify_diag.json");
  j["command"] = command;
  return j;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  SUBCASE("shipped configs are valid") {
    for (const char* name : {"verify_diag.json", "census_annulus.json",
                             "weighted_spectrum.json"}) {
      const ExperimentConfig config = config_from_json(load(name));
      CHECK(validate(config).empty());
    }
  }
  SUBCASE("missing fields are named") {
    CHECK_THROWS_WITH_AS(config_from_json(Json::object()),
                         "config: missing field command", std::invalid_argument);
    Json j = Json{{"command", "census"}};
    CHECK_THROWS_WITH_AS(config_from_json(j), "config: missing field space",
                         std::invalid_argument);
  }
  SUBCASE("decreasing ladder diagnostic") {
    Json j = basic_disk_config("spectrum");
    j["N_ladder"] = Json::array({40, 20});
    const auto diagnostics = validate(config_from_json(j));
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0] == "N_ladder not increasing");
  }
  SUBCASE("domain escape diagnostic") {
    Json j = basic_disk_config("spectrum");
    j["phi"] = Json{{"n", 1}, {"coeffs", Json{{"1", Json::array({2.0, 0.0})}}}};
    const auto diagnostics = validate(config_from_json(j));
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].find("composition symbol leaves domain at sample z=") == 0);
  }
  SUBCASE("negative tolerance diagnostic") {
    Json j = basic_disk_config("spectrum");
    j["tolerances"] = Json{{"tol_match", -1.0}};
    const auto diagnostics = validate(config_from_json(j));
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0] == "tol_match must be positive");
  }
  SUBCASE("kernel commands need a space family") {
    Json j = load("census_annulus.json");
    j["command"] = "spectrum";
    const auto diagnostics = validate(config_from_json(j));
    bool found = false;
    for (const auto& d : diagnostics) {
      if (d.find("needs a space family") != std::string::npos) found = true;
    }
    CHECK(found);
  }
  SUBCASE("inverse map needs an annulus product") {
    Json j = basic_disk_config("census");
    j["phi"] = "componentwise-inverse";
    const auto diagnostics = validate(config_from_json(j));
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].find("annulus products") != std::string::npos);
  }
}

TEST_CASE("verify-conjecture pipeline on the diagonal corpus") {
  ExperimentConfig config = config_from_json(load("verify_diag.json"));
  config.output_dir = fresh_dir("verify");
  const RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("verdict") == Json("supports-formula"));
  CHECK(result.report.at("unique_fixed_point") == Json(true));
  // The report embeds the fully resolved config.
  CHECK(result.report.at("config").at("tolerances").at("tol_match") == Json(1e-4));
  CHECK(result.report.at("config").at("seed").get<std::uint64_t>() ==
        kDefaultDirectionSeed);
  REQUIRE(result.files.size() == 2);
  for (const auto& file : result.files) CHECK(std::filesystem::exists(file));
}

TEST_CASE("reports are byte-reproducible for a fixed config and seed") {
  ExperimentConfig config = config_from_json(load("verify_diag.json"));
  config.output_dir = fresh_dir("repro");
  const RunResult first = run(config);
  const RunResult second = run(config);
  const std::string text_first = dump_json(first.report);
  CHECK(text_first == dump_json(second.report));

  // The file on disk is exactly the dump of the report.
  std::ifstream in(second.files[0]);
  const std::string on_disk((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  CHECK(on_disk == text_first);
  CHECK_FALSE(on_disk.empty());

  // A different seed changes the embedded config, hence the bytes.
  config.seed += 1;
  const RunResult reseeded = run(config);
  CHECK(dump_json(reseeded.report) != text_first);
}

TEST_CASE("census command lists the annulus fixed points") {
  ExperimentConfig config = config_from_json(load("census_annulus.json"));
  config.output_dir = fresh_dir("census");
  const RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("census").at("points").size() == 4);
  CHECK(result.report.at("census").at("multiplicity_flag") == Json("multiple"));
}

TEST_CASE("genzhu-scan on the identity reports no decay") {
  Json j = basic_disk_config("genzhu-scan");
  j["phi"] = to_json(PolyMap::identity(1));
  ExperimentConfig config = config_from_json(j);
  config.output_dir = fresh_dir("genzhu");
  const RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("verdict") == Json("no-decay"));
  CHECK(result.report.at("scan").at("max_q_innermost").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.report.at("weight_liminf").at("bounded_away_from_zero") == Json(true));
}

TEST_CASE("fixed-point command from the origin") {
  Json j = basic_disk_config("fixed-point");
  j["phi"] = Json{{"n", 1},
                  {"coeffs", Json{{"0", Json::array({0.25, 0.0})},
                                  {"1", Json::array({0.5, 0.0})}}}};
  ExperimentConfig config = config_from_json(j);
  config.output_dir = fresh_dir("fp");
  const RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("found") == Json(true));
  const Point a = point_from_json(result.report.at("point"));
  CHECK(std::abs(a[0] - Cplx(0.5, 0)) < 1e-12);
}

TEST_CASE("adjoint-check residual ladder decreases") {
  Json j = load("weighted_spectrum.json");
  j["command"] = "adjoint-check";
  j["N_ladder"] = Json::array({10, 20, 40});
  j["z"] = Json::array({Json::array({0.3, 0.0})});
  ExperimentConfig config = config_from_json(j);
  config.output_dir = fresh_dir("adjoint");
  const RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("monotone_decreasing") == Json(true));
  const auto residuals = result.report.at("residuals").get<std::vector<double>>();
  REQUIRE(residuals.size() == 3);
  CHECK(residuals[2] < 1e-8);
}

TEST_CASE("spectrum and compactness-proxy commands run") {
  {
    Json j = basic_disk_config("spectrum");
    ExperimentConfig config = config_from_json(j);
    config.output_dir = fresh_dir("spectrum");
    const RunResult result = run(config);
    CHECK(result.exit_code == 0);
    CHECK(result.report.at("computed").size() == 3);
  }
  {
    Json j = basic_disk_config("compactness-proxy");
    ExperimentConfig config = config_from_json(j);
    config.output_dir = fresh_dir("proxy");
    const RunResult result = run(config);
    CHECK(result.exit_code == 0);
    CHECK(result.report.at("verdict") == Json("consistent-with-compact"));
  }
}

TEST_CASE("verify-conjecture fails with exit 2 when uniqueness breaks") {
  Json j = basic_disk_config("verify-conjecture");
  j["phi"] = to_json(PolyMap::identity(1));  // every point is fixed
  ExperimentConfig config = config_from_json(j);
  config.output_dir = fresh_dir("verify-fail");
  const RunResult result = run(config);
  CHECK(result.exit_code == 2);
  CHECK(result.report.at("verdict") == Json("not-supported"));
  CHECK(result.report.at("unique_fixed_point") == Json(false));
}

TEST_CASE("invalid configs abort the run with a diagnostic") {
  Json j = basic_disk_config("spectrum");
  j["N_ladder"] = Json::array({40, 20});
  const ExperimentConfig config = config_from_json(j);
  CHECK_THROWS_AS(run(config), std::invalid_argument);
}
