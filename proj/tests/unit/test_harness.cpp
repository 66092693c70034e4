#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "tdrk/errors.hpp"
#include "tdrk/harness.hpp"

using namespace tdrk;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.methods = {"TDRK2s3p1e", "TDRK3s3p3e"};
  cfg.problem = "advection";
  cfg.nx_list = {25};
  cfg.dt_list = {1e-2, 1e-3};
  cfg.precision_pairs = {{Format::B64, Format::B64}, {Format::B64, Format::B16}};
  cfg.threads = 2;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST(Harness, EstimateOrderExactPowers) {
  const std::vector<OrderPoint> pts{{1e-2, 1e-6}, {1e-3, 1e-9}};
  EXPECT_NEAR(*estimate_order(pts), 3.0, 1e-12);
}

TEST(Harness, EstimateOrderMeasuredColumns) {
  const std::vector<OrderPoint> m2{{1e-2, 1.54e-4}, {1e-3, 1.58e-6}, {1e-4, 1.58e-8}};
  EXPECT_NEAR(*estimate_order(m2), 2.0, 0.05);
  const std::vector<OrderPoint> m3{{1e-2, 1.81e-5}, {1e-3, 1.81e-8}, {1e-4, 1.80e-11}};
  EXPECT_NEAR(*estimate_order(m3), 3.0, 0.05);
}

TEST(Harness, EstimateOrderUndefined) {
  EXPECT_FALSE(estimate_order(std::vector<OrderPoint>{{1e-2, 1e-6}}).has_value());
  EXPECT_FALSE(estimate_order(std::vector<OrderPoint>{{1e-2, 1e-6}, {1e-2, 1e-7}}).has_value());
  EXPECT_FALSE(estimate_order(std::vector<OrderPoint>{{1e-2, INFINITY}, {1e-3, 1e-7}}).has_value());
  std::vector<ConvergenceRecord> recs(3);
  recs[0].dt = 1e-1;
  recs[0].diverged = true;
  recs[0].error_max = INFINITY;
  recs[1].dt = 1e-2;
  recs[1].error_max = 1e-4;
  recs[2].dt = 1e-3;
  recs[2].error_max = 1e-6;
  EXPECT_NEAR(*estimate_order(recs), 2.0, 1e-12);
  EXPECT_FALSE(estimate_order(recs, 5e-3, 1.0).has_value());
}

TEST(Harness, LocalSlopes) {
  const std::vector<OrderPoint> pts{{1e-3, 1e-9}, {1e-1, 1e-3}, {1e-2, 1e-6}};
  const auto s = local_slopes(pts);
  ASSERT_EQ(s.size(), 2U);
  EXPECT_NEAR(s[0], 3.0, 1e-12);
  EXPECT_NEAR(s[1], 3.0, 1e-12);
}

TEST(Harness, PrecisionPairParsing) {
  EXPECT_EQ(PrecisionPair::parse("64/16"), (PrecisionPair{Format::B64, Format::B16}));
  EXPECT_EQ(PrecisionPair::parse("ext/b32"), (PrecisionPair{Format::EXT, Format::B32}));
  EXPECT_EQ(PrecisionPair::parse("b32/b32").label(), "32/32");
  EXPECT_THROW(PrecisionPair::parse("16/64"), ConfigError);
  EXPECT_THROW(PrecisionPair::parse("64"), ConfigError);
}

TEST(Harness, FullPrecisionCells) {
  ExperimentConfig cfg;
  cfg.methods = {"TDRK2s3p1e"};
  cfg.nx_list = {25};
  cfg.dt_list = {1e-2};
  cfg.precision_pairs = {{Format::B64, Format::B64}};
  auto recs = run_convergence(cfg);
  ASSERT_EQ(recs.size(), 1U);
  EXPECT_NEAR(recs[0].error_max, 2.03e-6, 0.05 * 2.03e-6);

  cfg.methods = {"TDRK3s3p3e"};
  cfg.dt_list = {1e-3};
  recs = run_convergence(cfg);
  EXPECT_NEAR(recs[0].error_max, 6.76e-10, 0.05 * 6.76e-10);
}

TEST(Harness, ZeroStepsGiveZeroError) {
  ExperimentConfig cfg;
  cfg.methods = {"TDRK2s3p1e"};
  cfg.nx_list = {25};
  cfg.dt_list = {0.1};
  cfg.t_final = 0.0;
  cfg.precision_pairs = {{Format::B64, Format::B64}};
  const auto recs = run_convergence(cfg);
  EXPECT_EQ(recs[0].steps, 0);
  EXPECT_LE(recs[0].error_max, 1e-16);
}

TEST(Harness, RecordOrderAndCsv) {
  const auto cfg = small_config();
  const auto recs = run_convergence(cfg);
  ASSERT_EQ(recs.size(), 2U * 1U * 2U * 2U);
  EXPECT_EQ(recs[0].method, "TDRK2s3p1e");
  EXPECT_EQ(recs[1].low, Format::B16);
  EXPECT_EQ(recs[2].dt, 1e-3);
  EXPECT_EQ(recs[4].method, "TDRK3s3p3e");

  const auto csv = lines(records_to_csv(recs));
  ASSERT_EQ(csv.size(), recs.size() + 1);
  EXPECT_EQ(csv[0], "method,problem,nx,dt,high,low,impl,error_max,diverged,steps,wall_time_ms");
  EXPECT_EQ(csv[1].rfind("TDRK2s3p1e,advection,25,0.01,b64,b64,1,", 0), 0U);

  // Reproducible bytes without the timing column, whatever the worker count.
  auto serial = cfg;
  serial.threads = 1;
  EXPECT_EQ(records_to_csv(recs, false), records_to_csv(run_convergence(serial), false));
}

TEST(Harness, DivergedRenderAsNA) {
  ExperimentConfig cfg;
  cfg.methods = {"TDRK2s3p1e"};
  cfg.nx_list = {100};
  cfg.dt_list = {0.1};
  cfg.precision_pairs = {{Format::B64, Format::B64}, {Format::B64, Format::B16}};
  const auto recs = run_convergence(cfg);
  ASSERT_EQ(recs.size(), 2U);
  EXPECT_FALSE(recs[0].diverged);
  EXPECT_TRUE(recs[1].diverged);
  EXPECT_TRUE(std::isinf(recs[1].error_max));
  const auto csv = lines(records_to_csv(recs));
  EXPECT_NE(csv[2].find(",NA,1,"), std::string::npos);
  const std::string table = method_table_markdown(recs, "TDRK2s3p1e");
  EXPECT_NE(table.find("N/A"), std::string::npos);
  EXPECT_NE(table.find("| N_x | dt | 64/64 | 64/16 |"), std::string::npos);
}

TEST(Harness, TableShape) {
  ExperimentConfig cfg;
  cfg.methods = {"TDRK2s3p1e"};
  cfg.nx_list = {25, 50};
  cfg.dt_list = {0.1, 0.05};
  cfg.precision_pairs = {PrecisionPair::parse("64/64"), PrecisionPair::parse("64/32"), PrecisionPair::parse("32/32"),
                         PrecisionPair::parse("64/16"), PrecisionPair::parse("16/16")};
  const auto recs = run_convergence(cfg);
  const auto table = lines(method_table_markdown(recs, "TDRK2s3p1e"));
  // Caption, blank, header, rule, then one row per (nx, dt).
  ASSERT_EQ(table.size(), 4U + 4U);
  EXPECT_EQ(table[2], "| N_x | dt | 64/64 | 64/32 | 32/32 | 64/16 | 16/16 |");
  EXPECT_EQ(table[4].rfind("| 25 | 0.1 |", 0), 0U);
  EXPECT_EQ(table[5].rfind("|  | 0.05 |", 0), 0U);
  EXPECT_EQ(table[6].rfind("| 50 | 0.1 |", 0), 0U);
}

TEST(Harness, EmitOutputs) {
  auto cfg = small_config();
  cfg.out_dir = fs::temp_directory_path() / "tdrk_harness_test";
  fs::remove_all(cfg.out_dir);
  const auto recs = run_convergence(cfg);
  emit_outputs(recs, cfg);
  EXPECT_TRUE(fs::exists(cfg.out_dir / "results.csv"));
  EXPECT_TRUE(fs::exists(cfg.out_dir / "table_TDRK2s3p1e.md"));
  EXPECT_TRUE(fs::exists(cfg.out_dir / "convergence_TDRK3s3p3e_25.svg"));
  const std::string svg = convergence_svg(recs, "TDRK2s3p1e", 25);
  EXPECT_NE(svg.find("1e-3"), std::string::npos);
  EXPECT_NE(svg.find("1e-2"), std::string::npos);
  EXPECT_NE(svg.find("slope 3"), std::string::npos);
  EXPECT_NE(svg.find("slope 1"), std::string::npos);
  fs::remove_all(cfg.out_dir);
}

TEST(Harness, ConfigFromJson) {
  const auto doc = nlohmann::json::parse(R"({
    "methods": ["TDRK2s3p2e"], "problem": "burgers", "nx": [50], "dt": [0.01, 0.005],
    "pairs": ["64/64", "64/16"], "impl": 2, "t_final": 0.5,
    "reference": {"kind": "ssp33", "policy": "ext", "dt": 1e-4}, "out_dir": "out"
  })");
  const auto cfg = experiment_config_from_json(doc);
  EXPECT_EQ(cfg.problem, "burgers");
  EXPECT_EQ(cfg.implementation, Implementation::Impl2);
  EXPECT_EQ(cfg.reference.kind, ReferenceKind::Ssp33);
  EXPECT_EQ(cfg.reference.dt, 1e-4);
  EXPECT_EQ(cfg.precision_pairs.size(), 2U);
  EXPECT_NO_THROW(cfg.validate());

  EXPECT_EQ(experiment_config_from_json(nlohmann::json::parse(R"({"methods": "all"})")).methods.size(), 7U);
  EXPECT_EQ(default_reference("burgers").kind, ReferenceKind::Ssp33);
  EXPECT_EQ(default_reference("advection").kind, ReferenceKind::Exact);
  EXPECT_THROW(experiment_config_from_json(nlohmann::json::parse(R"({"nx": "many"})")), ConfigError);
  EXPECT_THROW(load_experiment_config("/nonexistent/config.json"), IoError);
}

TEST(Harness, ValidateRejects) {
  auto cfg = small_config();
  cfg.dt_list = {0.3};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.methods = {"RK4"};
  EXPECT_THROW(cfg.validate(), LookupError);
  cfg = small_config();
  cfg.problem = "heat";
  EXPECT_THROW(cfg.validate(), LookupError);
  cfg = small_config();
  cfg.problem = "burgers";
  cfg.reference = {ReferenceKind::Exact, Format::EXT, 1e-5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.precision_pairs = {{Format::B16, Format::B64}};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Harness, EffectiveEpsilon) {
  EXPECT_EQ(characterize_epsilon("advection", 25, Format::EXT, Implementation::Impl1), 0.0);
  const double n25 = characterize_epsilon("advection", 25, Format::B16, Implementation::Impl1);
  const double n100 = characterize_epsilon("advection", 100, Format::B16, Implementation::Impl1);
  EXPECT_GT(n100, n25);
  EXPECT_GT(characterize_epsilon("advection", 50, Format::B16, Implementation::Impl1),
            characterize_epsilon("advection", 50, Format::B16, Implementation::Impl2));
  EXPECT_GT(characterize_epsilon("burgers", 50, Format::B16, Implementation::Impl1),
            characterize_epsilon("burgers", 50, Format::B32, Implementation::Impl1));
}
