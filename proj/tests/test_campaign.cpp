#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symflow/campaign.hpp"
#include "symflow/errors.hpp"

using namespace symflow;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("symflow_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const Campaign c = parse_config(R"({"command": "verify-symmetries", "H": 1})");
  EXPECT_EQ(c.command, Command::VerifySymmetries);
  EXPECT_DOUBLE_EQ(c.params.H, 1.0);
  EXPECT_DOUBLE_EQ(c.tolerances.defect, 1e-7);
  EXPECT_DOUBLE_EQ(c.tolerances.residual, 1e-5);
  EXPECT_EQ(c.grid.nx, 100);
  EXPECT_TRUE(c.catalog.empty());
}

TEST(Config, FullDocument) {
  const Campaign c = parse_config(R"({
    "command": "reduce", "H": 2, "gravity": 9.81, "seed": 42,
    "tolerances": {"residual": 1e-6},
    "catalog": ["galilean", "simple_c2"],
    "grid": {"t0": 0.5, "t1": 1, "nx": 50},
    "reduce": {"a": -1, "state0": [0.1, 2], "p_end": 1}})");
  EXPECT_EQ(c.command, Command::Reduce);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_DOUBLE_EQ(c.tolerances.residual, 1e-6);
  EXPECT_DOUBLE_EQ(c.tolerances.defect, 1e-7);
  EXPECT_EQ(c.catalog.size(), 2u);
  EXPECT_DOUBLE_EQ(c.reduce.state0.h, 2.0);
  EXPECT_DOUBLE_EQ(c.grid.x1, 1.0);
}

TEST(Config, UnknownCatalogIdNamed) {
  const std::string e = error_of(R"({"command": "invert", "catalog": ["galilean", "mystery"]})");
  EXPECT_NE(e.find("mystery"), std::string::npos);
  EXPECT_NE(e.find("catalog[1]"), std::string::npos);
}

TEST(Config, NegativeToleranceNamed) {
  const std::string e = error_of(R"({"command": "invert", "tolerances": {"newton": -1}})");
  EXPECT_NE(e.find("tolerances.newton"), std::string::npos);
}

TEST(Config, SchemaViolations) {
  EXPECT_NE(error_of(R"({"H": 1})").find("command"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "fly"})").find("fly"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "audit", "grid": {"nx": "many"}})").find("grid.nx"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"command": "audit", "extra": 1})").find("extra"), std::string::npos);
  EXPECT_NE(error_of(R"({"command": "audit", "reduce": {"state0": [1]}})").find("reduce.state0"),
            std::string::npos);
  EXPECT_FALSE(error_of("{not json").empty());
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, CatalogIdsDependOnDepth) {
  EXPECT_FALSE(error_of(R"({"command": "invert", "H": 0, "catalog": ["half_order"]})").empty());
  EXPECT_TRUE(error_of(R"({"command": "invert", "H": 1, "catalog": ["half_order"]})").empty());
}

TEST(Run, VerifySymmetriesPassesAtUnitDepth) {
  const Report r = run(parse_config(R"({"command": "verify-symmetries", "H": 1})"));
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.count(CheckStatus::Pass), 10);
  for (const auto& c : r.checks) EXPECT_FALSE(c.anchor.empty()) << c.name;
}

TEST(Run, AuditAtZeroDepthFlagsProjectiveGenerator) {
  const Report r = run(parse_config(R"({"command": "audit", "H": 0})"));
  const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                               [](const Check& c) { return c.name == "audit/projective_generator"; });
  ASSERT_NE(it, r.checks.end());
  EXPECT_EQ(it->status, CheckStatus::Flag);
  EXPECT_TRUE(std::isfinite(it->value));
  EXPECT_EQ(r.count(CheckStatus::Pass), 0);
}

TEST(Run, CrashingCheckRecordedAndRunContinues) {
  // A sonic initial state makes the reduction throw.
  const Report r = run(parse_config(
      R"({"command": "reduce", "H": 1, "reduce": {"a": 1, "p0": 0, "state0": [2, 3]}})"));
  ASSERT_FALSE(r.checks.empty());
  EXPECT_EQ(r.checks.front().status, CheckStatus::Fail);
  EXPECT_TRUE(std::isnan(r.checks.front().value));
  EXPECT_FALSE(r.checks.front().note.empty());
  EXPECT_FALSE(r.ok());
  EXPECT_GT(r.checks.size(), 1u);
}

TEST(Report, ByteIdenticalForSameSeed) {
  const Campaign c = parse_config(R"({"command": "classify", "H": 1, "seed": 3})");
  EXPECT_EQ(format_report(run(c), ReportFormat::Json), format_report(run(c), ReportFormat::Json));
}

TEST(Report, JsonLayout) {
  const Report r = run(parse_config(R"({"command": "simulate", "H": 1, "grid": {"nx": 50}})"));
  const auto doc = nlohmann::json::parse(format_report(r, ReportFormat::Json));
  EXPECT_EQ(doc["summary"]["pass"].get<int>(), r.count(CheckStatus::Pass));
  EXPECT_EQ(doc["checks"].size(), r.checks.size());
  EXPECT_EQ(doc["repro"]["version"], kVersion);
  EXPECT_EQ(doc["repro"]["command"], "simulate");
  for (const auto& c : doc["checks"]) {
    for (const char* key : {"name", "anchor", "value", "tol", "status"}) EXPECT_TRUE(c.contains(key));
  }
}

TEST(Report, CsvOneRowPerCheck) {
  const Report r = run(parse_config(R"({"command": "audit", "H": 1})"));
  const std::string csv = format_report(r, ReportFormat::CsvSummary);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.checks.size() + 1);
}

TEST(Report, EmitWritesFilesAndArtifacts) {
  const auto dir = scratch("emit");
  Campaign c = parse_config(R"({"command": "simulate", "H": 1, "grid": {"nx": 40}})");
  c.out_dir = dir.string();
  const Report r = run(c);
  const std::string path = emit_report(r, ReportFormat::Json, dir.string());
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_TRUE(std::filesystem::exists(dir / "galilean_grid.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritablePath) {
  const Report r;
  EXPECT_THROW(emit_report(r, ReportFormat::Json, "/proc/symflow/none"), ConfigError);
}
