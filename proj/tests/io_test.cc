// Copyright 2026 The icmrd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "icmrd/io.h"

#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>

#include "test_util.h"

namespace icmrd {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("icmrd_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(FormatDoubleTest, RoundTripsWithoutExponent) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.Uniform01(), static_cast<int>(rng.UniformIndex(60)) - 40);
    const std::string s = FormatDouble(v);
    EXPECT_EQ(s.find('e'), std::string::npos) << s;
    EXPECT_EQ(*ParseDouble(s), v) << s;
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(2.0), "2");
}

TEST(ParseDoubleTest, AcceptsExponentsRejectsJunk) {
  EXPECT_EQ(*ParseDouble("1e-3"), 1e-3);
  EXPECT_EQ(*ParseDouble(" +2.5 "), 2.5);
  EXPECT_FALSE(ParseDouble("").ok());
  EXPECT_FALSE(ParseDouble("1,5").ok());
  EXPECT_FALSE(ParseDouble("abc").ok());
}

TEST(ParseDoubleTest, IgnoresProcessLocale) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) {
    GTEST_SKIP() << "de_DE locale not installed";
  }
  EXPECT_EQ(FormatDouble(0.25), "0.25");
  EXPECT_EQ(*ParseDouble("0.25"), 0.25);
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(PipelineJsonTest, IdentityRoundTrip) {
  const LayeredPipeline p = IdentityPipeline(3);
  EXPECT_EQ(*ParsePipelineJson(PipelineToJson(p)), p);
}

TEST(PipelineJsonTest, RandomPipelineRoundTrip) {
  const LayeredPipeline p = *RandomPipeline(7, {4, 4, 3, 2}, DistortionKind::kHamming);
  const fs::path path = TempDir("roundtrip") / "p.json";
  ASSERT_TRUE(SavePipeline(p, path.string()).ok());
  const LayeredPipeline loaded = *LoadPipeline(path.string());
  EXPECT_EQ(loaded, p);
  EXPECT_EQ(PipelineToJson(loaded), PipelineToJson(p));
}

TEST(PipelineJsonTest, BranchesRoundTrip) {
  LayeredPipeline p = *RandomPipeline(3, {5, 4, 3, 3}, DistortionKind::kRandomNonnegative);
  p.branches.push_back({"h3", DeterministicMap{Alphabet{2}, {0, 1, 1, 0}},
                        DistortionMatrix::Hamming(2)});
  p.partition_label = "layer12";
  EXPECT_EQ(*ParsePipelineJson(PipelineToJson(p)), p);
}

TEST(PipelineJsonTest, InfersAlphabetSizes) {
  const LayeredPipeline p = *ParsePipelineJson(R"({
    "source": [0.25, 0.25, 0.5],
    "g1": [0, 1, 1], "g2": [1, 0], "h2": [0, 0, 1],
    "task_distortion": [[0, 1], [1, 0]]
  })");
  EXPECT_EQ(p.y1().size, 2u);
  EXPECT_EQ(p.y2().size, 3u);
  EXPECT_EQ(p.t().size, 2u);
  EXPECT_EQ(p.partition_label, "y1");
  EXPECT_TRUE(p.branches.empty());
}

TEST(PipelineJsonTest, UnnormalizedSourceNamesInvariant) {
  const absl::StatusOr<LayeredPipeline> p = ParsePipelineJson(R"({
    "source": [0.45, 0.45],
    "g1": [0, 1], "g2": [0, 1], "h2": [0, 1],
    "task_distortion": [[0, 1], [1, 0]]
  })");
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.status().message().find("source normalization"), std::string::npos)
      << p.status().message();
}

TEST(PipelineJsonTest, ParseErrorsCarryContext) {
  const absl::StatusOr<LayeredPipeline> syntax = ParsePipelineJson("{\n  \"source\": [1,\n}");
  ASSERT_FALSE(syntax.ok());
  EXPECT_NE(syntax.status().message().find("line 3"), std::string::npos)
      << syntax.status().message();

  const absl::StatusOr<LayeredPipeline> key = ParsePipelineJson(R"({
    "source": [1.0], "g1": [0], "g2": [-1], "h2": [0], "task_distortion": [[0]]
  })");
  ASSERT_FALSE(key.ok());
  EXPECT_NE(key.status().message().find("g2[0]"), std::string::npos) << key.status().message();

  const absl::StatusOr<LayeredPipeline> missing =
      ParsePipelineJson(R"({"source": [1.0], "g1": [0], "g2": [0], "h2": [0]})");
  ASSERT_FALSE(missing.ok());
  EXPECT_NE(missing.status().message().find("task_distortion"), std::string::npos);

  const absl::StatusOr<LayeredPipeline> ragged = ParsePipelineJson(R"({
    "source": [1.0], "g1": [0], "g2": [0], "h2": [0], "task_distortion": [[0, 1], [1]]
  })");
  ASSERT_FALSE(ragged.ok());
  EXPECT_NE(ragged.status().message().find("task_distortion[1]"), std::string::npos);
}

TEST(PipelineJsonTest, MissingFileIsNotFound) {
  EXPECT_EQ(LoadPipeline("/nonexistent/p.json").status().code(), absl::StatusCode::kNotFound);
}

TEST(RdCurveCsvTest, RoundTrip) {
  const RDCurve c{{{1.0, 0.0, 1000.0}, {0.53102, 0.1, 2.1972245773362196}, {0.0, 0.5, 0.0}},
                  "y1"};
  const std::string csv = RdCurveToCsv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "distortion,rate_bits,beta");
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(*ParseRdCurveCsv(csv, "y1"), c);
}

TEST(RdCurveCsvTest, RejectsWrongHeaderAndFields) {
  EXPECT_FALSE(ParseRdCurveCsv("rate,distortion,beta\n1,0,1\n").ok());
  EXPECT_FALSE(ParseRdCurveCsv("distortion,rate_bits,beta\n1,0\n").ok());
  EXPECT_FALSE(ParseRdCurveCsv("distortion,rate_bits,beta\n1,x,0\n").ok());
}

TEST(RateQualityCsvTest, RoundTripAndSidecar) {
  const RateQualityCurve c = *RateQualityCurve::Create(
      {{0.1, 30.0}, {0.2, 32.0}, {0.4, 34.5}, {0.8, 36.0}}, "psnr_db", "anchor");
  const fs::path dir = TempDir("rq");
  ASSERT_TRUE(WriteFile((dir / "a.csv").string(), RateQualityCurveToCsv(c)).ok());
  const RateQualityCurve plain = *LoadRateQualityCurve((dir / "a.csv").string());
  EXPECT_EQ(plain.points, c.points);
  EXPECT_EQ(plain.quality_metric, "quality");
  EXPECT_EQ(plain.curve_label, "a");

  ASSERT_TRUE(WriteFile((dir / "a.json").string(),
                        R"({"quality_metric": "psnr_db", "curve_label": "anchor"})")
                  .ok());
  const RateQualityCurve with_sidecar = *LoadRateQualityCurve((dir / "a.csv").string());
  EXPECT_EQ(with_sidecar.quality_metric, "psnr_db");
  EXPECT_EQ(with_sidecar.curve_label, "anchor");
  EXPECT_EQ(LoadRateQualityCurve((dir / "a.csv").string(), "map_percent")->quality_metric,
            "map_percent");
}

TEST(RateQualityCsvTest, RejectsNonMonotonic) {
  EXPECT_FALSE(
      ParseRateQualityCsv("rate_bpp,quality\n0.1,30\n0.3,29\n0.4,31\n0.5,33\n", "q", "c").ok());
}

TEST(OperatingPointsCsvTest, RoundTrip) {
  const std::vector<OperatingPoint> points = {{0.5, 1.25, 0.125, "low"},
                                              {1.5, 0.5, 0.0625, "high"}};
  EXPECT_EQ(*ParseOperatingPointsCsv(OperatingPointsToCsv(points)), points);
}

TEST(SolverConfigJsonTest, RoundTripAndOverrides) {
  SolverConfig c;
  c.beta_grid = {12, 0.5, 50.0};
  c.max_iterations = 777;
  EXPECT_EQ(*ParseSolverConfigJson(SolverConfigToJson(c), SolverConfig{}), c);
  const SolverConfig partial = *ParseSolverConfigJson(R"({"beta_count": 9})", SolverConfig{});
  EXPECT_EQ(partial.beta_grid.count, 9u);
  EXPECT_EQ(partial.beta_grid.max, SolverConfig{}.beta_grid.max);
  EXPECT_FALSE(ParseSolverConfigJson(R"({"beta": 9})", SolverConfig{}).ok());
  EXPECT_FALSE(ParseSolverConfigJson(R"({"beta_count": -1})", SolverConfig{}).ok());
  EXPECT_FALSE(ParseSolverConfigJson(R"({"beta_min": 10, "beta_max": 1})", SolverConfig{}).ok());
}

TEST(ReportJsonTest, TheoremReportFields) {
  TheoremReport r;
  r.theorem_id = TheoremId::kThm2;
  r.d_grid = {0.0, 0.5};
  r.rate_pairs = {{1.0, 0.5}, {0.0, 0.0}};
  r.max_violation = 0.0;
  r.tolerance = 1e-4;
  r.pass = true;
  const std::string json = TheoremReportToJson(r);
  for (const char* key : {"\"theorem_id\": \"thm2\"", "\"tolerance\"", "\"d_grid\"",
                          "\"rates\"", "\"max_violation\"", "\"verdict\": \"pass\"",
                          "\"manifest\": \"manifest.json\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  ConstructionReport failed;
  failed.pass = false;
  EXPECT_NE(TheoremReportToJson(r, failed).find("\"verdict\": \"fail\""), std::string::npos);
}

TEST(ReportJsonTest, BdResultAbsentValuesAreNull) {
  BDResult r;
  r.reason = "no quality overlap";
  const std::string json = BdResultToJson(r);
  EXPECT_NE(json.find("\"bd_rate_percent\": null"), std::string::npos);
  EXPECT_NE(json.find("\"reason\": \"no quality overlap\""), std::string::npos);
  EXPECT_NE(json.find("\"variant\": \"cubic-log10\""), std::string::npos);
}

TEST(ReportJsonTest, ManifestFields) {
  RunManifest m;
  m.command = "verify thm1";
  m.inputs = {"p.json"};
  m.seed = 42;
  m.tool_version = ToolVersion();
  m.started = m.finished = UtcTimestamp();
  const std::string json = ManifestToJson(m);
  for (const char* key : {"\"command\"", "\"inputs\"", "\"config\"", "\"seed\": 42",
                          "\"tool_version\"", "\"started\"", "\"finished\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(m.started.size(), 20u);
}

}  // namespace
}  // namespace icmrd
