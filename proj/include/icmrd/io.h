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

#ifndef ICMRD_IO_H_
#define ICMRD_IO_H_

// File formats.
//
// Pipeline JSON:
//   {
//     "source": [0.5, 0.5],               // p(x), floats
//     "g1": [0, 1], "g2": [0, 1], "h2": [0, 1],   // map tables, integers
//     "task_distortion": [[0, 1], [1, 0]], // row-major, T x T̂
//     "branches": [{"name": "h3", "map": [...], "distortion": [[...]]}],
//     "partition_label": "y1",
//     "alphabet_sizes": [2, 2, 2, 2]       // optional: X, Y1, Y2, T
//   }
// Without "alphabet_sizes" each map's codomain is the domain of the next
// one (|Y1| = len(g2), |Y2| = len(h2)) and |T| is the row count of
// task_distortion. A branch codomain is its distortion's row count.
//
// CSV files have a header row, comma separators, '.' as decimal point and
// end in a newline:
//   RD curve         distortion,rate_bits,beta
//   rate-quality     rate_bpp,quality
//   operating point  label,rate,d_enh,d_base
//
// Numbers are written in the shortest form that reads back to the same
// double, independent of the process locale.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "icmrd/bd_metrics.h"
#include "icmrd/pipeline.h"
#include "icmrd/rd_solver.h"
#include "icmrd/theorems.h"

namespace icmrd {

std::string FormatDouble(double value);
absl::StatusOr<double> ParseDouble(std::string_view text);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

// Parse errors carry the line and column or the offending key; a parsed
// pipeline that fails validation is rejected with every violation listed.
absl::StatusOr<LayeredPipeline> ParsePipelineJson(std::string_view text);
std::string PipelineToJson(const LayeredPipeline& pipeline);
absl::StatusOr<LayeredPipeline> LoadPipeline(const std::string& path);
absl::Status SavePipeline(const LayeredPipeline& pipeline,
                          const std::string& path);

std::string RdCurveToCsv(const RDCurve& curve);
absl::StatusOr<RDCurve> ParseRdCurveCsv(std::string_view text,
                                        std::string source_label = "");

std::string RateQualityCurveToCsv(const RateQualityCurve& curve);
absl::StatusOr<RateQualityCurve> ParseRateQualityCsv(std::string_view text,
                                                     std::string quality_metric,
                                                     std::string curve_label);

// Reads a rate-quality CSV. The metric and label come from the arguments
// when non-empty, else from a sidecar JSON next to the file (same stem,
// ".json", keys quality_metric and curve_label), else "quality" and the
// file stem.
absl::StatusOr<RateQualityCurve> LoadRateQualityCurve(
    const std::string& path, const std::string& quality_metric = "",
    const std::string& curve_label = "");

std::string OperatingPointsToCsv(const std::vector<OperatingPoint>& points);
absl::StatusOr<std::vector<OperatingPoint>> ParseOperatingPointsCsv(
    std::string_view text);

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  SolverConfig config;
  uint64_t seed = 0;
  std::string tool_version;
  std::string started;   // ISO 8601, UTC
  std::string finished;  // ISO 8601, UTC
};

inline constexpr char kManifestFileName[] = "manifest.json";

std::string ToolVersion();
std::string UtcTimestamp();

std::string SolverConfigToJson(const SolverConfig& config);
// Keys absent from the object keep their value in `base`.
absl::StatusOr<SolverConfig> ParseSolverConfigJson(std::string_view text,
                                                   const SolverConfig& base);

std::string ManifestToJson(const RunManifest& manifest);

// Reports name their manifest by file name; it is written alongside them.
std::string TheoremReportToJson(
    const TheoremReport& report,
    const std::optional<ConstructionReport>& construction = std::nullopt,
    std::string_view manifest = kManifestFileName);
std::string BdResultToJson(const BDResult& result,
                           std::string_view manifest = kManifestFileName);
std::string SelectionToJson(const Selection& selection, double lambda,
                            double w,
                            std::string_view manifest = kManifestFileName);

}  // namespace icmrd

#endif  // ICMRD_IO_H_
