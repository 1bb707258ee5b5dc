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

#include <charconv>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

#ifndef ICMRD_VERSION
#define ICMRD_VERSION "0.0.0"
#endif

namespace icmrd {
namespace {

using json = nlohmann::ordered_json;

absl::Status KeyError(const std::string& key, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("key '", key, "': ", what));
}

absl::StatusOr<json> ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    size_t line = 1;
    size_t column = 1;
    const size_t end = std::min<size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return absl::InvalidArgumentError(
        absl::StrCat("JSON parse error at line ", line, ", column ", column,
                     ": ", e.what()));
  }
}

absl::StatusOr<std::vector<double>> DoubleArray(const json& value,
                                                const std::string& key) {
  if (!value.is_array()) return KeyError(key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      return KeyError(absl::StrCat(key, "[", i, "]"), "expected a number");
    }
    out.push_back(value[i].get<double>());
  }
  return out;
}

absl::StatusOr<std::vector<size_t>> IndexArray(const json& value,
                                               const std::string& key) {
  if (!value.is_array()) {
    return KeyError(key, "expected an array of non-negative integers");
  }
  std::vector<size_t> out;
  out.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    const json& v = value[i];
    if (!v.is_number_integer() ||
        (!v.is_number_unsigned() && v.get<int64_t>() < 0)) {
      return KeyError(absl::StrCat(key, "[", i, "]"),
                      "expected a non-negative integer");
    }
    out.push_back(v.get<size_t>());
  }
  return out;
}

absl::StatusOr<DistortionMatrix> Matrix(const json& value,
                                        const std::string& key) {
  if (!value.is_array() || value.empty()) {
    return KeyError(key, "expected a non-empty array of rows");
  }
  DistortionMatrix d;
  d.rows = Alphabet{value.size()};
  for (size_t r = 0; r < value.size(); ++r) {
    const std::string row_key = absl::StrCat(key, "[", r, "]");
    absl::StatusOr<std::vector<double>> row = DoubleArray(value[r], row_key);
    if (!row.ok()) return row.status();
    if (r == 0) {
      d.cols = Alphabet{row->size()};
    } else if (row->size() != d.cols.size) {
      return KeyError(row_key, absl::StrCat("has ", row->size(),
                                            " entries, row 0 has ",
                                            d.cols.size));
    }
    d.values.insert(d.values.end(), row->begin(), row->end());
  }
  return d;
}

const json* Find(const json& object, const char* key) {
  auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

json MatrixJson(const DistortionMatrix& d) {
  json rows = json::array();
  for (size_t r = 0; r < d.rows.size; ++r) {
    json row = json::array();
    for (size_t c = 0; c < d.cols.size; ++c) row.push_back(d(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json ConfigJson(const SolverConfig& config) {
  return json{{"beta_min", config.beta_grid.min},
              {"beta_max", config.beta_grid.max},
              {"beta_count", config.beta_grid.count},
              {"max_iterations", config.max_iterations},
              {"convergence_tol", config.convergence_tol},
              {"gap_tol", config.gap_tol},
              {"support_epsilon", config.support_epsilon},
              {"interpolation_tol", config.interpolation_tol},
              {"max_refine_depth", config.max_refine_depth}};
}

json OptionalJson(const std::optional<double>& value) {
  return value.has_value() ? json(*value) : json(nullptr);
}

std::string Dump(const json& value) { return value.dump(2) + "\n"; }

// Splits CSV text into rows of fields, checks the header and drops blank
// lines. Fields are not quoted in any of the formats here.
absl::StatusOr<std::vector<std::vector<std::string>>> CsvRows(
    std::string_view text, absl::string_view header) {
  std::vector<std::string> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n');
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", i + 1, ": expected header '", header, "', got '", line,
            "'"));
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields = absl::StrSplit(line, ',');
    rows.push_back(std::move(fields));
  }
  if (!seen_header) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing header '", header, "'"));
  }
  return rows;
}

absl::StatusOr<std::vector<double>> NumericRow(
    const std::vector<std::string>& fields, size_t first, size_t count,
    size_t row) {
  if (fields.size() != first + count) {
    return absl::InvalidArgumentError(absl::StrCat(
        "data row ", row + 1, " has ", fields.size(), " fields, expected ",
        first + count));
  }
  std::vector<double> out;
  for (size_t i = first; i < fields.size(); ++i) {
    absl::StatusOr<double> v = ParseDouble(fields[i]);
    if (!v.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "data row ", row + 1, " field ", i + 1, ": ", v.status().message()));
    }
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[512];
  std::to_chars_result result = std::to_chars(
      buffer, buffer + sizeof(buffer), value, std::chars_format::fixed);
  if (result.ec != std::errc()) {
    // Only reachable for magnitudes beyond the buffer; fall back to the
    // exponent form, still shortest round-trip.
    result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  }
  return std::string(buffer, result.ptr);
}

absl::StatusOr<double> ParseDouble(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", absl::string_view(text.data(), text.size()),
                     "' is not a number"));
  }
  return value;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

absl::StatusOr<LayeredPipeline> ParsePipelineJson(std::string_view text) {
  absl::StatusOr<json> parsed = ParseJson(text);
  if (!parsed.ok()) return parsed.status();
  const json& root = *parsed;
  if (!root.is_object()) {
    return absl::InvalidArgumentError("pipeline JSON must be an object");
  }
  for (const char* key : {"source", "g1", "g2", "h2", "task_distortion"}) {
    if (Find(root, key) == nullptr) return KeyError(key, "missing");
  }

  LayeredPipeline p;
  absl::StatusOr<std::vector<double>> source = DoubleArray(root["source"], "source");
  if (!source.ok()) return source.status();
  p.source.mass = *std::move(source);

  absl::StatusOr<std::vector<size_t>> g1 = IndexArray(root["g1"], "g1");
  if (!g1.ok()) return g1.status();
  absl::StatusOr<std::vector<size_t>> g2 = IndexArray(root["g2"], "g2");
  if (!g2.ok()) return g2.status();
  absl::StatusOr<std::vector<size_t>> h2 = IndexArray(root["h2"], "h2");
  if (!h2.ok()) return h2.status();
  absl::StatusOr<DistortionMatrix> task =
      Matrix(root["task_distortion"], "task_distortion");
  if (!task.ok()) return task.status();

  PipelineSizes sizes = {p.source.mass.size(), g2->size(), h2->size(),
                         task->rows.size};
  if (const json* explicit_sizes = Find(root, "alphabet_sizes")) {
    absl::StatusOr<std::vector<size_t>> values =
        IndexArray(*explicit_sizes, "alphabet_sizes");
    if (!values.ok()) return values.status();
    if (values->size() != 4) {
      return KeyError("alphabet_sizes", "expected 4 entries (X, Y1, Y2, T)");
    }
    std::copy(values->begin(), values->end(), sizes.begin());
  }
  p.g1 = DeterministicMap{Alphabet{sizes[1]}, *std::move(g1)};
  p.g2 = DeterministicMap{Alphabet{sizes[2]}, *std::move(g2)};
  p.h2 = DeterministicMap{Alphabet{sizes[3]}, *std::move(h2)};
  p.task_distortion = *std::move(task);

  if (const json* branches = Find(root, "branches")) {
    if (!branches->is_array()) return KeyError("branches", "expected an array");
    for (size_t i = 0; i < branches->size(); ++i) {
      const json& b = (*branches)[i];
      const std::string key = absl::StrCat("branches[", i, "]");
      if (!b.is_object()) return KeyError(key, "expected an object");
      const json* name = Find(b, "name");
      const json* map = Find(b, "map");
      const json* distortion = Find(b, "distortion");
      if (name == nullptr || !name->is_string()) {
        return KeyError(key + ".name", "expected a string");
      }
      if (map == nullptr) return KeyError(key + ".map", "missing");
      if (distortion == nullptr) return KeyError(key + ".distortion", "missing");
      absl::StatusOr<std::vector<size_t>> table = IndexArray(*map, key + ".map");
      if (!table.ok()) return table.status();
      absl::StatusOr<DistortionMatrix> d = Matrix(*distortion, key + ".distortion");
      if (!d.ok()) return d.status();
      BranchDistortion branch;
      branch.name = name->get<std::string>();
      branch.map = DeterministicMap{d->rows, *std::move(table)};
      branch.distortion = *std::move(d);
      p.branches.push_back(std::move(branch));
    }
  }
  if (const json* label = Find(root, "partition_label")) {
    if (!label->is_string()) return KeyError("partition_label", "expected a string");
    p.partition_label = label->get<std::string>();
  }

  std::vector<Violation> violations = ValidatePipeline(p);
  if (!violations.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid pipeline:\n", FormatViolations(violations)));
  }
  return p;
}

std::string PipelineToJson(const LayeredPipeline& pipeline) {
  json root;
  root["source"] = pipeline.source.mass;
  root["g1"] = pipeline.g1.table;
  root["g2"] = pipeline.g2.table;
  root["h2"] = pipeline.h2.table;
  root["task_distortion"] = MatrixJson(pipeline.task_distortion);
  json branches = json::array();
  for (const BranchDistortion& b : pipeline.branches) {
    branches.push_back(json{{"name", b.name},
                            {"map", b.map.table},
                            {"distortion", MatrixJson(b.distortion)}});
  }
  root["branches"] = std::move(branches);
  root["partition_label"] = pipeline.partition_label;
  root["alphabet_sizes"] = {pipeline.x().size, pipeline.y1().size,
                            pipeline.y2().size, pipeline.t().size};
  return Dump(root);
}

absl::StatusOr<LayeredPipeline> LoadPipeline(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<LayeredPipeline> pipeline = ParsePipelineJson(*text);
  if (!pipeline.ok()) {
    return absl::Status(pipeline.status().code(),
                        absl::StrCat(path, ": ", pipeline.status().message()));
  }
  return pipeline;
}

absl::Status SavePipeline(const LayeredPipeline& pipeline,
                          const std::string& path) {
  return WriteFile(path, PipelineToJson(pipeline));
}

std::string RdCurveToCsv(const RDCurve& curve) {
  std::string out = "distortion,rate_bits,beta\n";
  for (const RDPoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.distortion), ",", FormatDouble(p.rate),
                    ",", FormatDouble(p.beta), "\n");
  }
  return out;
}

absl::StatusOr<RDCurve> ParseRdCurveCsv(std::string_view text,
                                        std::string source_label) {
  absl::StatusOr<std::vector<std::vector<std::string>>> rows =
      CsvRows(text, "distortion,rate_bits,beta");
  if (!rows.ok()) return rows.status();
  RDCurve curve;
  curve.source_label = std::move(source_label);
  for (size_t i = 0; i < rows->size(); ++i) {
    absl::StatusOr<std::vector<double>> v = NumericRow((*rows)[i], 0, 3, i);
    if (!v.ok()) return v.status();
    curve.points.push_back(RDPoint{(*v)[1], (*v)[0], (*v)[2]});
  }
  return curve;
}

std::string RateQualityCurveToCsv(const RateQualityCurve& curve) {
  std::string out = "rate_bpp,quality\n";
  for (const RateQualityPoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.rate), ",", FormatDouble(p.quality),
                    "\n");
  }
  return out;
}

absl::StatusOr<RateQualityCurve> ParseRateQualityCsv(std::string_view text,
                                                     std::string quality_metric,
                                                     std::string curve_label) {
  absl::StatusOr<std::vector<std::vector<std::string>>> rows =
      CsvRows(text, "rate_bpp,quality");
  if (!rows.ok()) return rows.status();
  std::vector<RateQualityPoint> points;
  for (size_t i = 0; i < rows->size(); ++i) {
    absl::StatusOr<std::vector<double>> v = NumericRow((*rows)[i], 0, 2, i);
    if (!v.ok()) return v.status();
    points.push_back(RateQualityPoint{(*v)[0], (*v)[1]});
  }
  return RateQualityCurve::Create(std::move(points), std::move(quality_metric),
                                  std::move(curve_label));
}

absl::StatusOr<RateQualityCurve> LoadRateQualityCurve(
    const std::string& path, const std::string& quality_metric,
    const std::string& curve_label) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::filesystem::path sidecar_path(path);
  std::string metric = quality_metric;
  std::string label = curve_label;
  const std::string stem = sidecar_path.stem().string();
  sidecar_path.replace_extension(".json");
  if ((metric.empty() || label.empty()) &&
      std::filesystem::exists(sidecar_path)) {
    absl::StatusOr<std::string> sidecar_text = ReadFile(sidecar_path.string());
    if (!sidecar_text.ok()) return sidecar_text.status();
    absl::StatusOr<json> sidecar = ParseJson(*sidecar_text);
    if (!sidecar.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          sidecar_path.string(), ": ", sidecar.status().message()));
    }
    if (const json* m = Find(*sidecar, "quality_metric");
        m != nullptr && m->is_string() && metric.empty()) {
      metric = m->get<std::string>();
    }
    if (const json* l = Find(*sidecar, "curve_label");
        l != nullptr && l->is_string() && label.empty()) {
      label = l->get<std::string>();
    }
  }
  if (metric.empty()) metric = "quality";
  if (label.empty()) label = stem;
  absl::StatusOr<RateQualityCurve> curve =
      ParseRateQualityCsv(*text, std::move(metric), std::move(label));
  if (!curve.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", curve.status().message()));
  }
  return curve;
}

std::string OperatingPointsToCsv(const std::vector<OperatingPoint>& points) {
  std::string out = "label,rate,d_enh,d_base\n";
  for (const OperatingPoint& p : points) {
    absl::StrAppend(&out, p.label, ",", FormatDouble(p.rate), ",",
                    FormatDouble(p.d_enh), ",", FormatDouble(p.d_base), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<OperatingPoint>> ParseOperatingPointsCsv(
    std::string_view text) {
  absl::StatusOr<std::vector<std::vector<std::string>>> rows =
      CsvRows(text, "label,rate,d_enh,d_base");
  if (!rows.ok()) return rows.status();
  std::vector<OperatingPoint> points;
  for (size_t i = 0; i < rows->size(); ++i) {
    absl::StatusOr<std::vector<double>> v = NumericRow((*rows)[i], 1, 3, i);
    if (!v.ok()) return v.status();
    points.push_back(OperatingPoint{(*v)[0], (*v)[1], (*v)[2], (*rows)[i][0]});
  }
  return points;
}

std::string ToolVersion() { return ICMRD_VERSION; }

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string SolverConfigToJson(const SolverConfig& config) {
  return Dump(ConfigJson(config));
}

absl::StatusOr<SolverConfig> ParseSolverConfigJson(std::string_view text,
                                                   const SolverConfig& base) {
  absl::StatusOr<json> parsed = ParseJson(text);
  if (!parsed.ok()) return parsed.status();
  if (!parsed->is_object()) {
    return absl::InvalidArgumentError("solver config must be a JSON object");
  }
  SolverConfig config = base;
  for (const auto& [key, value] : parsed->items()) {
    const bool integral = key == "beta_count" || key == "max_iterations" ||
                          key == "max_refine_depth";
    if (integral ? !value.is_number_unsigned() : !value.is_number()) {
      return KeyError(key, integral ? "expected a non-negative integer"
                                    : "expected a number");
    }
    if (key == "beta_min") {
      config.beta_grid.min = value.get<double>();
    } else if (key == "beta_max") {
      config.beta_grid.max = value.get<double>();
    } else if (key == "beta_count") {
      config.beta_grid.count = value.get<size_t>();
    } else if (key == "max_iterations") {
      config.max_iterations = value.get<size_t>();
    } else if (key == "convergence_tol") {
      config.convergence_tol = value.get<double>();
    } else if (key == "gap_tol") {
      config.gap_tol = value.get<double>();
    } else if (key == "support_epsilon") {
      config.support_epsilon = value.get<double>();
    } else if (key == "interpolation_tol") {
      config.interpolation_tol = value.get<double>();
    } else if (key == "max_refine_depth") {
      config.max_refine_depth = value.get<size_t>();
    } else {
      return KeyError(key, "unknown solver setting");
    }
  }
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  return config;
}

std::string ManifestToJson(const RunManifest& manifest) {
  json root{{"command", manifest.command},
            {"inputs", manifest.inputs},
            {"outputs", manifest.outputs},
            {"config", ConfigJson(manifest.config)},
            {"seed", manifest.seed},
            {"rng", "mt19937_64"},
            {"tool_version", manifest.tool_version},
            {"started", manifest.started},
            {"finished", manifest.finished}};
  return Dump(root);
}

std::string TheoremReportToJson(
    const TheoremReport& report,
    const std::optional<ConstructionReport>& construction,
    std::string_view manifest) {
  json rates = json::array();
  for (const auto& [dominating, dominated] : report.rate_pairs) {
    rates.push_back({dominating, dominated});
  }
  const bool pass =
      report.pass && (!construction.has_value() || construction->pass);
  json root{{"theorem_id", TheoremName(report.theorem_id)},
            {"tolerance", report.tolerance},
            {"d_grid", report.d_grid},
            {"rates", std::move(rates)},
            {"max_violation", report.max_violation},
            {"verdict", pass ? "pass" : "fail"},
            {"manifest", std::string(manifest)}};
  if (construction.has_value()) {
    root["construction"] = json{
        {"points", construction->points.size()},
        {"max_rate_excess", construction->max_rate_excess},
        {"max_cross_excess", construction->max_cross_excess},
        {"verdict", construction->pass ? "pass" : "fail"}};
  }
  return Dump(root);
}

std::string BdResultToJson(const BDResult& result, std::string_view manifest) {
  json overlap = nullptr;
  if (result.overlap.has_value()) {
    overlap = {result.overlap->first, result.overlap->second};
  }
  json root{{"bd_rate_percent", OptionalJson(result.bd_rate_percent)},
            {"bd_quality", OptionalJson(result.bd_quality)},
            {"overlap", std::move(overlap)},
            {"reason", result.reason},
            {"reference_label", result.reference_label},
            {"test_label", result.test_label},
            {"quality_metric", result.quality_metric},
            {"variant", result.variant},
            {"manifest", std::string(manifest)}};
  return Dump(root);
}

std::string SelectionToJson(const Selection& selection, double lambda,
                            double w, std::string_view manifest) {
  json root{{"index", selection.index},
            {"label", selection.point.label},
            {"rate", selection.point.rate},
            {"d_enh", selection.point.d_enh},
            {"d_base", selection.point.d_base},
            {"loss", selection.loss},
            {"lambda", lambda},
            {"w", w},
            {"manifest", std::string(manifest)}};
  return Dump(root);
}

}  // namespace icmrd
