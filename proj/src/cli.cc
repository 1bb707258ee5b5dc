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

#include "icmrd/cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <optional>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "icmrd/bd_metrics.h"
#include "icmrd/distortion.h"
#include "icmrd/io.h"
#include "icmrd/pipeline.h"
#include "icmrd/random.h"
#include "icmrd/rd_solver.h"
#include "icmrd/theorems.h"

namespace icmrd {
namespace {

namespace fs = std::filesystem;

// Flags shared by the solver-driven subcommands. Unset optionals fall back
// to the config file, then to the built-in defaults.
struct SolverFlags {
  std::string config_path;
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::optional<size_t> beta_count;

  void Attach(CLI::App* app) {
    app->add_option("--config", config_path, "solver config JSON");
    app->add_option("--beta-min", beta_min, "smallest beta of the sweep");
    app->add_option("--beta-max", beta_max, "largest beta of the sweep");
    app->add_option("--beta-count", beta_count, "number of sweep betas");
  }

  absl::StatusOr<SolverConfig> Resolve(std::vector<std::string>* inputs) const {
    SolverConfig config;
    if (!config_path.empty()) {
      absl::StatusOr<std::string> text = ReadFile(config_path);
      if (!text.ok()) return text.status();
      absl::StatusOr<SolverConfig> parsed = ParseSolverConfigJson(*text, config);
      if (!parsed.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat(config_path, ": ", parsed.status().message()));
      }
      config = *parsed;
      inputs->push_back(config_path);
    }
    if (beta_min) config.beta_grid.min = *beta_min;
    if (beta_max) config.beta_grid.max = *beta_max;
    if (beta_count) config.beta_grid.count = *beta_count;
    if (absl::Status s = config.Validate(); !s.ok()) return s;
    return config;
  }
};

absl::StatusOr<PipelineSizes> ParseSizes(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ',');
  PipelineSizes sizes{};
  if (parts.size() != sizes.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("--sizes needs 4 comma-separated values, got '", text, "'"));
  }
  for (size_t i = 0; i < parts.size(); ++i) {
    if (!absl::SimpleAtoi(parts[i], &sizes[i]) || sizes[i] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("--sizes entry '", parts[i], "' is not a positive integer"));
    }
  }
  return sizes;
}

absl::StatusOr<DistortionKind> ParseKind(const std::string& text) {
  if (text == "hamming") return DistortionKind::kHamming;
  if (text == "random") return DistortionKind::kRandomNonnegative;
  return absl::InvalidArgumentError(
      absl::StrCat("--kind must be hamming or random, got '", text, "'"));
}

std::string SizesText(const PipelineSizes& sizes) {
  return absl::StrCat(sizes[0], ",", sizes[1], ",", sizes[2], ",", sizes[3]);
}

// Collects outputs of one run and writes the manifest last.
class Run {
 public:
  Run(std::string command, std::string out_dir, std::ostream& err)
      : out_dir_(std::move(out_dir)), err_(err) {
    manifest_.command = std::move(command);
    manifest_.tool_version = ToolVersion();
    manifest_.started = UtcTimestamp();
  }

  RunManifest& manifest() { return manifest_; }

  absl::Status Prepare() {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create ", out_dir_, ": ", ec.message()));
    }
    return absl::OkStatus();
  }

  absl::Status Emit(const std::string& relative, std::string_view contents) {
    const fs::path path = fs::path(out_dir_) / relative;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (absl::Status s = WriteFile(path.string(), contents); !s.ok()) return s;
    manifest_.outputs.push_back(relative);
    return absl::OkStatus();
  }

  int Finish(int code) {
    manifest_.finished = UtcTimestamp();
    const fs::path path = fs::path(out_dir_) / kManifestFileName;
    if (absl::Status s = WriteFile(path.string(), ManifestToJson(manifest_));
        !s.ok()) {
      err_ << "error: " << s.message() << "\n";
      return kExitInput;
    }
    return code;
  }

 private:
  std::string out_dir_;
  std::ostream& err_;
  RunManifest manifest_;
};

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitInput;
}

int Solve(const std::string& variable, const std::string& pipeline_path,
          const SolverFlags& flags, const std::string& out_dir,
          std::ostream& out, std::ostream& err) {
  Run run(absl::StrCat("solve ", variable), out_dir, err);
  run.manifest().inputs.push_back(pipeline_path);
  absl::StatusOr<SolverConfig> config = flags.Resolve(&run.manifest().inputs);
  if (!config.ok()) return Fail(err, config.status());
  run.manifest().config = *config;
  absl::StatusOr<LayeredPipeline> p = LoadPipeline(pipeline_path);
  if (!p.ok()) return Fail(err, p.status());

  absl::StatusOr<RDCurve> curve;
  if (variable == "cross") {
    curve = CrossRdCurve(*p, *config);
  } else {
    FiniteDistribution source = p->source;
    DeterministicMap to_task = p->f();
    if (variable == "y1") {
      source = *Pushforward(p->source, p->g1);
      to_task = p->h1();
    } else if (variable == "y2") {
      source = *Pushforward(*Pushforward(p->source, p->g1), p->g2);
      to_task = p->h2;
    }
    absl::StatusOr<DistortionMatrix> d =
        PullbackDistortion(p->task_distortion, to_task);
    if (!d.ok()) return Fail(err, d.status());
    curve = SolveRdCurve(source, *d, *config, variable);
  }
  if (!curve.ok()) return Fail(err, curve.status());
  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  const std::string name = absl::StrCat("rd_", variable, ".csv");
  if (absl::Status s = run.Emit(name, RdCurveToCsv(*curve)); !s.ok()) {
    return Fail(err, s);
  }
  out << "wrote " << (fs::path(out_dir) / name).string() << " ("
      << curve->points.size() << " points)\n";
  return run.Finish(kExitOk);
}

struct TheoremOutcome {
  TheoremReport report;
  std::optional<ConstructionReport> construction;

  bool pass() const {
    return report.pass && (!construction.has_value() || construction->pass);
  }
};

absl::StatusOr<TheoremOutcome> CheckTheorem(const std::string& theorem,
                                            const LayeredPipeline& p,
                                            size_t grid, double tol,
                                            const SolverConfig& config) {
  TheoremOutcome outcome;
  if (theorem == "thm1") {
    absl::StatusOr<TheoremReport> report = VerifyTheorem1(p, grid, config, tol);
    if (!report.ok()) return report.status();
    outcome.report = *std::move(report);
    return outcome;
  }
  // Task-induced distortions on both layers; g2 then has magnitude 1.
  absl::StatusOr<DistortionMatrix> d_y1 =
      PullbackDistortion(p.task_distortion, p.h1());
  if (!d_y1.ok()) return d_y1.status();
  absl::StatusOr<TheoremReport> report =
      VerifyTheorem2(p, *d_y1, grid, config, tol);
  if (!report.ok()) return report.status();
  absl::StatusOr<ConstructionReport> construction =
      VerifyTwoStepConstruction(p, *d_y1, *report, config, tol);
  if (!construction.ok()) return construction.status();
  outcome.report = *std::move(report);
  outcome.construction = *std::move(construction);
  return outcome;
}

int Verify(const std::string& theorem, const std::string& pipeline_path,
           size_t grid, double tol, const SolverFlags& flags,
           const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Run run(absl::StrCat("verify ", theorem), out_dir, err);
  run.manifest().inputs.push_back(pipeline_path);
  absl::StatusOr<SolverConfig> config = flags.Resolve(&run.manifest().inputs);
  if (!config.ok()) return Fail(err, config.status());
  run.manifest().config = *config;
  absl::StatusOr<LayeredPipeline> p = LoadPipeline(pipeline_path);
  if (!p.ok()) return Fail(err, p.status());
  absl::StatusOr<TheoremOutcome> outcome =
      CheckTheorem(theorem, *p, grid, tol, *config);
  if (!outcome.ok()) return Fail(err, outcome.status());

  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  const std::string report_name = absl::StrCat(theorem, "_report.json");
  for (const auto& [name, contents] :
       {std::pair{report_name, TheoremReportToJson(outcome->report,
                                                   outcome->construction)},
        std::pair{absl::StrCat(theorem, "_dominating.csv"),
                  RdCurveToCsv(outcome->report.dominating_curve)},
        std::pair{absl::StrCat(theorem, "_dominated.csv"),
                  RdCurveToCsv(outcome->report.dominated_curve)}}) {
    if (absl::Status s = run.Emit(name, contents); !s.ok()) return Fail(err, s);
  }
  out << theorem << ": " << (outcome->pass() ? "pass" : "fail")
      << ", max_violation " << FormatDouble(outcome->report.max_violation)
      << " bits over " << outcome->report.d_grid.size() << " grid points\n";
  return run.Finish(outcome->pass() ? kExitOk : kExitFailed);
}

int Bd(const std::string& kind, const std::string& ref_path,
       const std::string& test_path, const std::string& metric,
       const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Run run(absl::StrCat("bd ", kind), out_dir, err);
  run.manifest().inputs = {ref_path, test_path};
  absl::StatusOr<RateQualityCurve> ref = LoadRateQualityCurve(ref_path, metric);
  if (!ref.ok()) return Fail(err, ref.status());
  absl::StatusOr<RateQualityCurve> test = LoadRateQualityCurve(test_path, metric);
  if (!test.ok()) return Fail(err, test.status());
  absl::StatusOr<BDResult> result =
      kind == "rate" ? BdRate(*ref, *test) : BdQuality(*ref, *test);
  if (!result.ok()) return Fail(err, result.status());
  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  if (absl::Status s = run.Emit(absl::StrCat("bd_", kind, ".json"),
                                BdResultToJson(*result));
      !s.ok()) {
    return Fail(err, s);
  }
  const std::optional<double>& value =
      kind == "rate" ? result->bd_rate_percent : result->bd_quality;
  if (value.has_value()) {
    out << (kind == "rate" ? "bd_rate_percent " : "bd_quality ")
        << FormatDouble(*value) << "\n";
  } else {
    out << "no result: " << result->reason << "\n";
  }
  return run.Finish(kExitOk);
}

int Select(const std::string& points_path, double lambda, double w,
           const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Run run("select", out_dir, err);
  run.manifest().inputs.push_back(points_path);
  absl::StatusOr<std::string> text = ReadFile(points_path);
  if (!text.ok()) return Fail(err, text.status());
  absl::StatusOr<std::vector<OperatingPoint>> points =
      ParseOperatingPointsCsv(*text);
  if (!points.ok()) {
    return Fail(err, absl::InvalidArgumentError(absl::StrCat(
                         points_path, ": ", points.status().message())));
  }
  absl::StatusOr<Selection> selection = LagrangianSelect(*points, lambda, w);
  if (!selection.ok()) return Fail(err, selection.status());
  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  if (absl::Status s =
          run.Emit("selection.json", SelectionToJson(*selection, lambda, w));
      !s.ok()) {
    return Fail(err, s);
  }
  out << "selected " << selection->index << " (" << selection->point.label
      << "), loss " << FormatDouble(selection->loss) << "\n";
  return run.Finish(kExitOk);
}

int Gen(uint64_t seed, const std::string& sizes_text, const std::string& kind,
        const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Run run("gen", out_dir, err);
  run.manifest().seed = seed;
  absl::StatusOr<PipelineSizes> sizes = ParseSizes(sizes_text);
  if (!sizes.ok()) return Fail(err, sizes.status());
  absl::StatusOr<DistortionKind> distortion_kind = ParseKind(kind);
  if (!distortion_kind.ok()) return Fail(err, distortion_kind.status());
  absl::StatusOr<LayeredPipeline> p =
      RandomPipeline(seed, *sizes, *distortion_kind);
  if (!p.ok()) return Fail(err, p.status());
  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  if (absl::Status s = run.Emit("pipeline.json", PipelineToJson(*p)); !s.ok()) {
    return Fail(err, s);
  }
  out << "wrote " << (fs::path(out_dir) / "pipeline.json").string() << "\n";
  return run.Finish(kExitOk);
}

struct SweepCase {
  uint64_t seed = 0;
  uint64_t pipeline_seed = 0;
  PipelineSizes sizes{};
  absl::Status status;
  std::optional<TheoremOutcome> outcome;
};

// Sizes are drawn per case, each uniform on [min(2, max), max], and the
// pipeline seed comes from the same generator.
SweepCase RunSweepCase(const std::string& theorem, uint64_t seed,
                       const PipelineSizes& max_sizes, DistortionKind kind,
                       size_t grid, double tol, const SolverConfig& config) {
  SweepCase c;
  c.seed = seed;
  Rng rng(seed);
  for (size_t i = 0; i < max_sizes.size(); ++i) {
    const size_t lo = std::min<size_t>(2, max_sizes[i]);
    c.sizes[i] = lo + rng.UniformIndex(max_sizes[i] - lo + 1);
  }
  c.pipeline_seed = rng.NextU64();
  absl::StatusOr<LayeredPipeline> p = RandomPipeline(c.pipeline_seed, c.sizes, kind);
  if (!p.ok()) {
    c.status = p.status();
    return c;
  }
  absl::StatusOr<TheoremOutcome> outcome = CheckTheorem(theorem, *p, grid, tol, config);
  if (!outcome.ok()) {
    c.status = outcome.status();
    return c;
  }
  c.outcome = *std::move(outcome);
  return c;
}

int Sweep(const std::string& theorem, size_t seeds, uint64_t base_seed,
          const std::string& sizes_text, const std::string& kind, size_t grid,
          double tol, size_t jobs, const SolverFlags& flags,
          const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Run run(absl::StrCat("sweep ", theorem), out_dir, err);
  run.manifest().seed = base_seed;
  absl::StatusOr<SolverConfig> config = flags.Resolve(&run.manifest().inputs);
  if (!config.ok()) return Fail(err, config.status());
  run.manifest().config = *config;
  absl::StatusOr<PipelineSizes> sizes = ParseSizes(sizes_text);
  if (!sizes.ok()) return Fail(err, sizes.status());
  absl::StatusOr<DistortionKind> distortion_kind = ParseKind(kind);
  if (!distortion_kind.ok()) return Fail(err, distortion_kind.status());
  if (seeds == 0) return Fail(err, absl::InvalidArgumentError("--seeds must be >= 1"));
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, seeds);

  std::vector<SweepCase> cases(seeds);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < seeds; i = next++) {
      cases[i] = RunSweepCase(theorem, base_seed + i, *sizes, *distortion_kind,
                              grid, tol, *config);
    }
  };
  std::vector<std::thread> threads;
  for (size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  if (absl::Status s = run.Prepare(); !s.ok()) return Fail(err, s);
  std::string table = "seed,pipeline_seed,x,y1,y2,t,max_violation,verdict\n";
  size_t passed = 0;
  for (const SweepCase& c : cases) {
    std::string verdict = "error";
    std::string violation = "";
    if (c.outcome.has_value()) {
      verdict = c.outcome->pass() ? "pass" : "fail";
      violation = FormatDouble(c.outcome->report.max_violation);
      const std::string name = absl::StrCat("cases/", theorem, "_seed_", c.seed, ".json");
      if (absl::Status s = run.Emit(
              name, TheoremReportToJson(c.outcome->report, c.outcome->construction,
                                        absl::StrCat("../", kManifestFileName)));
          !s.ok()) {
        return Fail(err, s);
      }
    } else {
      err << "seed " << c.seed << ": " << c.status.message() << "\n";
    }
    if (verdict == "pass") ++passed;
    absl::StrAppend(&table, c.seed, ",", c.pipeline_seed, ",", SizesText(c.sizes),
                    ",", violation, ",", verdict, "\n");
  }
  const std::string summary = absl::StrCat(theorem, " sweep: ", passed, "/",
                                           seeds, " pass\n");
  if (absl::Status s = run.Emit(absl::StrCat("sweep_", theorem, ".csv"), table);
      !s.ok()) {
    return Fail(err, s);
  }
  if (absl::Status s = run.Emit(absl::StrCat("sweep_", theorem, ".txt"), summary);
      !s.ok()) {
    return Fail(err, s);
  }
  out << table << summary;
  return run.Finish(passed == seeds ? kExitOk : kExitFailed);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Rate-distortion bounds for layered inference pipelines",
               args.empty() ? "icmrd" : args[0]};
  app.require_subcommand(1);
  app.set_version_flag("--version", ToolVersion());

  std::string out_dir = ".";
  std::string pipeline_path;
  SolverFlags solver_flags;
  size_t grid = 20;
  double tol = kDefaultTheoremTolerance;

  CLI::App* solve = app.add_subcommand("solve", "RD curve of one variable as CSV");
  std::string variable;
  solve->add_option("variable", variable, "x, y1, y2 or cross")
      ->required()
      ->check(CLI::IsMember({"x", "y1", "y2", "cross"}));
  solve->add_option("--pipeline", pipeline_path, "pipeline JSON")->required();
  solve->add_option("--out-dir", out_dir, "output directory");
  solver_flags.Attach(solve);

  CLI::App* verify = app.add_subcommand("verify", "check a rate bound on a pipeline");
  std::string theorem;
  verify->add_option("theorem", theorem, "thm1 or thm2")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2"}));
  verify->add_option("--pipeline", pipeline_path, "pipeline JSON")->required();
  verify->add_option("--grid", grid, "distortion grid size")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "allowed violation in bits")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--out-dir", out_dir, "output directory");
  solver_flags.Attach(verify);

  CLI::App* bd = app.add_subcommand("bd", "Bjontegaard delta of two curve CSVs");
  std::string bd_kind;
  std::string ref_path;
  std::string test_path;
  std::string metric;
  bd->add_option("kind", bd_kind, "rate or quality")
      ->required()
      ->check(CLI::IsMember({"rate", "quality"}));
  bd->add_option("--ref", ref_path, "reference curve CSV")->required();
  bd->add_option("--test", test_path, "test curve CSV")->required();
  bd->add_option("--metric", metric, "quality metric name");
  bd->add_option("--out-dir", out_dir, "output directory");

  CLI::App* select = app.add_subcommand("select", "Lagrangian operating point choice");
  std::string points_path;
  double lambda = 0.0;
  double w = 0.0;
  select->add_option("--points", points_path, "operating point CSV")->required();
  select->add_option("--lambda", lambda, "distortion weight")->required();
  select->add_option("--w", w, "base distortion weight")->required();
  select->add_option("--out-dir", out_dir, "output directory");

  CLI::App* gen = app.add_subcommand("gen", "random pipeline JSON");
  uint64_t seed = 0;
  std::string sizes = "4,4,3,2";
  std::string kind = "hamming";
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--sizes", sizes, "alphabet sizes X,Y1,Y2,T");
  gen->add_option("--kind", kind, "hamming or random task distortion");
  gen->add_option("--out-dir", out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "verify a bound over many seeds");
  size_t seeds = 10;
  size_t jobs = 0;
  sweep->add_option("theorem", theorem, "thm1 or thm2")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2"}));
  sweep->add_option("--seeds", seeds, "number of cases");
  sweep->add_option("--seed", seed, "first case seed");
  sweep->add_option("--sizes", sizes, "largest alphabet sizes X,Y1,Y2,T");
  sweep->add_option("--kind", kind, "hamming or random task distortion");
  sweep->add_option("--grid", grid, "distortion grid size")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--tol", tol, "allowed violation in bits")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--jobs", jobs, "worker threads, 0 for all cores");
  sweep->add_option("--out-dir", out_dir, "output directory");
  solver_flags.Attach(sweep);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  if (solve->parsed()) {
    return Solve(variable, pipeline_path, solver_flags, out_dir, out, err);
  }
  if (verify->parsed()) {
    return Verify(theorem, pipeline_path, grid, tol, solver_flags, out_dir, out, err);
  }
  if (bd->parsed()) return Bd(bd_kind, ref_path, test_path, metric, out_dir, out, err);
  if (select->parsed()) return Select(points_path, lambda, w, out_dir, out, err);
  if (gen->parsed()) return Gen(seed, sizes, kind, out_dir, out, err);
  return Sweep(theorem, seeds, seed, sizes, kind, grid, tol, jobs, solver_flags,
               out_dir, out, err);
}

}  // namespace icmrd
