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

#include "icmrd/theorems.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "icmrd/information.h"

namespace icmrd {
namespace {

constexpr double kExactSlack = 1e-9;

absl::Status Context(const absl::Status& status, absl::string_view what) {
  return absl::Status(status.code(), absl::StrCat(what, ": ", status.message()));
}

absl::Status RequireValid(const LayeredPipeline& pipeline) {
  if (std::vector<Violation> v = ValidatePipeline(pipeline); !v.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid pipeline:\n", FormatViolations(v)));
  }
  return absl::OkStatus();
}

absl::StatusOr<DistortionMatrix> ResolveDy2(
    const LayeredPipeline& pipeline,
    const std::optional<DistortionMatrix>& d_y2) {
  if (d_y2.has_value()) return *d_y2;
  return PullbackDistortion(pipeline.task_distortion, pipeline.h2);
}

// Fills grid, rate pairs and verdict from two solved curves.
absl::Status Compare(TheoremReport& report, double lo, double hi,
                     size_t grid_size) {
  report.d_grid = UniformGrid(lo, hi, grid_size);
  report.rate_pairs.clear();
  report.max_violation = 0.0;
  for (double d : report.d_grid) {
    absl::StatusOr<double> upper = RateAt(report.dominating_curve, d);
    if (!upper.ok()) return upper.status();
    absl::StatusOr<double> lower = RateAt(report.dominated_curve, d);
    if (!lower.ok()) return lower.status();
    report.rate_pairs.emplace_back(*upper, *lower);
    report.max_violation = std::max(report.max_violation, *lower - *upper);
  }
  report.pass = report.max_violation <= report.tolerance;
  return absl::OkStatus();
}

}  // namespace

std::string TheoremName(TheoremId id) {
  return id == TheoremId::kThm1 ? "thm1" : "thm2";
}

std::vector<double> UniformGrid(double lo, double hi, size_t size) {
  std::vector<double> grid(size);
  if (size == 0) return grid;
  grid[0] = lo;
  if (size == 1) return grid;
  for (size_t i = 1; i + 1 < size; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(size - 1);
  }
  grid[size - 1] = hi;
  return grid;
}

absl::StatusOr<TheoremReport> VerifyTheorem1(const LayeredPipeline& pipeline,
                                             size_t grid_size,
                                             const SolverConfig& config,
                                             double tolerance) {
  if (absl::Status s = RequireValid(pipeline); !s.ok()) return s;
  if (grid_size == 0) return absl::InvalidArgumentError("grid_size must be >= 1");

  absl::StatusOr<FiniteDistribution> p1 = Pushforward(pipeline.source, pipeline.g1);
  if (!p1.ok()) return p1.status();
  absl::StatusOr<FiniteDistribution> p2 = Pushforward(*p1, pipeline.g2);
  if (!p2.ok()) return p2.status();
  absl::StatusOr<DistortionMatrix> d1 =
      PullbackDistortion(pipeline.task_distortion, pipeline.h1());
  if (!d1.ok()) return d1.status();
  absl::StatusOr<DistortionMatrix> d2 =
      PullbackDistortion(pipeline.task_distortion, pipeline.h2);
  if (!d2.ok()) return d2.status();

  TheoremReport report;
  report.theorem_id = TheoremId::kThm1;
  report.tolerance = tolerance;
  absl::StatusOr<RDCurve> c1 = SolveRdCurve(*p1, *d1, config, "y1");
  if (!c1.ok()) return Context(c1.status(), "solving R_Y1");
  absl::StatusOr<RDCurve> c2 = SolveRdCurve(*p2, *d2, config, "y2");
  if (!c2.ok()) return Context(c2.status(), "solving R_Y2");
  report.dominating_curve = *std::move(c1);
  report.dominated_curve = *std::move(c2);

  absl::StatusOr<DistortionRange> range = ComputeDistortionRange(*p1, *d1);
  if (!range.ok()) return range.status();
  if (absl::Status s = Compare(report, range->d_min, range->d_max, grid_size);
      !s.ok()) {
    return s;
  }
  return report;
}

absl::StatusOr<TheoremReport> VerifyTheorem2(
    const LayeredPipeline& pipeline, const DistortionMatrix& d_y1,
    size_t grid_size, const SolverConfig& config, double tolerance,
    const std::optional<DistortionMatrix>& d_y2) {
  if (absl::Status s = RequireValid(pipeline); !s.ok()) return s;
  if (grid_size == 0) return absl::InvalidArgumentError("grid_size must be >= 1");
  absl::StatusOr<DistortionMatrix> target = ResolveDy2(pipeline, d_y2);
  if (!target.ok()) return target.status();

  const std::optional<double> delta =
      CheckDistortionMagnitude(d_y1, *target, pipeline.g2);
  if (!delta.has_value() ||
      std::abs(*delta - 1.0) > kMagnitudeRelativeTolerance) {
    std::string pairs;
    for (const auto& [z, w] :
         MagnitudeMismatches(d_y1, *target, pipeline.g2, 1.0)) {
      absl::StrAppend(&pairs, pairs.empty() ? "" : ", ", "(", z, ",", w, ")");
    }
    return absl::FailedPreconditionError(absl::StrCat(
        "g2 does not have distortion magnitude 1 (delta = ",
        delta.has_value() ? absl::StrCat(*delta) : std::string("none"),
        "); failing pairs: ", pairs.empty() ? "shape mismatch" : pairs));
  }

  absl::StatusOr<FiniteDistribution> p1 = Pushforward(pipeline.source, pipeline.g1);
  if (!p1.ok()) return p1.status();

  TheoremReport report;
  report.theorem_id = TheoremId::kThm2;
  report.tolerance = tolerance;
  absl::StatusOr<RDCurve> self = SolveRdCurve(*p1, d_y1, config, "y11");
  if (!self.ok()) return Context(self.status(), "solving R_Y11");
  absl::StatusOr<RDCurve> cross = CrossRdCurve(pipeline, config, *target);
  if (!cross.ok()) return Context(cross.status(), "solving R_Y21");
  report.dominating_curve = *std::move(self);
  report.dominated_curve = *std::move(cross);

  absl::StatusOr<DistortionRange> range = ComputeDistortionRange(*p1, d_y1);
  if (!range.ok()) return range.status();
  if (absl::Status s = Compare(report, range->d_min, range->d_max, grid_size);
      !s.ok()) {
    return s;
  }
  return report;
}

absl::StatusOr<Channel> TwoStepChannel(const Channel& p_star,
                                       const DeterministicMap& g2) {
  if (p_star.cols != g2.domain()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "two-step channel: p* has ", p_star.cols.size,
        " output symbols, g2 domain has ", g2.table.size()));
  }
  if (absl::Status s = g2.Validate(); !s.ok()) return s;
  if (p_star.values.size() != p_star.rows.size * p_star.cols.size) {
    return absl::InvalidArgumentError("two-step channel: malformed p*");
  }
  Channel out{p_star.rows, g2.codomain,
              std::vector<double>(p_star.rows.size * g2.codomain.size, 0.0)};
  for (size_t r = 0; r < p_star.rows.size; ++r) {
    for (size_t c = 0; c < p_star.cols.size; ++c) out(r, g2(c)) += p_star(r, c);
  }
  return out;
}

absl::StatusOr<DpiResult> DpiCheck(const FiniteDistribution& source,
                                   const Channel& p_star,
                                   const DeterministicMap& g2) {
  absl::StatusOr<double> before = MutualInformation(source, p_star);
  if (!before.ok()) return before.status();
  absl::StatusOr<Channel> composed = TwoStepChannel(p_star, g2);
  if (!composed.ok()) return composed.status();
  absl::StatusOr<double> after = MutualInformation(source, *composed);
  if (!after.ok()) return after.status();
  DpiResult result{*before, *after, *after <= *before + kExactSlack};
  return result;
}

absl::StatusOr<ConstructionReport> VerifyTwoStepConstruction(
    const LayeredPipeline& pipeline, const DistortionMatrix& d_y1,
    const TheoremReport& thm2_report, const SolverConfig& config,
    double tolerance, const std::optional<DistortionMatrix>& d_y2) {
  if (thm2_report.theorem_id != TheoremId::kThm2) {
    return absl::InvalidArgumentError("construction check needs a thm2 report");
  }
  if (absl::Status s = RequireValid(pipeline); !s.ok()) return s;
  absl::StatusOr<DistortionMatrix> target = ResolveDy2(pipeline, d_y2);
  if (!target.ok()) return target.status();
  absl::StatusOr<DistortionMatrix> cross = CrossDistortion(pipeline.g2, *target);
  if (!cross.ok()) return cross.status();
  absl::StatusOr<FiniteDistribution> p1 = Pushforward(pipeline.source, pipeline.g1);
  if (!p1.ok()) return p1.status();

  ConstructionReport report;
  report.tolerance = tolerance;
  bool all_ok = true;
  for (const RDPoint& point : thm2_report.dominating_curve.points) {
    if (point.beta <= 0.0) continue;  // synthetic endpoint
    absl::StatusOr<FixedBetaSolution> star =
        SolveFixedBeta(*p1, d_y1, point.beta, config);
    if (!star.ok()) return Context(star.status(), "re-deriving p*");
    absl::StatusOr<Channel> two_step = TwoStepChannel(star->channel, pipeline.g2);
    if (!two_step.ok()) return two_step.status();

    ConstructionPoint c;
    c.beta = point.beta;
    c.distortion = star->point.distortion;
    c.rate = star->point.rate;
    absl::StatusOr<double> d2 = ExpectedDistortion(*p1, *two_step, *cross);
    if (!d2.ok()) return d2.status();
    absl::StatusOr<double> i2 = MutualInformation(*p1, *two_step);
    if (!i2.ok()) return i2.status();
    c.two_step_distortion = *d2;
    c.two_step_rate = *i2;
    c.feasible = c.two_step_distortion <= c.distortion + kExactSlack;
    c.dpi = c.two_step_rate <= c.rate + kExactSlack;

    absl::StatusOr<double> r11 = RateAt(thm2_report.dominating_curve, c.distortion);
    if (!r11.ok()) return r11.status();
    absl::StatusOr<double> r21 = RateAt(thm2_report.dominated_curve, c.distortion);
    if (!r21.ok()) return r21.status();
    report.max_rate_excess = std::max(report.max_rate_excess, c.two_step_rate - *r11);
    report.max_cross_excess = std::max(report.max_cross_excess, *r21 - c.two_step_rate);
    all_ok = all_ok && c.feasible && c.dpi;
    report.points.push_back(c);
  }
  report.pass = all_ok && report.max_rate_excess <= tolerance &&
                report.max_cross_excess <= tolerance;
  return report;
}

}  // namespace icmrd
