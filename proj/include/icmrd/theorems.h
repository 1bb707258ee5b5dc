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

#ifndef ICMRD_THEOREMS_H_
#define ICMRD_THEOREMS_H_

// Numerical checks of the two layer-depth rate bounds.
//
// Deeper-layer dominance: with distortion measured at the task output,
// R_Y2(D) <= R_Y1(D) for every D, with equality when Y1 can be recovered
// from Y2 (g2 a bijection).
//
// Two-step matching: if g2 has distortion magnitude 1 between d_Y1 and d_Y2,
// then reproducing Y2 from Y1 needs no more rate than reproducing Y1 itself,
// R_Y21(D) <= R_Y11(D). The achievability argument takes an optimal channel
// p*(ŷ1|y1) for Y1, pushes its output through g2 (Y1 -> Ŷ1 -> g2(Ŷ1) is a
// Markov chain), and observes that the result is feasible for the cross
// problem and, by data processing, has no more mutual information.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "icmrd/channel.h"
#include "icmrd/distortion.h"
#include "icmrd/finite.h"
#include "icmrd/pipeline.h"
#include "icmrd/rd_solver.h"

namespace icmrd {

inline constexpr double kDefaultTheoremTolerance = 1e-4;

enum class TheoremId { kThm1, kThm2 };

std::string TheoremName(TheoremId id);

struct TheoremReport {
  TheoremId theorem_id = TheoremId::kThm1;
  std::vector<double> d_grid;
  // Per grid point: (dominating rate, dominated rate), i.e. the rate that
  // is claimed to be larger first.
  std::vector<std::pair<double, double>> rate_pairs;
  double max_violation = 0.0;  // bits
  double tolerance = kDefaultTheoremTolerance;
  bool pass = false;

  // The two curves behind the comparison (dominating first).
  RDCurve dominating_curve;
  RDCurve dominated_curve;
};

// Uniform grid of `size` points on [lo, hi]; a single point is lo.
std::vector<double> UniformGrid(double lo, double hi, size_t size);

// Compares R_Y2 and R_Y1 under the task distortion pulled back through h2
// and h1 on a grid spanning [d_min, d_max] of the Y1 problem.
absl::StatusOr<TheoremReport> VerifyTheorem1(const LayeredPipeline& pipeline,
                                             size_t grid_size,
                                             const SolverConfig& config,
                                             double tolerance);

// Compares the cross curve R_Y21 against the self curve R_Y11 on a grid over
// [d_min, d_max] of the Y1 problem. d_y2 defaults to the task distortion
// pulled back through h2. Fails with FailedPrecondition, listing offending
// pairs, unless g2 has distortion magnitude 1 between d_y1 and d_y2.
absl::StatusOr<TheoremReport> VerifyTheorem2(
    const LayeredPipeline& pipeline, const DistortionMatrix& d_y1,
    size_t grid_size, const SolverConfig& config, double tolerance,
    const std::optional<DistortionMatrix>& d_y2 = std::nullopt);

// p21(ŷ2|y1) = Σ_{ŷ1 : g2(ŷ1) = ŷ2} p*(ŷ1|y1).
absl::StatusOr<Channel> TwoStepChannel(const Channel& p_star,
                                       const DeterministicMap& g2);

struct DpiResult {
  double i_before = 0.0;  // I(Y1; Ŷ1)
  double i_after = 0.0;   // I(Y1; g2(Ŷ1))
  bool holds = false;     // i_after <= i_before + 1e-9
};

absl::StatusOr<DpiResult> DpiCheck(const FiniteDistribution& source,
                                   const Channel& p_star,
                                   const DeterministicMap& g2);

// One step of the achievability construction, at one point of the Y1 curve.
struct ConstructionPoint {
  double beta = 0.0;
  double distortion = 0.0;         // E[d_y1(Y1, Ŷ1)] under p*
  double rate = 0.0;               // I(Y1; Ŷ1) under p*
  double two_step_distortion = 0.0;  // E[d_y2(g2(Y1), g2(Ŷ1))]
  double two_step_rate = 0.0;        // I(Y1; g2(Ŷ1))
  bool feasible = false;  // two_step_distortion <= distortion + 1e-9
  bool dpi = false;       // two_step_rate <= rate + 1e-9
};

struct ConstructionReport {
  std::vector<ConstructionPoint> points;
  // Largest excess of the two-step rate over R_Y11 at the point's distortion.
  double max_rate_excess = 0.0;
  // Largest excess of R_Y21 over the two-step rate at the same distortion.
  double max_cross_excess = 0.0;
  double tolerance = kDefaultTheoremTolerance;
  bool pass = false;
};

// Re-derives p* at every swept point of report.dominating_curve (the R_Y11
// curve of a VerifyTheorem2 report), builds the two-step channel and checks
// feasibility, the data processing step, and that the constructed rate
// bounds R_Y21 from above and R_Y11 from below within tolerance.
absl::StatusOr<ConstructionReport> VerifyTwoStepConstruction(
    const LayeredPipeline& pipeline, const DistortionMatrix& d_y1,
    const TheoremReport& thm2_report, const SolverConfig& config,
    double tolerance,
    const std::optional<DistortionMatrix>& d_y2 = std::nullopt);

}  // namespace icmrd

#endif  // ICMRD_THEOREMS_H_
