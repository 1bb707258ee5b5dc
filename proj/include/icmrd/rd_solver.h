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

#ifndef ICMRD_RD_SOLVER_H_
#define ICMRD_RD_SOLVER_H_

// Rate-distortion functions over finite alphabets.
//
// R(D) = min I(X; X̂) over channels p(x̂|x) with E[d(X, X̂)] <= D is traced
// parametrically: for each trade-off multiplier beta the Blahut-Arimoto
// iteration alternates
//
//   q(x̂)   = Σ_x p(x) p(x̂|x)
//   p(x̂|x) ∝ q(x̂) exp(-beta d(x, x̂))
//
// and converges to the point of the curve where the slope is -beta / ln 2
// (bits per distortion unit). Any channel the iteration visits is a valid
// (rate, distortion) pair, so every reported point upper-bounds R(D).
//
// The cross rate-distortion function of Y2 from Y1 is the same problem with
// source Y1, reproduction alphabet Y2 and rectangular distortion
// d'(y1, ŷ2) = d_Y2(g2(y1), ŷ2).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "icmrd/channel.h"
#include "icmrd/distortion.h"
#include "icmrd/finite.h"
#include "icmrd/pipeline.h"

namespace icmrd {

struct BetaGrid {
  size_t count = 48;
  double min = 1e-2;
  double max = 1e3;

  // Geometric sweep from min to max, inclusive, in increasing order.
  std::vector<double> Values() const;

  friend bool operator==(const BetaGrid&, const BetaGrid&) = default;
};

struct SolverConfig {
  BetaGrid beta_grid;
  size_t max_iterations = 100000;
  // Bits. Iteration stops once the rate moves by less than this between
  // successive sweeps and the duality gap is below gap_tol.
  double convergence_tol = 1e-12;
  // Bits. Upper bound minus lower bound on R at the current distortion.
  double gap_tol = 1e-9;
  // Reproduction symbols whose output mass falls below this are dropped.
  double support_epsilon = 1e-15;
  // Bits. Between two converged sweep points the curve lies above both
  // tangent lines (slope -beta / ln 2) and below the chord; extra betas are
  // bisected in until that gap is below this bound or the depth runs out.
  double interpolation_tol = 1e-5;
  size_t max_refine_depth = 16;

  absl::Status Validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct RDPoint {
  double rate = 0.0;        // bits per source symbol
  double distortion = 0.0;  // task-metric units
  double beta = 0.0;        // 0 marks a point not produced by an iteration

  friend bool operator==(const RDPoint&, const RDPoint&) = default;
};

struct RDCurve {
  std::vector<RDPoint> points;  // increasing distortion
  std::string source_label;

  friend bool operator==(const RDCurve&, const RDCurve&) = default;
};

struct DistortionRange {
  double d_min = 0.0;  // Σ_x p(x) min_x̂ d(x, x̂)
  double d_max = 0.0;  // min_x̂ Σ_x p(x) d(x, x̂), where R reaches 0
};

absl::StatusOr<DistortionRange> ComputeDistortionRange(
    const FiniteDistribution& source, const DistortionMatrix& d);

struct FixedBetaSolution {
  RDPoint point;
  Channel channel;
  size_t iterations = 0;
  bool converged = false;
  double duality_gap = 0.0;  // bits
};

// One Blahut-Arimoto run at a fixed beta, starting from uniform rows. Rows
// of zero-mass source symbols do not take part and come back uniform.
absl::StatusOr<FixedBetaSolution> SolveFixedBeta(
    const FiniteDistribution& source, const DistortionMatrix& d, double beta,
    const SolverConfig& config);

// Sweeps the beta grid, refines it where interpolation would be loose, and
// assembles the curve: the sweep points plus the
// zero-rate endpoint at d_max, reduced to their lower convex hull (which
// drops dominated points and keeps the curve convex and non-increasing).
// When the sharpest point reaches d_min within 1e-9 its rate is pinned at
// d_min. A problem with d_max == d_min is the single point (d_max, 0).
absl::StatusOr<RDCurve> SolveRdCurve(const FiniteDistribution& source,
                                     const DistortionMatrix& d,
                                     const SolverConfig& config,
                                     std::string source_label = "");

// Linear interpolation along the curve. Distortions at or beyond the last
// point give 0; distortions below the first point are clamped to its rate
// (R is infeasible there, the clamp is a lower bound).
absl::StatusOr<double> RateAt(const RDCurve& curve, double distortion);

// Rectangular distortion d'(y1, ŷ2) = d_y2(g2(y1), ŷ2).
absl::StatusOr<DistortionMatrix> CrossDistortion(const DeterministicMap& g2,
                                                 const DistortionMatrix& d_y2);

// R_{Y2 from Y1}(D). d_y2 defaults to the task distortion pulled back
// through h2.
absl::StatusOr<RDCurve> CrossRdCurve(
    const LayeredPipeline& pipeline, const SolverConfig& config,
    const std::optional<DistortionMatrix>& d_y2 = std::nullopt);

// Exhaustive search over channels whose rows lie on the simplex grid with
// resolution 1/grid_steps. Returns the smallest mutual information among
// grid channels with expected distortion <= D. An upper bound on R(D) that
// tightens as grid_steps grows; independent of the iterative solver.
absl::StatusOr<double> BruteForceRd(const FiniteDistribution& source,
                                    const DistortionMatrix& d,
                                    double distortion, size_t grid_steps);

// Checks that the curve is sorted with strictly increasing distortion,
// non-increasing rate (within 1e-9), convex (consecutive chord slopes
// non-decreasing within slope_tol) and inside [0, rate_bound].
absl::Status CheckCurveShape(const RDCurve& curve, double rate_bound,
                             double slope_tol = 1e-6);

}  // namespace icmrd

#endif  // ICMRD_RD_SOLVER_H_
