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

#include "icmrd/rd_solver.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "icmrd/information.h"

namespace icmrd {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Distortion within this of d_min counts as having reached it.
constexpr double kReachTolerance = 1e-9;

absl::Status CheckProblem(const FiniteDistribution& source,
                          const DistortionMatrix& d) {
  if (absl::Status status = source.Validate(); !status.ok()) return status;
  if (absl::Status status = d.Validate(); !status.ok()) return status;
  if (d.rows != source.alphabet()) {
    return absl::InvalidArgumentError(
        absl::StrCat("distortion has ", d.rows.size, " rows, source has ",
                     source.mass.size(), " symbols"));
  }
  return absl::OkStatus();
}

// Upper bound on how far the chord between two solved points can sit above
// the curve: the curve is convex, so it lies above the tangent lines at both
// points, whose slopes are -beta / ln 2. The bound is the chord height above
// the tangents' intersection. `sharp` has the larger beta.
double InterpolationGapBound(const RDPoint& sharp, const RDPoint& loose) {
  const double width = loose.distortion - sharp.distortion;
  if (!(width > 0.0)) return 0.0;
  const double s1 = -sharp.beta / kLn2;
  const double s2 = -loose.beta / kLn2;
  if (!(s1 < s2)) return 0.0;
  double cross = (loose.rate - sharp.rate + s1 * sharp.distortion -
                  s2 * loose.distortion) / (s1 - s2);
  cross = std::clamp(cross, sharp.distortion, loose.distortion);
  const double chord = sharp.rate + (loose.rate - sharp.rate) *
                                        (cross - sharp.distortion) / width;
  const double tangent = std::max(sharp.rate + s1 * (cross - sharp.distortion),
                                  loose.rate + s2 * (cross - loose.distortion));
  return std::max(0.0, chord - tangent);
}

// Row-major table of count grid points k/steps on the simplex of dimension
// cols, i.e. all compositions of steps into cols parts.
std::vector<double> SimplexGrid(size_t cols, size_t steps) {
  std::vector<double> out;
  std::vector<size_t> parts(cols, 0);
  auto emit = [&]() {
    for (size_t c = 0; c < cols; ++c) {
      out.push_back(static_cast<double>(parts[c]) / static_cast<double>(steps));
    }
  };
  if (cols == 1) {
    parts[0] = steps;
    emit();
    return out;
  }
  // Enumerate the first cols-1 parts; the last takes the remainder.
  std::vector<size_t> head(cols - 1, 0);
  while (true) {
    size_t used = 0;
    for (size_t v : head) used += v;
    if (used <= steps) {
      for (size_t c = 0; c + 1 < cols; ++c) parts[c] = head[c];
      parts[cols - 1] = steps - used;
      emit();
    }
    size_t i = 0;
    while (i < head.size()) {
      if (++head[i] <= steps) break;
      head[i] = 0;
      ++i;
    }
    if (i == head.size()) break;
  }
  return out;
}

}  // namespace

std::vector<double> BetaGrid::Values() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double log_min = std::log(min);
  const double step = (std::log(max) - log_min) / static_cast<double>(count - 1);
  for (size_t i = 0; i < count; ++i) {
    out[i] = std::exp(log_min + step * static_cast<double>(i));
  }
  out.front() = min;
  out.back() = max;
  return out;
}

absl::Status SolverConfig::Validate() const {
  if (beta_grid.count < 1) {
    return absl::InvalidArgumentError("beta grid needs at least one value");
  }
  if (!(beta_grid.min > 0.0) || !std::isfinite(beta_grid.max) ||
      (beta_grid.count > 1 && !(beta_grid.min < beta_grid.max))) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta grid must satisfy 0 < min < max, got [",
                     beta_grid.min, ", ", beta_grid.max, "]"));
  }
  if (max_iterations < 1) {
    return absl::InvalidArgumentError("max_iterations must be >= 1");
  }
  if (!(convergence_tol > 0.0) || !(gap_tol > 0.0) ||
      !(support_epsilon > 0.0) || !(interpolation_tol > 0.0)) {
    return absl::InvalidArgumentError("solver tolerances must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<DistortionRange> ComputeDistortionRange(
    const FiniteDistribution& source, const DistortionMatrix& d) {
  if (d.rows != source.alphabet() ||
      d.values.size() != d.rows.size * d.cols.size) {
    return absl::InvalidArgumentError(
        absl::StrCat("distortion has ", d.rows.size, " rows, source has ",
                     source.mass.size(), " symbols"));
  }
  DistortionRange range;
  for (size_t x = 0; x < d.rows.size; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t y = 0; y < d.cols.size; ++y) best = std::min(best, d(x, y));
    range.d_min += source.mass[x] * best;
  }
  range.d_max = std::numeric_limits<double>::infinity();
  for (size_t y = 0; y < d.cols.size; ++y) {
    double total = 0.0;
    for (size_t x = 0; x < d.rows.size; ++x) total += source.mass[x] * d(x, y);
    range.d_max = std::min(range.d_max, total);
  }
  return range;
}

absl::StatusOr<FixedBetaSolution> SolveFixedBeta(
    const FiniteDistribution& source, const DistortionMatrix& d, double beta,
    const SolverConfig& config) {
  if (absl::Status status = CheckProblem(source, d); !status.ok()) {
    return status;
  }
  if (absl::Status status = config.Validate(); !status.ok()) return status;
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must be positive and finite, got ", beta));
  }

  const size_t n = d.rows.size;
  const size_t m = d.cols.size;
  const std::vector<double>& p = source.mass;

  // kernel(x, y) = exp(-beta (d(x, y) - min_y' d(x, y'))); the row shift
  // cancels in the normalization and keeps the largest entry of a row at 1.
  std::vector<double> kernel(n * m);
  std::vector<double> shifted(n * m);
  for (size_t x = 0; x < n; ++x) {
    double row_min = std::numeric_limits<double>::infinity();
    for (size_t y = 0; y < m; ++y) row_min = std::min(row_min, d(x, y));
    for (size_t y = 0; y < m; ++y) {
      shifted[x * m + y] = d(x, y) - row_min;
      kernel[x * m + y] = std::exp(-beta * shifted[x * m + y]);
    }
  }

  std::vector<double> q(m, 1.0 / static_cast<double>(m));
  std::vector<double> q_next(m);
  std::vector<double> gain(m);  // c(y) = Σ_x p(x) kernel(x, y) / Z(x), Z(x) = Σ_y q(y) kernel(x, y)

  FixedBetaSolution result;
  result.channel = Channel::UniformRows(Alphabet{n}, Alphabet{m});
  double previous_rate = std::numeric_limits<double>::infinity();

  for (size_t iter = 1; iter <= config.max_iterations; ++iter) {
    std::fill(gain.begin(), gain.end(), 0.0);
    double log_norm_sum = 0.0;
    double shifted_distortion = 0.0;
    for (size_t x = 0; x < n; ++x) {
      if (p[x] == 0.0) continue;
      double z = 0.0;
      for (size_t y = 0; y < m; ++y) z += q[y] * kernel[x * m + y];
      if (!(z > 0.0) || !std::isfinite(z)) {
        return absl::InternalError(absl::StrCat(
            "non-finite normalizer for source symbol ", x, " at beta ", beta,
            " (iteration ", iter, ")"));
      }
      log_norm_sum += p[x] * std::log(z);
      for (size_t y = 0; y < m; ++y) {
        const double w = q[y] * kernel[x * m + y] / z;
        result.channel(x, y) = w;
        shifted_distortion += p[x] * w * shifted[x * m + y];
        gain[y] += p[x] * kernel[x * m + y] / z;
      }
    }

    double max_log_gain = -std::numeric_limits<double>::infinity();
    double mean_log_gain = 0.0;
    for (size_t y = 0; y < m; ++y) {
      q_next[y] = q[y] * gain[y];
      if (gain[y] > 0.0) max_log_gain = std::max(max_log_gain, std::log(gain[y]));
      if (q_next[y] > 0.0) mean_log_gain += q_next[y] * std::log(gain[y]);
    }
    // I = -beta E[shifted d] - Σ p ln Z - Σ q' ln c, in nats.
    const double rate =
        (-beta * shifted_distortion - log_norm_sum - mean_log_gain) / kLn2;
    const double gap = (max_log_gain - mean_log_gain) / kLn2;
    if (!std::isfinite(rate) || !std::isfinite(gap)) {
      return absl::InternalError(absl::StrCat(
          "non-finite rate at beta ", beta, " (iteration ", iter, ")"));
    }
    result.iterations = iter;
    result.duality_gap = gap;

    double total = 0.0;
    for (size_t y = 0; y < m; ++y) {
      if (q_next[y] < config.support_epsilon) q_next[y] = 0.0;
      total += q_next[y];
    }
    for (size_t y = 0; y < m; ++y) q_next[y] /= total;

    if (std::abs(rate - previous_rate) < config.convergence_tol &&
        gap < config.gap_tol) {
      result.converged = true;
      break;
    }
    previous_rate = rate;
    q.swap(q_next);
  }

  absl::StatusOr<double> rate = MutualInformation(source, result.channel);
  if (!rate.ok()) return rate.status();
  absl::StatusOr<double> distortion =
      ExpectedDistortion(source, result.channel, d);
  if (!distortion.ok()) return distortion.status();
  if (!std::isfinite(*rate) || !std::isfinite(*distortion)) {
    return absl::InternalError(
        absl::StrCat("solver produced a non-finite point at beta ", beta));
  }
  result.point = RDPoint{*rate, *distortion, beta};
  return result;
}

absl::StatusOr<RDCurve> SolveRdCurve(const FiniteDistribution& source,
                                     const DistortionMatrix& d,
                                     const SolverConfig& config,
                                     std::string source_label) {
  if (absl::Status status = CheckProblem(source, d); !status.ok()) {
    return status;
  }
  if (absl::Status status = config.Validate(); !status.ok()) return status;
  absl::StatusOr<DistortionRange> range = ComputeDistortionRange(source, d);
  if (!range.ok()) return range.status();

  RDCurve curve;
  curve.source_label = std::move(source_label);
  if (range->d_max <= range->d_min) {
    curve.points.push_back(RDPoint{0.0, range->d_max, 0.0});
    return curve;
  }

  auto solve = [&](double beta) -> absl::StatusOr<RDPoint> {
    absl::StatusOr<FixedBetaSolution> solution =
        SolveFixedBeta(source, d, beta, config);
    if (!solution.ok()) {
      return absl::Status(solution.status().code(),
                          absl::StrCat("beta ", beta, ": ",
                                       solution.status().message()));
    }
    RDPoint point = solution->point;
    point.rate = std::max(point.rate, 0.0);
    return point;
  };

  // Sweep in decreasing beta, i.e. roughly increasing distortion.
  std::vector<double> betas = config.beta_grid.Values();
  std::reverse(betas.begin(), betas.end());
  std::vector<RDPoint> sweep;
  for (double beta : betas) {
    absl::StatusOr<RDPoint> point = solve(beta);
    if (!point.ok()) return point.status();
    sweep.push_back(*point);
  }

  std::vector<RDPoint> points;
  // Depth-first bisection keeps the output ordered by decreasing beta.
  std::function<absl::Status(const RDPoint&, const RDPoint&, size_t)> refine =
      [&](const RDPoint& sharp, const RDPoint& loose,
          size_t depth) -> absl::Status {
    if (depth >= config.max_refine_depth ||
        InterpolationGapBound(sharp, loose) <= config.interpolation_tol) {
      return absl::OkStatus();
    }
    absl::StatusOr<RDPoint> mid = solve(std::sqrt(sharp.beta * loose.beta));
    if (!mid.ok()) return mid.status();
    if (absl::Status s = refine(sharp, *mid, depth + 1); !s.ok()) return s;
    points.push_back(*mid);
    return refine(*mid, loose, depth + 1);
  };
  for (size_t i = 0; i < sweep.size(); ++i) {
    if (i > 0) {
      if (absl::Status s = refine(sweep[i - 1], sweep[i], 0); !s.ok()) return s;
    }
    points.push_back(sweep[i]);
  }

  // Past d_max the zero-rate endpoint dominates.
  std::erase_if(points, [&](const RDPoint& p) {
    return !(p.distortion < range->d_max);
  });
  points.push_back(RDPoint{0.0, range->d_max, 0.0});

  // Sort by distortion, then rate, then beta; the zero-rate endpoint has
  // beta 0 and sorts before sweep points that tie with it.
  std::sort(points.begin(), points.end(),
            [](const RDPoint& a, const RDPoint& b) {
              if (a.distortion != b.distortion) return a.distortion < b.distortion;
              if (a.rate != b.rate) return a.rate < b.rate;
              return a.beta < b.beta;
            });

  const RDPoint& sharpest = points.front();
  if (sharpest.distortion > range->d_min &&
      sharpest.distortion - range->d_min <= kReachTolerance) {
    points.insert(points.begin(),
                  RDPoint{sharpest.rate, range->d_min, sharpest.beta});
  }

  std::vector<RDPoint> unique;
  for (const RDPoint& point : points) {
    if (!unique.empty() && unique.back().distortion == point.distortion) {
      continue;
    }
    unique.push_back(point);
  }

  // Lower convex hull, left to right.
  std::vector<RDPoint> hull;
  for (const RDPoint& point : unique) {
    while (hull.size() >= 2) {
      const RDPoint& o = hull[hull.size() - 2];
      const RDPoint& a = hull.back();
      const double cross =
          (a.distortion - o.distortion) * (point.rate - o.rate) -
          (a.rate - o.rate) * (point.distortion - o.distortion);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(point);
  }
  curve.points = std::move(hull);
  return curve;
}

absl::StatusOr<double> RateAt(const RDCurve& curve, double distortion) {
  if (curve.points.empty()) {
    return absl::InvalidArgumentError("rate_at: curve is empty");
  }
  const std::vector<RDPoint>& pts = curve.points;
  if (distortion >= pts.back().distortion) return 0.0;
  if (distortion <= pts.front().distortion) return pts.front().rate;
  auto upper = std::upper_bound(
      pts.begin(), pts.end(), distortion,
      [](double value, const RDPoint& p) { return value < p.distortion; });
  const RDPoint& hi = *upper;
  const RDPoint& lo = *(upper - 1);
  if (distortion == lo.distortion) return lo.rate;
  const double t = (distortion - lo.distortion) / (hi.distortion - lo.distortion);
  return lo.rate + t * (hi.rate - lo.rate);
}

absl::StatusOr<DistortionMatrix> CrossDistortion(const DeterministicMap& g2,
                                                 const DistortionMatrix& d_y2) {
  if (absl::Status status = g2.Validate(); !status.ok()) return status;
  if (!d_y2.IsSquare() || d_y2.rows != g2.codomain) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cross distortion: d_y2 is ", d_y2.rows.size, "x", d_y2.cols.size,
        ", g2 codomain has ", g2.codomain.size, " symbols"));
  }
  if (absl::Status status = d_y2.Validate(); !status.ok()) return status;
  DistortionMatrix out =
      DistortionMatrix::Zeros(g2.domain(), d_y2.cols);
  for (size_t y1 = 0; y1 < g2.table.size(); ++y1) {
    for (size_t y2 = 0; y2 < d_y2.cols.size; ++y2) {
      out(y1, y2) = d_y2(g2(y1), y2);
    }
  }
  return out;
}

absl::StatusOr<RDCurve> CrossRdCurve(
    const LayeredPipeline& pipeline, const SolverConfig& config,
    const std::optional<DistortionMatrix>& d_y2) {
  if (std::vector<Violation> v = ValidatePipeline(pipeline); !v.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid pipeline:\n", FormatViolations(v)));
  }
  DistortionMatrix target;
  if (d_y2.has_value()) {
    target = *d_y2;
  } else {
    absl::StatusOr<DistortionMatrix> pulled =
        PullbackDistortion(pipeline.task_distortion, pipeline.h2);
    if (!pulled.ok()) return pulled.status();
    target = *std::move(pulled);
  }
  absl::StatusOr<DistortionMatrix> cross = CrossDistortion(pipeline.g2, target);
  if (!cross.ok()) return cross.status();
  absl::StatusOr<FiniteDistribution> y1 =
      Pushforward(pipeline.source, pipeline.g1);
  if (!y1.ok()) return y1.status();
  return SolveRdCurve(*y1, *cross, config, "cross_y21");
}

absl::StatusOr<double> BruteForceRd(const FiniteDistribution& source,
                                    const DistortionMatrix& d,
                                    double distortion, size_t grid_steps) {
  if (absl::Status status = CheckProblem(source, d); !status.ok()) {
    return status;
  }
  if (d.rows.size > 3 || d.cols.size > 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "brute force limited to 3x3 problems, got ", d.rows.size, "x",
        d.cols.size));
  }
  if (grid_steps < 100) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid_steps must be >= 100, got ", grid_steps));
  }
  const size_t n = d.rows.size;
  const size_t m = d.cols.size;
  const std::vector<double> grid = SimplexGrid(m, grid_steps);
  const size_t per_row = grid.size() / m;
  double combos = 1.0;
  for (size_t x = 0; x < n; ++x) combos *= static_cast<double>(per_row);
  constexpr double kMaxCombos = 2e8;
  if (combos > kMaxCombos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "brute force grid has ", combos, " channels, limit is ", kMaxCombos));
  }

  // Per-row expected distortion for every grid row.
  std::vector<double> row_cost(n * per_row);
  for (size_t x = 0; x < n; ++x) {
    for (size_t k = 0; k < per_row; ++k) {
      double c = 0.0;
      for (size_t y = 0; y < m; ++y) c += grid[k * m + y] * d(x, y);
      row_cost[x * per_row + k] = c;
    }
  }

  constexpr double kFeasibilitySlack = 1e-12;
  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> index(n, 0);
  std::vector<double> marginal(m);
  while (true) {
    double cost = 0.0;
    for (size_t x = 0; x < n; ++x) {
      cost += source.mass[x] * row_cost[x * per_row + index[x]];
    }
    if (cost <= distortion + kFeasibilitySlack) {
      std::fill(marginal.begin(), marginal.end(), 0.0);
      for (size_t x = 0; x < n; ++x) {
        for (size_t y = 0; y < m; ++y) {
          marginal[y] += source.mass[x] * grid[index[x] * m + y];
        }
      }
      double info = 0.0;
      for (size_t x = 0; x < n; ++x) {
        if (source.mass[x] == 0.0) continue;
        for (size_t y = 0; y < m; ++y) {
          const double w = grid[index[x] * m + y];
          if (w > 0.0) info += source.mass[x] * w * std::log2(w / marginal[y]);
        }
      }
      best = std::min(best, std::max(info, 0.0));
    }
    size_t i = 0;
    while (i < n) {
      if (++index[i] < per_row) break;
      index[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  if (!std::isfinite(best)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no grid channel reaches distortion ", distortion));
  }
  return best;
}

absl::Status CheckCurveShape(const RDCurve& curve, double rate_bound,
                             double slope_tol) {
  const std::vector<RDPoint>& pts = curve.points;
  if (pts.empty()) return absl::InvalidArgumentError("curve is empty");
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].rate < -1e-12 || pts[i].rate > rate_bound + 1e-9) {
      return absl::OutOfRangeError(absl::StrCat(
          "point ", i, " has rate ", pts[i].rate, " outside [0, ",
          rate_bound, "]"));
    }
    if (pts[i].distortion < 0.0) {
      return absl::OutOfRangeError(
          absl::StrCat("point ", i, " has negative distortion"));
    }
    if (i == 0) continue;
    if (!(pts[i].distortion > pts[i - 1].distortion)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "distortion not strictly increasing at point ", i));
    }
    if (pts[i].rate > pts[i - 1].rate + 1e-9) {
      return absl::FailedPreconditionError(
          absl::StrCat("rate increases at point ", i));
    }
  }
  for (size_t i = 2; i < pts.size(); ++i) {
    const double s1 = (pts[i - 1].rate - pts[i - 2].rate) /
                      (pts[i - 1].distortion - pts[i - 2].distortion);
    const double s2 = (pts[i].rate - pts[i - 1].rate) /
                      (pts[i].distortion - pts[i - 1].distortion);
    const double scale = std::max({1.0, std::abs(s1), std::abs(s2)});
    if (s2 < s1 - slope_tol * scale) {
      return absl::FailedPreconditionError(absl::StrCat(
          "chord slopes decrease at point ", i - 1, ": ", s1, " then ", s2));
    }
  }
  return absl::OkStatus();
}

}  // namespace icmrd
