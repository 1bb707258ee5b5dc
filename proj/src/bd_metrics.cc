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

#include "icmrd/bd_metrics.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"

namespace icmrd {
namespace {

absl::StatusOr<Cubic> FitCubic(std::span<const double> x,
                               std::span<const double> y) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double power = 1.0;
    for (Eigen::Index j = 0; j < 4; ++j) {
      design(i, j) = power;
      power *= x[i];
    }
    target(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < 4) {
    return absl::FailedPreconditionError(absl::StrCat(
        "cubic fit is singular (rank ", qr.rank(), " from ", n, " points)"));
  }
  const Eigen::VectorXd solution = qr.solve(target);
  Cubic cubic;
  for (int j = 0; j < 4; ++j) cubic.coeffs[j] = solution(j);
  if (!std::all_of(cubic.coeffs.begin(), cubic.coeffs.end(),
                   [](double c) { return std::isfinite(c); })) {
    return absl::FailedPreconditionError("cubic fit produced non-finite terms");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    cubic.residuals.push_back(cubic.Eval(x[i]) - y[i]);
  }
  return cubic;
}

absl::Status CheckPair(const RateQualityCurve& reference,
                       const RateQualityCurve& test) {
  if (absl::Status s = reference.Validate(); !s.ok()) return s;
  if (absl::Status s = test.Validate(); !s.ok()) return s;
  if (reference.quality_metric != test.quality_metric) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quality metrics differ: '", reference.quality_metric, "' vs '",
        test.quality_metric, "'"));
  }
  return absl::OkStatus();
}

BDResult Labels(const RateQualityCurve& reference, const RateQualityCurve& test) {
  BDResult result;
  result.reference_label = reference.curve_label;
  result.test_label = test.curve_label;
  result.quality_metric = reference.quality_metric;
  return result;
}

}  // namespace

absl::StatusOr<RateQualityCurve> RateQualityCurve::Create(
    std::vector<RateQualityPoint> points, std::string quality_metric,
    std::string curve_label) {
  RateQualityCurve curve{std::move(points), std::move(quality_metric),
                         std::move(curve_label)};
  if (absl::Status s = curve.Validate(); !s.ok()) return s;
  return curve;
}

absl::Status RateQualityCurve::Validate() const {
  if (points.size() < 4) {
    return absl::InvalidArgumentError(absl::StrCat(
        "curve '", curve_label, "' has ", points.size(),
        " points, a cubic fit needs at least 4"));
  }
  for (size_t i = 0; i < points.size(); ++i) {
    const RateQualityPoint& p = points[i];
    if (!std::isfinite(p.rate) || !std::isfinite(p.quality) || !(p.rate > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "curve '", curve_label, "' point ", i, " has rate ", p.rate,
          " and quality ", p.quality));
    }
    if (i == 0) continue;
    if (!(p.rate > points[i - 1].rate)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "curve '", curve_label, "' rates not strictly increasing at point ",
          i));
    }
    if (!(p.quality > points[i - 1].quality)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "curve '", curve_label,
          "' quality not strictly increasing at point ", i));
    }
  }
  return absl::OkStatus();
}

double Cubic::Eval(double x) const {
  return coeffs[0] + x * (coeffs[1] + x * (coeffs[2] + x * coeffs[3]));
}

double Cubic::Integral(double lo, double hi) const {
  auto antiderivative = [this](double x) {
    return x * (coeffs[0] +
                x * (coeffs[1] / 2.0 + x * (coeffs[2] / 3.0 + x * coeffs[3] / 4.0)));
  };
  return antiderivative(hi) - antiderivative(lo);
}

double Cubic::MaxAbsResidual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, std::abs(r));
  return worst;
}

absl::StatusOr<LogPolyFit> FitLogPoly(const RateQualityCurve& curve) {
  if (absl::Status s = curve.Validate(); !s.ok()) return s;
  std::vector<double> log_rate;
  std::vector<double> quality;
  for (const RateQualityPoint& p : curve.points) {
    log_rate.push_back(std::log10(p.rate));
    quality.push_back(p.quality);
  }
  LogPolyFit fit;
  absl::StatusOr<Cubic> forward = FitCubic(log_rate, quality);
  if (!forward.ok()) return forward.status();
  absl::StatusOr<Cubic> inverse = FitCubic(quality, log_rate);
  if (!inverse.ok()) return inverse.status();
  fit.quality_of_log_rate = *std::move(forward);
  fit.log_rate_of_quality = *std::move(inverse);
  return fit;
}

absl::StatusOr<BDResult> BdRate(const RateQualityCurve& reference,
                                const RateQualityCurve& test) {
  if (absl::Status s = CheckPair(reference, test); !s.ok()) return s;
  BDResult result = Labels(reference, test);
  const double lo = std::max(reference.points.front().quality,
                             test.points.front().quality);
  const double hi = std::min(reference.points.back().quality,
                             test.points.back().quality);
  if (!(lo < hi)) {
    result.reason = "no quality overlap";
    return result;
  }
  absl::StatusOr<LogPolyFit> ref_fit = FitLogPoly(reference);
  absl::StatusOr<LogPolyFit> test_fit = FitLogPoly(test);
  if (!ref_fit.ok() || !test_fit.ok()) {
    result.reason = absl::StrCat(
        "fit failure: ",
        (!ref_fit.ok() ? ref_fit.status() : test_fit.status()).message());
    return result;
  }
  const double mean_log_diff =
      (test_fit->log_rate_of_quality.Integral(lo, hi) -
       ref_fit->log_rate_of_quality.Integral(lo, hi)) /
      (hi - lo);
  result.bd_rate_percent = (std::pow(10.0, mean_log_diff) - 1.0) * 100.0;
  result.overlap = std::make_pair(lo, hi);
  return result;
}

absl::StatusOr<BDResult> BdQuality(const RateQualityCurve& reference,
                                   const RateQualityCurve& test) {
  if (absl::Status s = CheckPair(reference, test); !s.ok()) return s;
  BDResult result = Labels(reference, test);
  const double lo = std::max(std::log10(reference.points.front().rate),
                             std::log10(test.points.front().rate));
  const double hi = std::min(std::log10(reference.points.back().rate),
                             std::log10(test.points.back().rate));
  if (!(lo < hi)) {
    result.reason = "no rate overlap";
    return result;
  }
  absl::StatusOr<LogPolyFit> ref_fit = FitLogPoly(reference);
  absl::StatusOr<LogPolyFit> test_fit = FitLogPoly(test);
  if (!ref_fit.ok() || !test_fit.ok()) {
    result.reason = absl::StrCat(
        "fit failure: ",
        (!ref_fit.ok() ? ref_fit.status() : test_fit.status()).message());
    return result;
  }
  result.bd_quality = (test_fit->quality_of_log_rate.Integral(lo, hi) -
                       ref_fit->quality_of_log_rate.Integral(lo, hi)) /
                      (hi - lo);
  result.overlap = std::make_pair(lo, hi);
  return result;
}

absl::StatusOr<Selection> LagrangianSelect(std::span<const OperatingPoint> points,
                                           double lambda, double w) {
  if (points.empty()) {
    return absl::InvalidArgumentError("no operating points to select from");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda) || !(w > 0.0) ||
      !std::isfinite(w)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "lambda and w must be positive, got ", lambda, " and ", w));
  }
  std::optional<Selection> best;
  for (size_t i = 0; i < points.size(); ++i) {
    const OperatingPoint& p = points[i];
    if (!(p.rate >= 0.0) || !(p.d_enh >= 0.0) || !(p.d_base >= 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "operating point ", i, " ('", p.label,
          "') has a negative or non-finite value"));
    }
    const double loss = p.rate + lambda * (p.d_enh + w * p.d_base);
    if (!best.has_value() || loss < best->loss ||
        (loss == best->loss && p.rate < best->point.rate)) {
      best = Selection{i, p, loss};
    }
  }
  return *best;
}

}  // namespace icmrd
