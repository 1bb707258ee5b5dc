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

#ifndef ICMRD_BD_METRICS_H_
#define ICMRD_BD_METRICS_H_

// Bjontegaard delta metrics between two rate-quality curves, and Lagrangian
// selection among operating points.
//
// The classic method: fit a cubic in log10(rate) to each curve, integrate
// the difference of the fits over the range both curves cover, and average.
// BD-rate fits log10(rate) as a cubic in quality and reports the mean log
// difference as a percentage, (10^avg - 1) * 100. BD-quality (BD-PSNR when
// the metric is PSNR) fits quality as a cubic in log10(rate) and reports
// the mean quality difference. No extrapolation: without overlap there is
// no result.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace icmrd {

inline constexpr char kBjontegaardVariant[] = "cubic-log10";

struct RateQualityPoint {
  double rate = 0.0;     // bits per pixel
  double quality = 0.0;  // metric units, e.g. dB or mAP percent

  friend bool operator==(const RateQualityPoint&,
                         const RateQualityPoint&) = default;
};

struct RateQualityCurve {
  std::vector<RateQualityPoint> points;
  std::string quality_metric;  // e.g. "psnr_db", "map_percent"
  std::string curve_label;

  // At least 4 points, rates positive and strictly increasing, quality
  // strictly increasing. Unsorted input is rejected, not sorted.
  static absl::StatusOr<RateQualityCurve> Create(
      std::vector<RateQualityPoint> points, std::string quality_metric,
      std::string curve_label);

  absl::Status Validate() const;
};

// c[0] + c[1] x + c[2] x^2 + c[3] x^3.
struct Cubic {
  std::array<double, 4> coeffs{};
  std::vector<double> residuals;  // fitted minus observed, per input point

  double Eval(double x) const;
  // Exact integral over [lo, hi].
  double Integral(double lo, double hi) const;
  double MaxAbsResidual() const;
};

struct LogPolyFit {
  Cubic quality_of_log_rate;
  Cubic log_rate_of_quality;
};

// Least-squares cubics through the curve in the log10-rate domain, both
// directions.
absl::StatusOr<LogPolyFit> FitLogPoly(const RateQualityCurve& curve);

struct BDResult {
  std::optional<double> bd_rate_percent;
  std::optional<double> bd_quality;
  // Integration interval actually used: quality for BD-rate, log10 rate for
  // BD-quality.
  std::optional<std::pair<double, double>> overlap;
  std::string reason;  // why a result is absent
  std::string reference_label;
  std::string test_label;
  std::string quality_metric;
  std::string variant = kBjontegaardVariant;
};

// Negative means the test curve needs fewer bits for equal quality.
absl::StatusOr<BDResult> BdRate(const RateQualityCurve& reference,
                                const RateQualityCurve& test);

// Positive means the test curve has higher quality at equal rate.
absl::StatusOr<BDResult> BdQuality(const RateQualityCurve& reference,
                                   const RateQualityCurve& test);

struct OperatingPoint {
  double rate = 0.0;
  double d_enh = 0.0;   // enhancement (reconstruction) distortion
  double d_base = 0.0;  // base (feature matching) distortion
  std::string label;

  friend bool operator==(const OperatingPoint&,
                         const OperatingPoint&) = default;
};

struct Selection {
  size_t index = 0;
  OperatingPoint point;
  double loss = 0.0;
};

// argmin of rate + lambda * (d_enh + w * d_base); ties go to the lower
// rate, then to the earlier point.
absl::StatusOr<Selection> LagrangianSelect(std::span<const OperatingPoint> points,
                                           double lambda, double w);

}  // namespace icmrd

#endif  // ICMRD_BD_METRICS_H_
