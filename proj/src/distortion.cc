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

#include "icmrd/distortion.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace icmrd {
namespace {

bool ShapesFit(const DistortionMatrix& d_before,
               const DistortionMatrix& d_after, const DeterministicMap& phi) {
  return d_before.IsSquare() && d_after.IsSquare() &&
         d_before.rows == phi.domain() && d_after.rows == phi.codomain &&
         d_before.values.size() == d_before.rows.size * d_before.cols.size &&
         d_after.values.size() == d_after.rows.size * d_after.cols.size &&
         phi.Validate().ok();
}

bool PairMatches(double after, double before, double delta) {
  const double scaled = delta * before;
  return std::abs(after - scaled) <=
         kMagnitudeRelativeTolerance * std::max(std::abs(after), std::abs(scaled));
}

}  // namespace

absl::StatusOr<DistortionMatrix> DistortionMatrix::Create(
    Alphabet rows, Alphabet cols, std::vector<double> values) {
  DistortionMatrix d{rows, cols, std::move(values)};
  if (absl::Status status = d.Validate(); !status.ok()) return status;
  return d;
}

DistortionMatrix DistortionMatrix::Hamming(size_t size) {
  DistortionMatrix d{Alphabet{size}, Alphabet{size},
                     std::vector<double>(size * size, 1.0)};
  for (size_t i = 0; i < size; ++i) d(i, i) = 0.0;
  return d;
}

DistortionMatrix DistortionMatrix::Zeros(Alphabet rows, Alphabet cols) {
  return DistortionMatrix{rows, cols,
                          std::vector<double>(rows.size * cols.size, 0.0)};
}

absl::Status DistortionMatrix::Validate() const {
  if (rows.size == 0 || cols.size == 0) {
    return absl::InvalidArgumentError("distortion matrix has an empty alphabet");
  }
  if (values.size() != rows.size * cols.size) {
    return absl::InvalidArgumentError(
        absl::StrCat("distortion matrix has ", values.size(),
                     " entries, expected ", rows.size, "x", cols.size));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("distortion entry (", i / cols.size, ", ",
                       i % cols.size, ") = ", values[i],
                       " is not a finite nonnegative number"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DistortionMatrix> PullbackDistortion(
    const DistortionMatrix& d, const DeterministicMap& phi) {
  if (!d.IsSquare() || d.rows != phi.codomain) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pullback: distortion is ", d.rows.size, "x", d.cols.size,
        ", map codomain has ", phi.codomain.size, " symbols"));
  }
  if (absl::Status status = phi.Validate(); !status.ok()) return status;
  if (absl::Status status = d.Validate(); !status.ok()) return status;
  const size_t n = phi.table.size();
  DistortionMatrix out = DistortionMatrix::Zeros(Alphabet{n}, Alphabet{n});
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) out(a, b) = d(phi(a), phi(b));
  }
  return out;
}

std::optional<double> CheckDistortionMagnitude(
    const DistortionMatrix& d_before, const DistortionMatrix& d_after,
    const DeterministicMap& phi) {
  if (!ShapesFit(d_before, d_after, phi)) return std::nullopt;
  const size_t n = phi.table.size();
  double sum_after = 0.0;
  double sum_before = 0.0;
  bool constrained = false;
  for (size_t z = 0; z < n; ++z) {
    for (size_t w = 0; w < n; ++w) {
      const double after = d_after(phi(z), phi(w));
      const double before = d_before(z, w);
      if (after == 0.0 && before == 0.0) continue;
      // after > 0 with before == 0 cannot be matched by any finite δ.
      if (before == 0.0) return std::nullopt;
      constrained = true;
      sum_after += after;
      sum_before += before;
    }
  }
  if (!constrained) return 1.0;
  const double delta = sum_after / sum_before;
  if (!MagnitudeMismatches(d_before, d_after, phi, delta).empty()) {
    return std::nullopt;
  }
  return delta;
}

std::vector<std::pair<size_t, size_t>> MagnitudeMismatches(
    const DistortionMatrix& d_before, const DistortionMatrix& d_after,
    const DeterministicMap& phi, double delta) {
  std::vector<std::pair<size_t, size_t>> bad;
  if (!ShapesFit(d_before, d_after, phi)) return bad;
  const size_t n = phi.table.size();
  for (size_t z = 0; z < n; ++z) {
    for (size_t w = 0; w < n; ++w) {
      if (!PairMatches(d_after(phi(z), phi(w)), d_before(z, w), delta)) {
        bad.emplace_back(z, w);
      }
    }
  }
  return bad;
}

absl::StatusOr<DistortionMatrix> ScaleDistortion(const DistortionMatrix& d,
                                                 double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    return absl::InvalidArgumentError(
        absl::StrCat("scale factor must be positive, got ", factor));
  }
  DistortionMatrix out = d;
  for (double& v : out.values) v *= factor;
  return out;
}

absl::StatusOr<DistortionMatrix> ConcatBranchDistortion(
    std::span<const BranchDistortion> branches,
    std::span<const double> weights) {
  if (branches.empty()) {
    return absl::InvalidArgumentError("no branches to combine");
  }
  if (!weights.empty() && weights.size() != branches.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "got ", weights.size(), " weights for ", branches.size(), " branches"));
  }
  const Alphabet domain = branches.front().map.domain();
  DistortionMatrix out = DistortionMatrix::Zeros(domain, domain);
  for (size_t k = 0; k < branches.size(); ++k) {
    const BranchDistortion& branch = branches[k];
    if (branch.map.domain() != domain) {
      return absl::InvalidArgumentError(absl::StrCat(
          "branch '", branch.name, "' has domain of size ",
          branch.map.table.size(), ", expected ", domain.size));
    }
    const double w = weights.empty() ? 1.0 : weights[k];
    if (!(w > 0.0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "branch '", branch.name, "' has non-positive weight ", w));
    }
    absl::StatusOr<DistortionMatrix> pulled =
        PullbackDistortion(branch.distortion, branch.map);
    if (!pulled.ok()) {
      return absl::Status(pulled.status().code(),
                          absl::StrCat("branch '", branch.name,
                                       "': ", pulled.status().message()));
    }
    for (size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] += w * pulled->values[i];
    }
  }
  return out;
}

absl::StatusOr<double> ExpectedDistortion(const FiniteDistribution& source,
                                          const Channel& channel,
                                          const DistortionMatrix& d) {
  if (source.alphabet() != channel.rows || channel.rows != d.rows ||
      channel.cols != d.cols ||
      channel.values.size() != channel.rows.size * channel.cols.size ||
      d.values.size() != d.rows.size * d.cols.size) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected distortion: source has ", source.mass.size(),
        " symbols, channel is ", channel.rows.size, "x", channel.cols.size,
        ", distortion is ", d.rows.size, "x", d.cols.size));
  }
  double total = 0.0;
  for (size_t x = 0; x < d.rows.size; ++x) {
    if (source.mass[x] == 0.0) continue;
    double row = 0.0;
    for (size_t y = 0; y < d.cols.size; ++y) row += channel(x, y) * d(x, y);
    total += source.mass[x] * row;
  }
  return total;
}

}  // namespace icmrd
