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

#ifndef ICMRD_DISTORTION_H_
#define ICMRD_DISTORTION_H_

// Distortion matrices and the operations that derive them from a task.
//
// A distortion matrix d[z][ẑ] scores reproducing source symbol z as ẑ, in
// whatever units the task metric uses. Measuring distortion "at the task"
// means pulling the task distortion back through the map that finishes
// inference: d̃(a, â) = d_T(φ(a), φ(â)).
//
// Distortion magnitude. A map φ has distortion magnitude δ between a
// distortion d on Z and a distortion d' on φ(Z) when, for every conditional
// distribution q(ẑ|z) and every source p(z),
//
//   E[d'(φ(Z), φ(Ẑ))] = δ · E[d(Z, Ẑ)].
//
// Both sides are linear in the joint p(z)q(ẑ|z), and point masses on single
// pairs (z, ẑ) are valid joints, so the identity holds for all q iff it
// holds pointwise: d'[φ(z)][φ(ẑ)] = δ · d[z][ẑ] for every pair. The
// converse direction is the linearity of expectation. CheckDistortionMagnitude
// tests the pointwise form.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "icmrd/channel.h"
#include "icmrd/finite.h"

namespace icmrd {

struct DistortionMatrix {
  Alphabet rows;
  Alphabet cols;
  std::vector<double> values;  // row-major

  static absl::StatusOr<DistortionMatrix> Create(Alphabet rows, Alphabet cols,
                                                 std::vector<double> values);
  static DistortionMatrix Hamming(size_t size);
  static DistortionMatrix Zeros(Alphabet rows, Alphabet cols);

  double operator()(size_t row, size_t col) const {
    return values[row * cols.size + col];
  }
  double& operator()(size_t row, size_t col) {
    return values[row * cols.size + col];
  }
  bool IsSquare() const { return rows == cols; }

  absl::Status Validate() const;

  friend bool operator==(const DistortionMatrix&,
                         const DistortionMatrix&) = default;
};

// output[a][â] = d[phi(a)][phi(â)].
absl::StatusOr<DistortionMatrix> PullbackDistortion(const DistortionMatrix& d,
                                                    const DeterministicMap& phi);

// Relative tolerance used when matching pointwise distortion ratios.
inline constexpr double kMagnitudeRelativeTolerance = 1e-9;

// Returns δ if d_after[phi(z)][phi(ẑ)] = δ · d_before[z][ẑ] for all pairs,
// nullopt otherwise. Pairs where both sides are zero impose no constraint;
// if no pair constrains δ the canonical δ = 1 is returned. Shape mismatches
// also yield nullopt.
std::optional<double> CheckDistortionMagnitude(const DistortionMatrix& d_before,
                                               const DistortionMatrix& d_after,
                                               const DeterministicMap& phi);

// Pairs (z, ẑ) that violate d_after[phi(z)][phi(ẑ)] = delta · d_before[z][ẑ].
std::vector<std::pair<size_t, size_t>> MagnitudeMismatches(
    const DistortionMatrix& d_before, const DistortionMatrix& d_after,
    const DeterministicMap& phi, double delta);

absl::StatusOr<DistortionMatrix> ScaleDistortion(const DistortionMatrix& d,
                                                 double factor);

// One downstream feature: the map H_k out of the partition variable and the
// distortion measured on its output.
struct BranchDistortion {
  std::string name;
  DeterministicMap map;
  DistortionMatrix distortion;

  friend bool operator==(const BranchDistortion&,
                         const BranchDistortion&) = default;
};

// output[y][ŷ] = Σ_k w_k · d_k[H_k(y)][H_k(ŷ)]. An empty weights span means
// every weight is 1. Summing per-branch squared errors is what flattening
// and concatenating feature tensors before a squared-error loss amounts to;
// divide through the weights to get a per-dimension mean instead.
absl::StatusOr<DistortionMatrix> ConcatBranchDistortion(
    std::span<const BranchDistortion> branches,
    std::span<const double> weights = {});

// Σ_x Σ_x̂ p(x) p(x̂|x) d[x][x̂].
absl::StatusOr<double> ExpectedDistortion(const FiniteDistribution& source,
                                          const Channel& channel,
                                          const DistortionMatrix& d);

}  // namespace icmrd

#endif  // ICMRD_DISTORTION_H_
