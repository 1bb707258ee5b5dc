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

#ifndef ICMRD_CHANNEL_H_
#define ICMRD_CHANNEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "icmrd/finite.h"

namespace icmrd {

// Conditional distribution p(reproduction | source) as a row-stochastic
// matrix, stored row-major.
struct Channel {
  Alphabet rows;
  Alphabet cols;
  std::vector<double> values;

  static absl::StatusOr<Channel> Create(Alphabet rows, Alphabet cols,
                                        std::vector<double> values);
  static Channel Identity(size_t size);
  // Every row uniform over cols.
  static Channel UniformRows(Alphabet rows, Alphabet cols);
  // Every row is a point mass on the same reproduction symbol.
  static Channel ConstantOutput(Alphabet rows, Alphabet cols, size_t symbol);
  // Channel that applies a deterministic map.
  static Channel FromMap(const DeterministicMap& map);

  double operator()(size_t row, size_t col) const {
    return values[row * cols.size + col];
  }
  double& operator()(size_t row, size_t col) {
    return values[row * cols.size + col];
  }
  std::span<const double> Row(size_t row) const {
    return {values.data() + row * cols.size, cols.size};
  }

  absl::Status Validate() const;

  friend bool operator==(const Channel&, const Channel&) = default;
};

// Output marginal q(x̂) = Σ_x p(x) p(x̂|x).
absl::StatusOr<FiniteDistribution> OutputMarginal(
    const FiniteDistribution& source, const Channel& channel);

}  // namespace icmrd

#endif  // ICMRD_CHANNEL_H_
