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

#ifndef ICMRD_FINITE_H_
#define ICMRD_FINITE_H_

// Finite alphabets, probability mass functions over them, and deterministic
// maps between them. Symbols are plain indices 0..size-1; what a symbol
// stands for (a pixel block, a quantized feature, a detection label) is the
// caller's business.

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace icmrd {

// Tolerance on the total mass of a distribution and on channel row sums.
inline constexpr double kMassTolerance = 1e-12;

struct Alphabet {
  size_t size = 1;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Probability mass function. The alphabet is implied by mass.size().
//
// The fields are public so that unvalidated data (for example a pipeline
// read from disk) can be represented and then reported on; use Create() or
// Validate() whenever the invariants matter.
struct FiniteDistribution {
  std::vector<double> mass;

  static absl::StatusOr<FiniteDistribution> Create(std::vector<double> mass);
  static FiniteDistribution Uniform(size_t size);
  static FiniteDistribution PointMass(size_t size, size_t symbol);

  Alphabet alphabet() const { return Alphabet{mass.size()}; }
  absl::Status Validate() const;

  friend bool operator==(const FiniteDistribution&,
                         const FiniteDistribution&) = default;
};

// Total function between two finite alphabets, stored as a lookup table.
struct DeterministicMap {
  Alphabet codomain;
  std::vector<size_t> table;

  static absl::StatusOr<DeterministicMap> Create(std::vector<size_t> table,
                                                 Alphabet codomain);
  static DeterministicMap Identity(size_t size);
  static DeterministicMap Constant(size_t domain_size, size_t codomain_size,
                                   size_t value);

  Alphabet domain() const { return Alphabet{table.size()}; }
  size_t operator()(size_t symbol) const { return table[symbol]; }
  absl::Status Validate() const;
  bool IsBijection() const;

  friend bool operator==(const DeterministicMap&,
                         const DeterministicMap&) = default;
};

// Distribution of map(X) for X ~ dist.
absl::StatusOr<FiniteDistribution> Pushforward(const FiniteDistribution& dist,
                                               const DeterministicMap& map);

// second ∘ first, i.e. a -> second(first(a)).
absl::StatusOr<DeterministicMap> Compose(const DeterministicMap& first,
                                         const DeterministicMap& second);

}  // namespace icmrd

#endif  // ICMRD_FINITE_H_
