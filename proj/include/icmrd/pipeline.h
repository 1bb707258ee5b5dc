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

#ifndef ICMRD_PIPELINE_H_
#define ICMRD_PIPELINE_H_

// The layered inference chain X -> Y1 -> Y2 -> T:
//
//         g1        g2        h2
//   X ------> Y1 ------> Y2 ------> T
//
// with h1 = h2 ∘ g2 and f = h1 ∘ g1 derived on demand. Y1 is the partition
// point; optional downstream branches H_k map Y1 to further features that
// are matched instead of Y1 itself.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "icmrd/distortion.h"
#include "icmrd/finite.h"

namespace icmrd {

struct LayeredPipeline {
  FiniteDistribution source;
  DeterministicMap g1;
  DeterministicMap g2;
  DeterministicMap h2;
  DistortionMatrix task_distortion;
  std::vector<BranchDistortion> branches;
  std::string partition_label = "y1";

  // Derived maps. Only meaningful on a pipeline with an empty
  // ValidatePipeline() report.
  DeterministicMap h1() const;  // h2 ∘ g2
  DeterministicMap f() const;   // h1 ∘ g1

  Alphabet x() const { return source.alphabet(); }
  Alphabet y1() const { return g1.codomain; }
  Alphabet y2() const { return g2.codomain; }
  Alphabet t() const { return h2.codomain; }

  friend bool operator==(const LayeredPipeline&,
                         const LayeredPipeline&) = default;
};

struct Violation {
  std::string invariant;  // e.g. "source normalization", "g2 range"
  std::string component;  // "source", "g1", "branch:<name>", ...
  int64_t index = -1;     // offending entry, -1 when not entry-specific
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every violated LayeredPipeline invariant; empty iff the pipeline is valid.
std::vector<Violation> ValidatePipeline(const LayeredPipeline& pipeline);

// Readable one-line-per-violation rendering.
std::string FormatViolations(const std::vector<Violation>& violations);

enum class DistortionKind { kHamming, kRandomNonnegative };

// Alphabet sizes for X, Y1, Y2, T.
using PipelineSizes = std::array<size_t, 4>;

// Random pipeline for property sweeps. Source masses are strictly positive
// (each drawn uniform, floored at 1e-3, then normalized); every map table
// entry is uniform over its codomain. Hamming task distortion has a zero
// diagonal and ones elsewhere; the random-nonnegative kind draws every entry,
// diagonal included, uniform on [0, 1).
absl::StatusOr<LayeredPipeline> RandomPipeline(uint64_t seed,
                                               const PipelineSizes& sizes,
                                               DistortionKind kind);

// A pipeline over a single alphabet of the given size with identity maps,
// uniform source and Hamming task distortion.
LayeredPipeline IdentityPipeline(size_t size);

}  // namespace icmrd

#endif  // ICMRD_PIPELINE_H_
