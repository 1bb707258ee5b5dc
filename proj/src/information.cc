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

#include "icmrd/information.h"

#include <algorithm>
#include <cmath>

namespace icmrd {

double Entropy(const FiniteDistribution& dist) {
  double h = 0.0;
  for (double p : dist.mass) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

absl::StatusOr<double> MutualInformation(const FiniteDistribution& source,
                                         const Channel& channel) {
  absl::StatusOr<FiniteDistribution> marginal = OutputMarginal(source, channel);
  if (!marginal.ok()) return marginal.status();
  // Normalizing by the marginal's own total keeps a source whose masses sum
  // to 1 - ulp from leaking log2(1 / (1 - ulp)) into collapsed outputs.
  double total = 0.0;
  for (double q : marginal->mass) total += q;
  if (total > 0.0) {
    for (double& q : marginal->mass) q /= total;
  }
  double info = 0.0;
  for (size_t x = 0; x < channel.rows.size; ++x) {
    const double px = source.mass[x];
    if (px == 0.0) continue;
    for (size_t y = 0; y < channel.cols.size; ++y) {
      const double w = channel(x, y);
      if (w == 0.0) continue;
      info += px * w * std::log2(w / marginal->mass[y]);
    }
  }
  return std::max(0.0, info);
}

}  // namespace icmrd
