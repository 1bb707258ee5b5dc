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

#include "icmrd/channel.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace icmrd {

absl::StatusOr<Channel> Channel::Create(Alphabet rows, Alphabet cols,
                                        std::vector<double> values) {
  Channel channel{rows, cols, std::move(values)};
  if (absl::Status status = channel.Validate(); !status.ok()) return status;
  return channel;
}

Channel Channel::Identity(size_t size) {
  Channel channel{Alphabet{size}, Alphabet{size},
                  std::vector<double>(size * size, 0.0)};
  for (size_t i = 0; i < size; ++i) channel(i, i) = 1.0;
  return channel;
}

Channel Channel::UniformRows(Alphabet rows, Alphabet cols) {
  return Channel{rows, cols,
                 std::vector<double>(rows.size * cols.size,
                                     1.0 / static_cast<double>(cols.size))};
}

Channel Channel::ConstantOutput(Alphabet rows, Alphabet cols, size_t symbol) {
  Channel channel{rows, cols, std::vector<double>(rows.size * cols.size, 0.0)};
  for (size_t i = 0; i < rows.size; ++i) channel(i, symbol) = 1.0;
  return channel;
}

Channel Channel::FromMap(const DeterministicMap& map) {
  Channel channel{map.domain(), map.codomain,
                  std::vector<double>(map.table.size() * map.codomain.size,
                                      0.0)};
  for (size_t i = 0; i < map.table.size(); ++i) channel(i, map(i)) = 1.0;
  return channel;
}

absl::Status Channel::Validate() const {
  if (rows.size == 0 || cols.size == 0) {
    return absl::InvalidArgumentError("channel has an empty alphabet");
  }
  if (values.size() != rows.size * cols.size) {
    return absl::InvalidArgumentError(
        absl::StrCat("channel has ", values.size(), " entries, expected ",
                     rows.size, "x", cols.size));
  }
  for (size_t r = 0; r < rows.size; ++r) {
    double total = 0.0;
    for (size_t c = 0; c < cols.size; ++c) {
      const double v = (*this)(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kMassTolerance) {
        return absl::InvalidArgumentError(absl::StrCat(
            "channel entry (", r, ", ", c, ") = ", v, " is outside [0, 1]"));
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("channel row ", r, " sums to ", total));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<FiniteDistribution> OutputMarginal(
    const FiniteDistribution& source, const Channel& channel) {
  if (source.alphabet() != channel.rows ||
      channel.values.size() != channel.rows.size * channel.cols.size) {
    return absl::InvalidArgumentError(
        absl::StrCat("source over ", source.mass.size(),
                     " symbols does not match channel with ",
                     channel.rows.size, " rows"));
  }
  FiniteDistribution out{std::vector<double>(channel.cols.size, 0.0)};
  for (size_t x = 0; x < channel.rows.size; ++x) {
    if (source.mass[x] == 0.0) continue;
    for (size_t y = 0; y < channel.cols.size; ++y) {
      out.mass[y] += source.mass[x] * channel(x, y);
    }
  }
  return out;
}

}  // namespace icmrd
