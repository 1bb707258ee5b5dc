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

#include "icmrd/finite.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace icmrd {

absl::StatusOr<FiniteDistribution> FiniteDistribution::Create(
    std::vector<double> mass) {
  FiniteDistribution dist{std::move(mass)};
  if (absl::Status status = dist.Validate(); !status.ok()) return status;
  return dist;
}

FiniteDistribution FiniteDistribution::Uniform(size_t size) {
  return FiniteDistribution{
      std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

FiniteDistribution FiniteDistribution::PointMass(size_t size, size_t symbol) {
  FiniteDistribution dist{std::vector<double>(size, 0.0)};
  dist.mass[symbol] = 1.0;
  return dist;
}

absl::Status FiniteDistribution::Validate() const {
  if (mass.empty()) {
    return absl::InvalidArgumentError("distribution has an empty alphabet");
  }
  double total = 0.0;
  for (size_t i = 0; i < mass.size(); ++i) {
    if (!std::isfinite(mass[i]) || mass[i] < 0.0 || mass[i] > 1.0 + kMassTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("mass[", i, "] = ", mass[i], " is outside [0, 1]"));
    }
    total += mass[i];
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("mass sums to ", total, ", expected 1"));
  }
  return absl::OkStatus();
}

absl::StatusOr<DeterministicMap> DeterministicMap::Create(
    std::vector<size_t> table, Alphabet codomain) {
  DeterministicMap map{codomain, std::move(table)};
  if (absl::Status status = map.Validate(); !status.ok()) return status;
  return map;
}

DeterministicMap DeterministicMap::Identity(size_t size) {
  DeterministicMap map{Alphabet{size}, std::vector<size_t>(size)};
  for (size_t i = 0; i < size; ++i) map.table[i] = i;
  return map;
}

DeterministicMap DeterministicMap::Constant(size_t domain_size,
                                            size_t codomain_size,
                                            size_t value) {
  return DeterministicMap{Alphabet{codomain_size},
                          std::vector<size_t>(domain_size, value)};
}

absl::Status DeterministicMap::Validate() const {
  if (table.empty()) {
    return absl::InvalidArgumentError("map has an empty domain");
  }
  if (codomain.size == 0) {
    return absl::InvalidArgumentError("map has an empty codomain");
  }
  for (size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= codomain.size) {
      return absl::InvalidArgumentError(
          absl::StrCat("table[", i, "] = ", table[i],
                       " is outside codomain of size ", codomain.size));
    }
  }
  return absl::OkStatus();
}

bool DeterministicMap::IsBijection() const {
  if (table.size() != codomain.size) return false;
  std::vector<bool> hit(codomain.size, false);
  for (size_t value : table) {
    if (value >= codomain.size || hit[value]) return false;
    hit[value] = true;
  }
  return true;
}

absl::StatusOr<FiniteDistribution> Pushforward(const FiniteDistribution& dist,
                                               const DeterministicMap& map) {
  if (dist.alphabet() != map.domain()) {
    return absl::InvalidArgumentError(
        absl::StrCat("pushforward: distribution over ", dist.mass.size(),
                     " symbols, map domain has ", map.table.size()));
  }
  if (absl::Status status = map.Validate(); !status.ok()) return status;
  FiniteDistribution out{std::vector<double>(map.codomain.size, 0.0)};
  for (size_t a = 0; a < dist.mass.size(); ++a) out.mass[map(a)] += dist.mass[a];
  return out;
}

absl::StatusOr<DeterministicMap> Compose(const DeterministicMap& first,
                                         const DeterministicMap& second) {
  if (first.codomain != second.domain()) {
    return absl::InvalidArgumentError(
        absl::StrCat("compose: codomain of first has ", first.codomain.size,
                     " symbols, domain of second has ", second.table.size()));
  }
  if (absl::Status status = first.Validate(); !status.ok()) return status;
  if (absl::Status status = second.Validate(); !status.ok()) return status;
  DeterministicMap out{second.codomain, std::vector<size_t>(first.table.size())};
  for (size_t a = 0; a < first.table.size(); ++a) out.table[a] = second(first(a));
  return out;
}

}  // namespace icmrd
