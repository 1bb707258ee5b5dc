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

#include "icmrd/pipeline.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "icmrd/random.h"

namespace icmrd {
namespace {

DeterministicMap ComposeUnchecked(const DeterministicMap& first,
                                  const DeterministicMap& second) {
  DeterministicMap out{second.codomain, std::vector<size_t>(first.table.size())};
  for (size_t a = 0; a < first.table.size(); ++a) {
    out.table[a] = second.table[first.table[a]];
  }
  return out;
}

void CheckMapRange(const DeterministicMap& map, const std::string& name,
                   std::vector<Violation>& out) {
  if (map.codomain.size == 0) {
    out.push_back({name + " codomain", name, -1,
                   name + " has an empty codomain"});
    return;
  }
  for (size_t i = 0; i < map.table.size(); ++i) {
    if (map.table[i] >= map.codomain.size) {
      out.push_back({name + " range", name, static_cast<int64_t>(i),
                     absl::StrCat(name, ".table[", i, "] = ", map.table[i],
                                  " is not below codomain size ",
                                  map.codomain.size)});
    }
  }
}

void CheckDomain(const DeterministicMap& map, const std::string& name,
                 size_t expected, const std::string& upstream,
                 std::vector<Violation>& out) {
  if (map.table.size() != expected) {
    out.push_back({name + " domain", name, -1,
                   absl::StrCat(name, " has domain of size ", map.table.size(),
                                ", but ", upstream, " has ", expected,
                                " symbols")});
  }
}

void CheckDistortion(const DistortionMatrix& d, size_t size,
                     const std::string& name, std::vector<Violation>& out) {
  if (d.rows.size != size || d.cols.size != size ||
      d.values.size() != d.rows.size * d.cols.size) {
    out.push_back({name + " shape", name, -1,
                   absl::StrCat(name, " is ", d.rows.size, "x", d.cols.size,
                                " with ", d.values.size(),
                                " entries, expected ", size, "x", size)});
    return;
  }
  for (size_t i = 0; i < d.values.size(); ++i) {
    if (!std::isfinite(d.values[i]) || d.values[i] < 0.0) {
      out.push_back({name + " range", name, static_cast<int64_t>(i),
                     absl::StrCat(name, " entry ", i, " = ", d.values[i],
                                  " is not finite and nonnegative")});
    }
  }
}

}  // namespace

DeterministicMap LayeredPipeline::h1() const { return ComposeUnchecked(g2, h2); }

DeterministicMap LayeredPipeline::f() const {
  return ComposeUnchecked(g1, h1());
}

std::vector<Violation> ValidatePipeline(const LayeredPipeline& p) {
  std::vector<Violation> out;

  if (p.source.mass.empty()) {
    out.push_back({"source alphabet", "source", -1, "source is empty"});
  }
  double total = 0.0;
  bool mass_ok = true;
  for (size_t i = 0; i < p.source.mass.size(); ++i) {
    const double m = p.source.mass[i];
    if (!std::isfinite(m) || m < 0.0 || m > 1.0 + kMassTolerance) {
      out.push_back({"source mass range", "source", static_cast<int64_t>(i),
                     absl::StrCat("source[", i, "] = ", m,
                                  " is outside [0, 1]")});
      mass_ok = false;
    }
    total += m;
  }
  if (mass_ok && !p.source.mass.empty() &&
      std::abs(total - 1.0) > kMassTolerance) {
    out.push_back({"source normalization", "source", -1,
                   absl::StrCat("source mass sums to ", total,
                                ", expected 1")});
  }

  CheckDomain(p.g1, "g1", p.source.mass.size(), "source", out);
  CheckMapRange(p.g1, "g1", out);
  CheckDomain(p.g2, "g2", p.g1.codomain.size, "g1 codomain", out);
  CheckMapRange(p.g2, "g2", out);
  CheckDomain(p.h2, "h2", p.g2.codomain.size, "g2 codomain", out);
  CheckMapRange(p.h2, "h2", out);
  CheckDistortion(p.task_distortion, p.h2.codomain.size, "task_distortion",
                  out);

  for (const BranchDistortion& branch : p.branches) {
    const std::string name = "branch:" + branch.name;
    CheckDomain(branch.map, name, p.g1.codomain.size, "g1 codomain", out);
    CheckMapRange(branch.map, name, out);
    CheckDistortion(branch.distortion, branch.map.codomain.size,
                    name + " distortion", out);
  }
  return out;
}

std::string FormatViolations(const std::vector<Violation>& violations) {
  std::string out;
  for (const Violation& v : violations) {
    absl::StrAppend(&out, v.invariant, ": ", v.message, "\n");
  }
  return out;
}

absl::StatusOr<LayeredPipeline> RandomPipeline(uint64_t seed,
                                               const PipelineSizes& sizes,
                                               DistortionKind kind) {
  for (size_t s : sizes) {
    if (s == 0) {
      return absl::InvalidArgumentError("alphabet sizes must be >= 1");
    }
  }
  Rng rng(seed);
  LayeredPipeline p;

  std::vector<double> mass(sizes[0]);
  double total = 0.0;
  for (double& m : mass) {
    m = std::max(rng.Uniform01(), 1e-3);
    total += m;
  }
  for (double& m : mass) m /= total;
  p.source = FiniteDistribution{std::move(mass)};

  auto random_map = [&rng](size_t from, size_t to) {
    DeterministicMap map{Alphabet{to}, std::vector<size_t>(from)};
    for (size_t& v : map.table) v = rng.UniformIndex(to);
    return map;
  };
  p.g1 = random_map(sizes[0], sizes[1]);
  p.g2 = random_map(sizes[1], sizes[2]);
  p.h2 = random_map(sizes[2], sizes[3]);

  if (kind == DistortionKind::kHamming) {
    p.task_distortion = DistortionMatrix::Hamming(sizes[3]);
  } else {
    p.task_distortion =
        DistortionMatrix::Zeros(Alphabet{sizes[3]}, Alphabet{sizes[3]});
    for (double& v : p.task_distortion.values) v = rng.Uniform01();
  }
  return p;
}

LayeredPipeline IdentityPipeline(size_t size) {
  LayeredPipeline p;
  p.source = FiniteDistribution::Uniform(size);
  p.g1 = DeterministicMap::Identity(size);
  p.g2 = DeterministicMap::Identity(size);
  p.h2 = DeterministicMap::Identity(size);
  p.task_distortion = DistortionMatrix::Hamming(size);
  return p;
}

}  // namespace icmrd
