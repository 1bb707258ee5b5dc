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

#include <gtest/gtest.h>

#include "icmrd/finite.h"
#include "icmrd/io.h"
#include "test_util.h"

namespace icmrd {
namespace {

using ::icmrd::testing::RandomDistribution;
using ::icmrd::testing::RandomMap;

TEST(FiniteDistributionTest, CreateRejectsBadMass) {
  EXPECT_FALSE(FiniteDistribution::Create({}).ok());
  EXPECT_FALSE(FiniteDistribution::Create({0.5, 0.6}).ok());
  EXPECT_FALSE(FiniteDistribution::Create({-0.1, 1.1}).ok());
  EXPECT_TRUE(FiniteDistribution::Create({0.25, 0.75}).ok());
}

TEST(DeterministicMapTest, CreateRejectsOutOfRange) {
  EXPECT_FALSE(DeterministicMap::Create({0, 2}, Alphabet{2}).ok());
  EXPECT_TRUE(DeterministicMap::Create({1, 1}, Alphabet{2}).ok());
}

TEST(PushforwardTest, ConstantMapGivesPointMass) {
  const FiniteDistribution out =
      *Pushforward(FiniteDistribution::Uniform(4), DeterministicMap::Constant(4, 3, 0));
  EXPECT_EQ(out, FiniteDistribution::PointMass(3, 0));
}

TEST(PushforwardTest, IdentityKeepsDistribution) {
  const FiniteDistribution p{{0.1, 0.2, 0.3, 0.4}};
  EXPECT_EQ(*Pushforward(p, DeterministicMap::Identity(4)), p);
}

TEST(PushforwardTest, SumsPreimageMasses) {
  const FiniteDistribution out = *Pushforward(
      FiniteDistribution{{0.2, 0.3, 0.5}}, DeterministicMap{Alphabet{2}, {0, 0, 1}});
  ASSERT_EQ(out.mass.size(), 2u);
  EXPECT_DOUBLE_EQ(out.mass[0], 0.5);
  EXPECT_DOUBLE_EQ(out.mass[1], 0.5);
}

TEST(PushforwardTest, DomainMismatchIsRejected) {
  EXPECT_FALSE(Pushforward(FiniteDistribution::Uniform(3),
                           DeterministicMap::Identity(2))
                   .ok());
}

TEST(PushforwardTest, PreservesMass) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.UniformIndex(8);
    const size_t m = 1 + rng.UniformIndex(8);
    const FiniteDistribution p = RandomDistribution(rng, n);
    const FiniteDistribution q = *Pushforward(p, RandomMap(rng, n, m));
    double total = 0.0;
    for (double v : q.mass) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ComposeTest, IdentityIsNeutral) {
  const DeterministicMap m{Alphabet{3}, {2, 0, 2, 1}};
  EXPECT_EQ(*Compose(DeterministicMap::Identity(4), m), m);
  EXPECT_EQ(*Compose(m, DeterministicMap::Identity(3)), m);
}

TEST(ComposeTest, TwoSwapsCancel) {
  const DeterministicMap swap{Alphabet{2}, {1, 0}};
  EXPECT_EQ(*Compose(swap, swap), DeterministicMap::Identity(2));
}

TEST(ComposeTest, CodomainMismatchIsRejected) {
  EXPECT_FALSE(Compose(DeterministicMap::Identity(3), DeterministicMap::Identity(2)).ok());
}

TEST(ComposeTest, IsAssociative) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n0 = 1 + rng.UniformIndex(7);
    const size_t n1 = 1 + rng.UniformIndex(7);
    const size_t n2 = 1 + rng.UniformIndex(7);
    const size_t n3 = 1 + rng.UniformIndex(7);
    const DeterministicMap a = RandomMap(rng, n0, n1);
    const DeterministicMap b = RandomMap(rng, n1, n2);
    const DeterministicMap c = RandomMap(rng, n2, n3);
    EXPECT_EQ(*Compose(*Compose(a, b), c), *Compose(a, *Compose(b, c)));
  }
}

TEST(ValidatePipelineTest, IdentityPipelineIsValid) {
  EXPECT_TRUE(ValidatePipeline(IdentityPipeline(4)).empty());
}

TEST(ValidatePipelineTest, OutOfRangeG2EntryIsNamed) {
  LayeredPipeline p = IdentityPipeline(3);
  p.g2.table[1] = p.g2.codomain.size;
  const std::vector<Violation> v = ValidatePipeline(p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].component, "g2");
  EXPECT_EQ(v[0].invariant, "g2 range");
  EXPECT_EQ(v[0].index, 1);
}

TEST(ValidatePipelineTest, UnnormalizedSourceIsNamed) {
  LayeredPipeline p = IdentityPipeline(2);
  p.source.mass = {0.45, 0.45};
  const std::vector<Violation> v = ValidatePipeline(p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].invariant, "source normalization");
  EXPECT_NE(FormatViolations(v).find("source normalization"), std::string::npos);
}

TEST(ValidatePipelineTest, ReportsEveryViolation) {
  LayeredPipeline p = IdentityPipeline(3);
  p.g1.table.pop_back();
  p.h2.table[0] = 7;
  p.task_distortion.values[1] = -1.0;
  p.branches.push_back({"bad", DeterministicMap::Identity(2),
                        DistortionMatrix::Hamming(2)});
  const std::vector<Violation> v = ValidatePipeline(p);
  std::vector<std::string> names;
  for (const Violation& x : v) names.push_back(x.invariant);
  EXPECT_EQ(names, (std::vector<std::string>{"g1 domain", "h2 range",
                                             "task_distortion range",
                                             "branch:bad domain"}));
}

TEST(RandomPipelineTest, SameSeedSameBytes) {
  const LayeredPipeline a = *RandomPipeline(3, {5, 4, 3, 2}, DistortionKind::kHamming);
  const LayeredPipeline b = *RandomPipeline(3, {5, 4, 3, 2}, DistortionKind::kHamming);
  EXPECT_EQ(a, b);
  EXPECT_EQ(PipelineToJson(a), PipelineToJson(b));
  EXPECT_NE(a, *RandomPipeline(4, {5, 4, 3, 2}, DistortionKind::kHamming));
}

TEST(RandomPipelineTest, SingletonAlphabetsGiveConstantMaps) {
  const LayeredPipeline p =
      *RandomPipeline(1, {1, 1, 1, 1}, DistortionKind::kRandomNonnegative);
  EXPECT_TRUE(ValidatePipeline(p).empty());
  EXPECT_EQ(p.g1.table, std::vector<size_t>{0});
  EXPECT_EQ(p.f().table, std::vector<size_t>{0});
}

TEST(RandomPipelineTest, SeedSevenIsValid) {
  const LayeredPipeline p = *RandomPipeline(7, {4, 4, 3, 2}, DistortionKind::kHamming);
  EXPECT_TRUE(ValidatePipeline(p).empty()) << FormatViolations(ValidatePipeline(p));
  for (double m : p.source.mass) EXPECT_GT(m, 0.0);
  EXPECT_EQ(p.task_distortion, DistortionMatrix::Hamming(2));
}

TEST(RandomPipelineTest, ZeroSizeIsRejected) {
  EXPECT_FALSE(RandomPipeline(1, {2, 0, 2, 2}, DistortionKind::kHamming).ok());
}

TEST(RandomPipelineTest, PushforwardThroughFMatchesStepwise) {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    const LayeredPipeline p = *RandomPipeline(
        seed, {1 + seed % 6, 1 + seed % 5, 1 + seed % 4, 1 + seed % 3},
        seed % 2 ? DistortionKind::kHamming : DistortionKind::kRandomNonnegative);
    ASSERT_TRUE(ValidatePipeline(p).empty());
    const FiniteDistribution direct = *Pushforward(p.source, p.f());
    const FiniteDistribution stepwise =
        *Pushforward(*Pushforward(*Pushforward(p.source, p.g1), p.g2), p.h2);
    // Summation order differs between the two routes, so allow a few ulps.
    ASSERT_EQ(direct.mass.size(), stepwise.mass.size());
    for (size_t i = 0; i < direct.mass.size(); ++i) {
      EXPECT_NEAR(direct.mass[i], stepwise.mass[i], 1e-15) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace icmrd
