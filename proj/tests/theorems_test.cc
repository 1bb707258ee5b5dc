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

#include "icmrd/theorems.h"

#include <gtest/gtest.h>

#include "icmrd/information.h"
#include "test_util.h"

namespace icmrd {
namespace {

using ::icmrd::testing::RandomChannel;
using ::icmrd::testing::RandomDistribution;
using ::icmrd::testing::RandomMagnitudeOneCase;
using ::icmrd::testing::RandomMap;
using ::icmrd::testing::RandomPermutationPipeline;

const DeterministicMap kSwap{Alphabet{2}, {1, 0}};

TEST(UniformGridTest, Endpoints) {
  EXPECT_EQ(UniformGrid(0.0, 1.0, 5), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(UniformGrid(0.3, 1.0, 1), std::vector<double>{0.3});
}

TEST(VerifyTheorem1Test, IdentityG2HasNoViolation) {
  LayeredPipeline p = *RandomPipeline(1, {5, 4, 4, 3}, DistortionKind::kHamming);
  p.g2 = DeterministicMap::Identity(4);
  const TheoremReport r = *VerifyTheorem1(p, 20, SolverConfig{}, 1e-4);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_violation, 0.0);
  EXPECT_EQ(r.d_grid.size(), 20u);
  EXPECT_EQ(r.rate_pairs.size(), 20u);
  EXPECT_EQ(r.theorem_id, TheoremId::kThm1);
}

TEST(VerifyTheorem1Test, PermutationG2GivesEqualCurves) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const LayeredPipeline p = RandomPermutationPipeline(seed);
    const TheoremReport r = *VerifyTheorem1(p, 20, SolverConfig{}, 1e-4);
    for (const auto& [y1, y2] : r.rate_pairs) EXPECT_NEAR(y1, y2, 1e-9);
  }
}

TEST(VerifyTheorem1Test, RandomPipelinesPass) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const TheoremReport r = *VerifyTheorem1(
        *RandomPipeline(seed, {6, 6, 5, 3},
                        seed % 2 ? DistortionKind::kHamming
                                 : DistortionKind::kRandomNonnegative),
        20, SolverConfig{}, 1e-4);
    EXPECT_TRUE(r.pass) << "seed " << seed << " violation " << r.max_violation;
  }
}

TEST(VerifyTheorem1Test, InvalidPipelineIsRejected) {
  LayeredPipeline p = IdentityPipeline(3);
  p.g2.table[0] = 5;
  EXPECT_FALSE(VerifyTheorem1(p, 20, SolverConfig{}, 1e-4).ok());
  EXPECT_FALSE(VerifyTheorem1(IdentityPipeline(3), 0, SolverConfig{}, 1e-4).ok());
}

TEST(VerifyTheorem2Test, IdentityG2HasNoViolation) {
  LayeredPipeline p = IdentityPipeline(3);
  const DistortionMatrix d = DistortionMatrix::Hamming(3);
  const TheoremReport r = *VerifyTheorem2(p, d, 20, SolverConfig{}, 1e-4, d);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_violation, 0.0);
  EXPECT_EQ(r.theorem_id, TheoremId::kThm2);
}

TEST(VerifyTheorem2Test, PermutationPasses) {
  LayeredPipeline p = IdentityPipeline(4);
  p.source = FiniteDistribution{{0.1, 0.2, 0.3, 0.4}};
  p.g2 = DeterministicMap{Alphabet{4}, {2, 0, 3, 1}};
  const DistortionMatrix d = DistortionMatrix::Hamming(4);
  ASSERT_EQ(CheckDistortionMagnitude(*PullbackDistortion(d, p.g2), d, p.g2), 1.0);
  const TheoremReport r =
      *VerifyTheorem2(p, *PullbackDistortion(d, p.g2), 20, SolverConfig{}, 1e-4, d);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_violation, 1e-9);
}

TEST(VerifyTheorem2Test, MergingMapPasses) {
  // Y1 = {0..3} merged onto Y2 = {0, 1}; d_y1 lifts hamming so that merged
  // pairs cost nothing, which is what magnitude 1 requires.
  LayeredPipeline p;
  p.source = FiniteDistribution{{0.3, 0.2, 0.25, 0.25}};
  p.g1 = DeterministicMap::Identity(4);
  p.g2 = DeterministicMap{Alphabet{2}, {0, 0, 1, 1}};
  p.h2 = DeterministicMap::Identity(2);
  p.task_distortion = DistortionMatrix::Hamming(2);
  const DistortionMatrix d_y1 = *PullbackDistortion(p.task_distortion, p.g2);
  const TheoremReport r = *VerifyTheorem2(p, d_y1, 20, SolverConfig{}, 1e-4);
  EXPECT_TRUE(r.pass) << r.max_violation;
  const ConstructionReport c =
      *VerifyTwoStepConstruction(p, d_y1, r, SolverConfig{}, 1e-4);
  EXPECT_TRUE(c.pass);
}

TEST(VerifyTheorem2Test, MagnitudeOtherThanOneIsRejected) {
  LayeredPipeline p = IdentityPipeline(3);
  const DistortionMatrix d_y1 = DistortionMatrix::Hamming(3);
  const absl::StatusOr<TheoremReport> r = VerifyTheorem2(
      p, d_y1, 20, SolverConfig{}, 1e-4, *ScaleDistortion(d_y1, 2.0));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(r.status().message().find("(0,1)"), std::string::npos)
      << r.status().message();
}

TEST(VerifyTheorem2Test, RandomMagnitudeOneCasesPass) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = RandomMagnitudeOneCase(seed);
    const TheoremReport r =
        *VerifyTheorem2(c.pipeline, c.d_y1, 20, SolverConfig{}, 1e-4, c.d_y2);
    EXPECT_TRUE(r.pass) << "seed " << seed << " violation " << r.max_violation;
    const ConstructionReport construction = *VerifyTwoStepConstruction(
        c.pipeline, c.d_y1, r, SolverConfig{}, 1e-4, c.d_y2);
    EXPECT_TRUE(construction.pass) << "seed " << seed;
    for (const ConstructionPoint& pt : construction.points) {
      EXPECT_TRUE(pt.feasible);
      EXPECT_TRUE(pt.dpi);
    }
  }
}

TEST(TwoStepChannelTest, IdentityKeepsChannel) {
  Rng rng(1);
  const Channel p = RandomChannel(rng, 3, 4);
  EXPECT_EQ(*TwoStepChannel(p, DeterministicMap::Identity(4)), p);
}

TEST(TwoStepChannelTest, ConstantGivesPointMassRows) {
  Rng rng(2);
  const Channel out =
      *TwoStepChannel(RandomChannel(rng, 3, 4), DeterministicMap::Constant(4, 2, 1));
  EXPECT_EQ(out, Channel::ConstantOutput(Alphabet{3}, Alphabet{2}, 1));
}

TEST(TwoStepChannelTest, IdentityThroughSwapIsSwap) {
  EXPECT_EQ(*TwoStepChannel(Channel::Identity(2), kSwap), Channel::FromMap(kSwap));
}

TEST(TwoStepChannelTest, RowsSumToOne) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.UniformIndex(6);
    const size_t m = 1 + rng.UniformIndex(6);
    const size_t k = 1 + rng.UniformIndex(6);
    const Channel out = *TwoStepChannel(RandomChannel(rng, n, m), RandomMap(rng, m, k));
    for (size_t r = 0; r < n; ++r) {
      double total = 0.0;
      for (double v : out.Row(r)) total += v;
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(DpiCheckTest, IdentityKeepsInformation) {
  Rng rng(4);
  const FiniteDistribution p = RandomDistribution(rng, 3);
  const Channel q = RandomChannel(rng, 3, 3);
  const DpiResult r = *DpiCheck(p, q, DeterministicMap::Identity(3));
  EXPECT_EQ(r.i_after, r.i_before);
  EXPECT_TRUE(r.holds);
}

TEST(DpiCheckTest, ConstantDestroysInformation) {
  Rng rng(5);
  const DpiResult r = *DpiCheck(RandomDistribution(rng, 3), RandomChannel(rng, 3, 4),
                                DeterministicMap::Constant(4, 2, 0));
  EXPECT_EQ(r.i_after, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(DpiCheckTest, HoldsOnRandomTriples) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 1 + rng.UniformIndex(6);
    const size_t m = 1 + rng.UniformIndex(6);
    const size_t k = 1 + rng.UniformIndex(6);
    const DpiResult r = *DpiCheck(RandomDistribution(rng, n), RandomChannel(rng, n, m),
                                  RandomMap(rng, m, k));
    EXPECT_TRUE(r.holds) << r.i_after << " > " << r.i_before;
  }
}

TEST(DpiCheckTest, BijectionKeepsInformation) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 1 + rng.UniformIndex(6);
    const size_t m = 1 + rng.UniformIndex(6);
    const DpiResult r = *DpiCheck(RandomDistribution(rng, n), RandomChannel(rng, n, m),
                                  ::icmrd::testing::RandomPermutation(rng, m));
    EXPECT_NEAR(r.i_after, r.i_before, 1e-12);
  }
}

}  // namespace
}  // namespace icmrd
