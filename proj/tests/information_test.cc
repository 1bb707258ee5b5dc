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

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace icmrd {
namespace {

using ::icmrd::testing::BinaryEntropy;
using ::icmrd::testing::RandomChannel;
using ::icmrd::testing::RandomDistribution;

TEST(EntropyTest, PointMassIsZero) {
  EXPECT_EQ(Entropy(FiniteDistribution::PointMass(5, 3)), 0.0);
}

TEST(EntropyTest, UniformOverFourIsTwoBits) {
  EXPECT_DOUBLE_EQ(Entropy(FiniteDistribution::Uniform(4)), 2.0);
}

TEST(EntropyTest, HandSum) {
  EXPECT_DOUBLE_EQ(Entropy(FiniteDistribution{{0.5, 0.25, 0.25}}), 1.5);
}

TEST(EntropyTest, BoundedByLogAlphabet) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + rng.UniformIndex(10);
    const double h = Entropy(RandomDistribution(rng, n));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(static_cast<double>(n)) + 1e-12);
  }
}

TEST(MutualInformationTest, NoiselessBinaryIsOneBit) {
  EXPECT_DOUBLE_EQ(*MutualInformation(FiniteDistribution::Uniform(2), Channel::Identity(2)),
                   1.0);
}

TEST(MutualInformationTest, IdenticalRowsGiveZero) {
  Channel c{Alphabet{3}, Alphabet{2}, {0.3, 0.7, 0.3, 0.7, 0.3, 0.7}};
  EXPECT_NEAR(*MutualInformation(FiniteDistribution{{0.2, 0.5, 0.3}}, c), 0.0, 1e-15);
}

TEST(MutualInformationTest, BinarySymmetricChannel) {
  Channel bsc{Alphabet{2}, Alphabet{2}, {0.9, 0.1, 0.1, 0.9}};
  const double i = *MutualInformation(FiniteDistribution::Uniform(2), bsc);
  EXPECT_NEAR(i, 1.0 - BinaryEntropy(0.1), 1e-12);
  EXPECT_NEAR(i, 0.5310, 1e-4);
}

TEST(MutualInformationTest, ZeroMassRowsDoNotCount) {
  Channel c{Alphabet{2}, Alphabet{2}, {1.0, 0.0, 0.5, 0.5}};
  EXPECT_EQ(*MutualInformation(FiniteDistribution{{1.0, 0.0}}, c), 0.0);
}

TEST(MutualInformationTest, BoundedByEntropies) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + rng.UniformIndex(6);
    const size_t m = 1 + rng.UniformIndex(6);
    const FiniteDistribution p = RandomDistribution(rng, n);
    const Channel q = RandomChannel(rng, n, m);
    const double i = *MutualInformation(p, q);
    EXPECT_GE(i, -1e-12);
    EXPECT_LE(i, Entropy(p) + 1e-12);
    EXPECT_LE(i, Entropy(*OutputMarginal(p, q)) + 1e-12);
  }
}

TEST(MutualInformationTest, ShapeMismatchIsRejected) {
  EXPECT_FALSE(MutualInformation(FiniteDistribution::Uniform(3), Channel::Identity(2)).ok());
}

}  // namespace
}  // namespace icmrd
