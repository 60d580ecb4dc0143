// Copyright 2026 The lpmc Authors. All Rights Reserved.
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

#include "lpmc/sampling.h"

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lpmc/errors.h"
#include "lpmc/rng.h"
#include "test_util.h"

namespace lpmc {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.NextU64();
    EXPECT_EQ(x, b.NextU64());
    EXPECT_NE(x, c.NextU64());
  }
}

TEST(RngTest, MixMatchesSplitmix64Reference) {
  // Reference splitmix64 stream for seed 0.
  EXPECT_EQ(Rng::Mix(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(Rng::Mix(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(RngTest, DeriveAndSplitAreIndependentOfConsumption) {
  Rng base(7);
  const Rng child_before = base.Split(3);
  base.NextU64();
  const Rng child_after = base.Split(3);
  EXPECT_EQ(child_before.key(), child_after.key());
  EXPECT_NE(Rng::Derive(7, {1, 2}).key(), Rng::Derive(7, {2, 1}).key());
  EXPECT_EQ(Rng::Derive(7, {1, 2}).key(), Rng::Derive(7, {1, 2}).key());
}

TEST(RngTest, UniformAndNormalMoments) {
  Rng rng(5);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.Normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 5e-3);
  EXPECT_NEAR(sn / n, 0.0, 1e-2);
  EXPECT_NEAR(sn2 / n, 1.0, 2e-2);
}

TEST(SamplingTest, BernoulliBasics) {
  Rng rng(1);
  const ObservationMask mask = SampleBernoulli(40, 30, 0.3, rng);
  EXPECT_EQ(mask.model(), SamplingModel::kBernoulliRect);
  EXPECT_EQ(mask.nominal_p(), 0.3);
  for (const Index& idx : mask.indices()) {
    EXPECT_GE(idx.row, 0);
    EXPECT_LT(idx.row, 40);
    EXPECT_GE(idx.col, 0);
    EXPECT_LT(idx.col, 30);
  }
  // Binomial(1200, 0.3): mean 360, sd ~ 15.9.
  EXPECT_NEAR(static_cast<double>(mask.size()), 360.0, 80.0);
  EXPECT_DOUBLE_EQ(EstimateP(mask), mask.size() / 1200.0);
}

TEST(SamplingTest, ExtremeProbabilities) {
  Rng rng(2);
  EXPECT_EQ(SampleBernoulli(5, 6, 0.0, rng).size(), 0u);
  EXPECT_EQ(SampleBernoulli(5, 6, 1.0, rng).size(), 30u);
  EXPECT_EQ(SampleSymmetricOffdiag(6, 1.0, rng).size(), 30u);
  EXPECT_THROW(SampleBernoulli(5, 5, 1.5, rng), ArgumentError);
  EXPECT_THROW(SampleBernoulli(5, 5, -0.1, rng), ArgumentError);
  EXPECT_THROW(SampleSymmetricOffdiag(5, 2.0, rng), ArgumentError);
}

TEST(SamplingTest, SymmetricOffdiagInvariants) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ObservationMask mask = SampleSymmetricOffdiag(25, 0.2, rng);
    std::set<std::pair<int, int>> seen;
    for (const Index& idx : mask.indices()) seen.insert({idx.row, idx.col});
    for (const Index& idx : mask.indices()) {
      EXPECT_NE(idx.row, idx.col);
      EXPECT_TRUE(seen.count({idx.col, idx.row}));
    }
    EXPECT_EQ(mask.size() % 2, 0u);
  }
}

TEST(SamplingTest, MaskConstructorEnforcesInvariants) {
  EXPECT_THROW(ObservationMask(3, 3, {{0, 3}}, SamplingModel::kBernoulliRect, 0.5),
               ArgumentError);
  EXPECT_THROW(ObservationMask(3, 3, {{1, 1}}, SamplingModel::kSymmetricOffdiag, 0.5),
               ArgumentError);
  EXPECT_THROW(ObservationMask(3, 3, {{0, 1}}, SamplingModel::kSymmetricOffdiag, 0.5),
               ArgumentError);
  EXPECT_THROW(ObservationMask(3, 4, {}, SamplingModel::kSymmetricOffdiag, 0.5),
               ArgumentError);
  const ObservationMask dup(3, 3, {{1, 2}, {0, 0}, {1, 2}}, SamplingModel::kBernoulliRect, 0.5);
  ASSERT_EQ(dup.size(), 2u);
  EXPECT_EQ(dup.indices()[0], (Index{0, 0}));
}

TEST(SamplingTest, ProjectOmegaKeepsOnlyObserved) {
  Rng rng(4);
  const Matrix m = testing::RandomMatrix(6, 7, rng);
  const ObservationMask mask = SampleBernoulli(6, 7, 0.4, rng);
  const Matrix pm = ProjectOmega(m, mask);
  const Matrix ind = mask.Indicator();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 7; ++j) EXPECT_EQ(pm(i, j), ind(i, j) == 1.0 ? m(i, j) : 0.0);
  }
  // Idempotent.
  EXPECT_EQ((ProjectOmega(pm, mask) - pm).norm(), 0.0);
  EXPECT_THROW(ProjectOmega(Matrix::Zero(6, 6), mask), ArgumentError);
}

TEST(SamplingTest, SameStreamGivesNestedMasks) {
  const Rng stream(9);
  Rng a = stream, b = stream;
  const ObservationMask small = SampleBernoulli(30, 30, 0.1, a);
  const ObservationMask large = SampleBernoulli(30, 30, 0.3, b);
  const Matrix diff = large.Indicator() - small.Indicator();
  EXPECT_GE(diff.minCoeff(), 0.0);
}

TEST(NoiseTest, GaussianMoments) {
  Rng rng(6);
  const Matrix n = GaussianNoise(200, 200, 0.5, rng);
  EXPECT_NEAR(n.mean(), 0.0, 0.01);
  EXPECT_NEAR(std::sqrt(n.squaredNorm() / n.size()), 0.5, 0.01);
  EXPECT_EQ(GaussianNoise(3, 3, 0.0, rng).norm(), 0.0);
  EXPECT_THROW(GaussianNoise(3, 3, -1.0, rng), ArgumentError);
}

TEST(NoiseTest, SkewNoiseIsSkew) {
  Rng rng(7);
  const Matrix n = SkewGaussianNoise(30, 2.0, rng);
  EXPECT_EQ((n + n.transpose()).norm(), 0.0);
  EXPECT_EQ(n.diagonal().norm(), 0.0);
  EXPECT_NEAR(std::sqrt(n.squaredNorm() / (30.0 * 29.0)), 2.0, 0.2);
}

TEST(MaskIoTest, RoundTripPreservesIndicesAndValues) {
  Rng rng(8);
  const ObservationMask mask = SampleSymmetricOffdiag(12, 0.3, rng);
  const Matrix values = ProjectOmega(testing::RandomMatrix(12, 12, rng), mask);
  std::stringstream buf;
  WriteMask(buf, mask, &values);
  const MaskWithValues back = ReadMask(buf);
  EXPECT_EQ(back.mask.indices(), mask.indices());
  EXPECT_EQ(back.mask.model(), mask.model());
  EXPECT_EQ(back.mask.nominal_p(), mask.nominal_p());
  EXPECT_LE((back.values - values).norm(), 1e-15 * values.norm());
}

TEST(MaskIoTest, MalformedInputIsAnIoError) {
  std::stringstream empty;
  EXPECT_THROW(ReadMask(empty), IoError);
  std::stringstream bad_header("rows cols\n");
  EXPECT_THROW(ReadMask(bad_header), IoError);
  std::stringstream bad_line("# 3 3 bernoulli-rect 0.5\n0 x 1\n");
  EXPECT_THROW(ReadMask(bad_line), IoError);
}

}  // namespace
}  // namespace lpmc
