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

#include "lpmc/objective.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "lpmc/errors.h"
#include "test_util.h"

namespace lpmc {
namespace {

using testing::kAllKinds;
using testing::MakeRandomProblem;
using testing::RandomMatrix;
using testing::RandomOrthonormal;
using testing::RandomVector;

// Direct dense evaluation, used as an oracle for the mask-loop version.
double NaiveObjective(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y) {
  const Matrix ind = spec.mask().Indicator();
  const Matrix resid = (x * y.transpose() - spec.observed()).cwiseProduct(ind);
  const Matrix bal = x.transpose() * x - y.transpose() * y;
  double g = 0.0;
  for (const Matrix* f : {&x, &y}) {
    for (Eigen::Index i = 0; i < f->rows(); ++i) {
      const double gap = std::max(0.0, f->row(i).norm() - spec.alpha());
      g += std::pow(gap, 4);
    }
  }
  return resid.squaredNorm() / (2 * spec.p_hat()) + bal.squaredNorm() / 8 + spec.lambda() * g;
}

ObjectiveSpec RandomSpec(ParamKind kind, int n, int r, double p, double lambda, double alpha,
                         Rng& rng, Matrix* m_star_out = nullptr) {
  const auto problem = MakeRandomProblem(kind, n, r, 3, rng);
  const bool square_sym = kind == ParamKind::kSkew;
  const ObservationMask mask = square_sym
                                   ? SampleSymmetricOffdiag(problem.param.n1(), p, rng)
                                   : SampleBernoulli(problem.param.n1(), problem.param.n2(), p, rng);
  if (m_star_out) *m_star_out = problem.m_star;
  return ObjectiveSpec(problem.param, ProjectOmega(problem.m_star, mask), mask,
                       std::max(EstimateP(mask), 1e-3), lambda, alpha);
}

TEST(RegularizerTest, WorkedExamples) {
  Matrix x(2, 2);
  x << 3.0, 4.0, 0.0, 1.0;  // row norms 5 and 1
  EXPECT_DOUBLE_EQ(RegularizerValue(x, 3.0), 16.0);
  EXPECT_DOUBLE_EQ(RegularizerValue(x, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(RegularizerValue(x, 0.0), 625.0 + 1.0);
  EXPECT_EQ(RegularizerValue(x, std::numeric_limits<double>::infinity()), 0.0);
  const Matrix g = RegularizerGrad(x, 3.0);
  // 4 * 2^3 / 5 * (3, 4)
  EXPECT_NEAR(g(0, 0), 4 * 8 / 5.0 * 3, 1e-13);
  EXPECT_NEAR(g(0, 1), 4 * 8 / 5.0 * 4, 1e-13);
  EXPECT_EQ(g.row(1).norm(), 0.0);
  EXPECT_THROW(RegularizerValue(x, -1.0), ArgumentError);
  EXPECT_THROW(RegularizerGrad(x, std::nan("")), ArgumentError);
}

TEST(RegularizerTest, GradientMatchesFiniteDifferences) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = 2.0 * RandomMatrix(6, 3, rng);
    const double alpha = 1.5;
    const Matrix d = RandomMatrix(6, 3, rng);
    const double h = 1e-6;
    const double fd =
        (RegularizerValue(x + h * d, alpha) - RegularizerValue(x - h * d, alpha)) / (2 * h);
    const double an = (RegularizerGrad(x, alpha).array() * d.array()).sum();
    EXPECT_NEAR(fd, an, 1e-6 * (1 + std::abs(an)));
  }
}

TEST(RegularizerTest, HessianFormMatchesSecondDifferences) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = 2.0 * RandomMatrix(6, 3, rng);
    const double alpha = 1.5;
    const Matrix d = RandomMatrix(6, 3, rng);
    const double h = 1e-4;
    const double fd = (RegularizerValue(x + h * d, alpha) - 2 * RegularizerValue(x, alpha) +
                       RegularizerValue(x - h * d, alpha)) /
                      (h * h);
    const double an = RegularizerHessianForm(x, d, alpha);
    EXPECT_NEAR(fd, an, 1e-4 * (1 + std::abs(an)));
  }
}

TEST(ObjectiveSpecTest, Validation) {
  Rng rng(3);
  const LinearParam p = LinearParam::Rectangular(4, 5, 1);
  const ObservationMask mask = SampleBernoulli(4, 5, 0.5, rng);
  const Matrix obs = ProjectOmega(RandomMatrix(4, 5, rng), mask);
  EXPECT_NO_THROW(ObjectiveSpec(p, obs, mask, 0.5, 0.0, 1.0));
  EXPECT_THROW(ObjectiveSpec(p, obs, mask, 0.0, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, obs, mask, 1.5, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, obs, mask, 0.5, -1.0, 1.0), ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, obs, mask, 0.5, std::numeric_limits<double>::infinity(), 1.0),
               ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, obs, mask, 0.5, 0.0, -1.0), ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, Matrix::Ones(4, 5), mask, 0.5, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(ObjectiveSpec(p, Matrix::Zero(5, 5), mask, 0.5, 0.0, 1.0), ArgumentError);
  Matrix bad = obs;
  bad(0, 0) = std::nan("");
  EXPECT_THROW(ObjectiveSpec(p, bad, mask, 0.5, 0.0, 1.0), ArgumentError);
}

TEST(ObjectiveTest, MatchesNaiveOracleAllKinds) {
  Rng rng(4);
  for (ParamKind kind : kAllKinds) {
    for (int trial = 0; trial < 5; ++trial) {
      const ObjectiveSpec spec = RandomSpec(kind, 8, 2, 0.4, 0.7, 0.8, rng);
      const Vector theta = RandomVector(spec.param().dim(), rng);
      const Matrix x = spec.param().X(theta), y = spec.param().Y(theta);
      const double naive = NaiveObjective(spec, x, y);
      EXPECT_NEAR(FValue(spec, theta), naive, 1e-12 * (1 + naive)) << ToString(kind);
      const ObjectiveTerms t = FTerms(spec, theta);
      EXPECT_GE(t.fit, 0.0);
      EXPECT_GE(t.balance, 0.0);
      EXPECT_GE(t.regularizer, 0.0);
    }
  }
}

TEST(ObjectiveTest, GradientMatchesCentralDifferencesAllKinds) {
  Rng rng(5);
  for (ParamKind kind : kAllKinds) {
    for (int trial = 0; trial < 5; ++trial) {
      const ObjectiveSpec spec = RandomSpec(kind, 7, 2, 0.5, 0.3, 1.0, rng);
      const Vector theta = RandomVector(spec.param().dim(), rng);
      const Vector grad = FGrad(spec, theta);
      const Vector d = RandomVector(theta.size(), rng);
      const double h = 1e-6;
      const double fd = (FValue(spec, theta + h * d) - FValue(spec, theta - h * d)) / (2 * h);
      EXPECT_NEAR(fd, grad.dot(d), 1e-6 * (1 + std::abs(fd))) << ToString(kind);
    }
  }
}

TEST(ObjectiveTest, FactorGradientCoordinatewise) {
  Rng rng(6);
  const ObjectiveSpec spec = RandomSpec(ParamKind::kRectangular, 5, 2, 0.6, 0.2, 0.5, rng);
  const Matrix x = RandomMatrix(5, 2, rng), y = RandomMatrix(8, 2, rng);
  const auto [gx, gy] = FGradXY(spec, x, y);
  const double h = 1e-6;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) -= h;
      const double fd = (FValueXY(spec, xp, y) - FValueXY(spec, xm, y)) / (2 * h);
      EXPECT_NEAR(gx(i, j), fd, 1e-6 * (1 + std::abs(fd)));
    }
  }
  for (int i = 0; i < 8; ++i) {
    Matrix yp = y, ym = y;
    yp(i, 1) += h;
    ym(i, 1) -= h;
    const double fd = (FValueXY(spec, x, yp) - FValueXY(spec, x, ym)) / (2 * h);
    EXPECT_NEAR(gy(i, 1), fd, 1e-6 * (1 + std::abs(fd)));
  }
}

TEST(ObjectiveTest, ZeroAtBalancedGroundTruth) {
  Rng rng(7);
  for (ParamKind kind : kAllKinds) {
    Matrix m_star;
    const ObjectiveSpec spec = RandomSpec(kind, 8, 2, 0.5, 1.0, 1e6, rng, &m_star);
    const WitnessCertificate cert =
        Witness(spec.param(), RandomVector(spec.param().dim(), rng), m_star);
    ASSERT_TRUE(cert.passes());
    const double scale = m_star.squaredNorm();
    EXPECT_LE(FValue(spec, cert.xi), 1e-14 * scale) << ToString(kind);
    EXPECT_LE(FGrad(spec, cert.xi).norm(), 1e-10 * std::sqrt(scale) * m_star.norm())
        << ToString(kind);
  }
}

TEST(ObjectiveTest, InvariantUnderOrthogonalFactorRotation) {
  Rng rng(8);
  const ObjectiveSpec spec = RandomSpec(ParamKind::kRectangular, 6, 3, 0.5, 0.4, 0.7, rng);
  const Matrix x = RandomMatrix(6, 3, rng), y = RandomMatrix(9, 3, rng);
  const Matrix q = RandomOrthonormal(3, 3, rng);
  const double base = FValueXY(spec, x, y);
  EXPECT_NEAR(FValueXY(spec, x * q, y * q), base, 1e-11 * (1 + base));
}

TEST(ObjectiveTest, SpecializedFormsAgree) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const ObjectiveSpec sub = RandomSpec(ParamKind::kSubspace, 9, 2, 0.5, 0.5, 0.3, rng);
    const Vector ts = RandomVector(sub.param().dim(), rng);
    const auto [ta, tb] = sub.param().Unpack(ts);
    const double gs = FValue(sub, ts);
    EXPECT_NEAR(FValueSubspace(sub, ta, tb), gs, 1e-12 * (1 + gs));

    const ObjectiveSpec skew = RandomSpec(ParamKind::kSkew, 8, 4, 0.5, 0.5, 0.3, rng);
    const Vector tk = RandomVector(skew.param().dim(), rng);
    const auto [ka, kb] = skew.param().Unpack(tk);
    const double gk = FValue(skew, tk);
    EXPECT_NEAR(FValueSkew(skew, ka, kb), gk, 1e-12 * (1 + gk));

    const ObjectiveSpec psd = RandomSpec(ParamKind::kPsd, 8, 2, 0.5, 0.5, 0.3, rng);
    const Vector tp = RandomVector(psd.param().dim(), rng);
    const double gp = FValue(psd, tp);
    EXPECT_NEAR(FValuePsd(psd, psd.param().Unpack(tp).first), gp, 1e-12 * (1 + gp));
  }
  const ObjectiveSpec psd = RandomSpec(ParamKind::kPsd, 5, 2, 0.5, 0.5, 0.3, rng);
  EXPECT_THROW(FValueSkew(psd, Matrix::Zero(5, 1), Matrix::Zero(5, 1)), ArgumentError);
}

TEST(ObjectiveTest, DefaultTuning) {
  EXPECT_DOUBLE_EQ(DefaultLambda(500, 500, 0.04), 100.0 * std::sqrt(40.0));
  EXPECT_EQ(kDefaultAlpha, 100.0);
}

TEST(ObjectiveTest, MakeSpecUsesEmpiricalRate) {
  Rng rng(10);
  const ObservationMask mask = SampleBernoulli(10, 10, 0.3, rng);
  const ObjectiveSpec spec =
      MakeSpec(LinearParam::Rectangular(10, 10, 1), RandomMatrix(10, 10, rng), mask, 0, 1);
  EXPECT_DOUBLE_EQ(spec.p_hat(), mask.size() / 100.0);
  EXPECT_EQ(spec.observed_values().size(), mask.size());
}

}  // namespace
}  // namespace lpmc
