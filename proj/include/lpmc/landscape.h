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

#ifndef LPMC_LANDSCAPE_H_
#define LPMC_LANDSCAPE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lpmc/linalg.h"
#include "lpmc/objective.h"
#include "lpmc/parameterization.h"
#include "lpmc/sampling.h"

namespace lpmc {

struct GroundTruthProfile {
  int r = 0;
  double sigma1 = 0.0;
  double sigma_r = 0.0;
  double kappa = 0.0;  // sigma1 / sigma_r
  double mu = 0.0;     // max((n1/r) ||U*||_{2,inf}^2, (n2/r) ||V*||_{2,inf}^2)
  Matrix u_star;       // n1 x r
  Matrix v_star;       // n2 x r
};

// Throws DegeneracyError when the numerical rank of m_star is below r. When it
// is above r, the leading r singular triplets are used.
GroundTruthProfile Profile(const Matrix& m_star, int r);

// K_f(X, Y; D_X, D_Y) = D^T Hess f D - 4 <grad f, D> for the factor-level
// objective, with the Hessian form in closed form.
double AuxKf(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y,
             const Matrix& dx, const Matrix& dy);

// K_f~(theta; delta), evaluated on the parameter vector: the gradient term from
// FGrad, the second derivative of the quartic fit + balance part from five
// symmetric evaluations along delta (exact for a quartic), and the regularizer
// part from its row-wise Hessian form.
double AuxKtilde(const ObjectiveSpec& spec, const Vector& theta, const Vector& delta);

struct KReport {
  double k_tilde = 0.0;  // AuxKtilde(theta, theta - xi)
  double k_f = 0.0;      // AuxKf at (X(theta), Y(theta); X(delta), Y(delta))
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double scale = 0.0;  // 1 + |k_tilde| + sum |k_i|

  double bound() const { return k1 + k2 + k3 + k4; }
  bool identity_holds() const;  // |k_tilde - k_f| <= 1e-8 (1 + |k_f|)
  bool bound_holds() const;     // k_tilde <= bound() + 1e-8 scale
};

// Evaluates K1..K4 for delta = theta - xi. `noise` is N with observed =
// P_Omega(M* + N). Throws ContractViolation unless xi certifies for m_star.
KReport KDecomposition(const ObjectiveSpec& spec, const Vector& theta, const Vector& xi,
                       const Matrix& m_star, const Matrix& noise);

// Computable upper bounds for psi: ||U~^T P_Omega(N) V~|| for the subspace kind,
// ||P_Omega(N)|| otherwise.
double PsiSurrogate(const ObservationMask& mask, const Matrix& noise,
                    const LinearParam& param);

struct RateLine {
  std::string name;
  double value = 0.0;  // the quantity being checked (p, lambda or alpha)
  double lower = 0.0;
  double upper = 0.0;  // +inf for a one-sided condition
  std::string binding;  // which term of a max determined `lower`
  bool pass = false;
};

struct RateReport {
  std::array<RateLine, 3> lines;  // sampling rate, lambda, alpha
  bool all_pass() const;
};

RateReport RateConditions(const GroundTruthProfile& profile, double p, double lambda,
                          double alpha, int n1, int n2, double c1, double c2);

// The only numerically stated constant of the analysis (C_0).
inline constexpr double kC0Preset = 5e5;

struct ConcentrationTrial {
  double omega_gap = 0.0;  // ||Omega - p J||, p = nominal_p
  double lhs = 0.0;        // |<P(AC^T), P(BD^T)> - p <AC^T, BD^T>|
  double middle = 0.0;     // ||Omega - pJ|| sqrt(sum ...) sqrt(sum ...)
  double rhs = 0.0;        // (1/2) ||Omega - pJ|| (sum ... + sum ...)
  double ratio = 0.0;      // ||Omega - pJ|| / sqrt(n_max p) (0 when p = 0)
  bool holds = false;      // lhs <= middle <= rhs up to rounding
};

struct ConcentrationReport {
  std::vector<ConcentrationTrial> trials;
  bool all_hold() const;
  double max_ratio() const;
};

// For `trials` random Gaussian (A, B, C, D) of width r, checks the
// deterministic sampled-inner-product inequality for this mask.
ConcentrationReport ConcentrationSpotchecks(const ObservationMask& mask, int trials, int r,
                                            std::uint64_t seed);

// max over random M = U* A^T + B V*^T of | ||P_Omega(M)||^2 / p - ||M||^2 | / ||M||^2.
// Reported only; the 1e-4 level needs far larger p than desk runs use.
double RipDeviation(const ObservationMask& mask, const GroundTruthProfile& profile,
                    int trials, std::uint64_t seed);

struct BasicPropertiesReport {
  double sqrt_sigma1 = 0.0, sqrt_sigma_r = 0.0;
  double sigma_max_u = 0.0, sigma_max_v = 0.0;  // expected sqrt(sigma1)
  double sigma_r_u = 0.0, sigma_r_v = 0.0;      // expected sqrt(sigma_r)
  double row_u = 0.0, row_v = 0.0;              // ||U||_{2,inf}^2, ||V||_{2,inf}^2
  double row_bound_u = 0.0, row_bound_v = 0.0;  // mu r sigma1 / n
  double colspan_gap = 0.0;  // max of ||(I - U* U*^T) U||, ||(I - V* V*^T) V||
  bool passes() const;
};

BasicPropertiesReport BasicProperties(const LinearParam& param, const Vector& xi,
                                      const GroundTruthProfile& profile);

}  // namespace lpmc

#endif  // LPMC_LANDSCAPE_H_
