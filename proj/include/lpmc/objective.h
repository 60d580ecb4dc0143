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

#ifndef LPMC_OBJECTIVE_H_
#define LPMC_OBJECTIVE_H_

#include <utility>
#include <vector>

#include "lpmc/linalg.h"
#include "lpmc/parameterization.h"
#include "lpmc/sampling.h"

namespace lpmc {

// The data of one completion problem. `observed` is the dense n1 x n2 matrix
// P_Omega(M* + N); it must vanish off the mask. lambda >= 0, alpha >= 0
// (alpha may be +inf, which switches the regularizer off).
class ObjectiveSpec {
 public:
  ObjectiveSpec(LinearParam param, Matrix observed, ObservationMask mask,
                double p_hat, double lambda, double alpha);

  const LinearParam& param() const { return param_; }
  const Matrix& observed() const { return observed_; }
  const ObservationMask& mask() const { return mask_; }
  double p_hat() const { return p_hat_; }
  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }

  // Observed entries in mask order.
  const std::vector<double>& observed_values() const { return values_; }

 private:
  LinearParam param_;
  Matrix observed_;
  ObservationMask mask_;
  double p_hat_;
  double lambda_;
  double alpha_;
  std::vector<double> values_;
};

// Convenience: p_hat from the mask, observed = P_Omega(m).
ObjectiveSpec MakeSpec(const LinearParam& param, const Matrix& m,
                       const ObservationMask& mask, double lambda, double alpha);

// G_alpha(X) = sum over rows of (||x_i|| - alpha)_+^4.
double RegularizerValue(const Matrix& x, double alpha);
// Row i: 4 (||x_i|| - alpha)_+^3 x_i / ||x_i||.
Matrix RegularizerGrad(const Matrix& x, double alpha);
// Second directional derivative of G_alpha at x along d. With s = ||x_i|| - alpha
// and u = x_i / ||x_i||, row i contributes
//   12 s^2 (u.d_i)^2 + 4 s^3 (||d_i||^2 - (u.d_i)^2) / ||x_i||   when s > 0.
double RegularizerHessianForm(const Matrix& x, const Matrix& d, double alpha);

struct ObjectiveTerms {
  double fit = 0.0;          // (1/2p) ||P_Omega(X Y^T - M)||^2
  double balance = 0.0;      // (1/8) ||X^T X - Y^T Y||^2
  double regularizer = 0.0;  // lambda (G(X) + G(Y))
  double total() const { return fit + balance + regularizer; }
};

// Factor-level objective f(X, Y) with the regularizer.
ObjectiveTerms FTermsXY(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y);
double FValueXY(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y);
// (G_X, G_Y) = gradient of f with respect to X and Y.
std::pair<Matrix, Matrix> FGradXY(const ObjectiveSpec& spec, const Matrix& x,
                                  const Matrix& y);

ObjectiveTerms FTerms(const ObjectiveSpec& spec, const Vector& theta);
double FValue(const ObjectiveSpec& spec, const Vector& theta);
Vector FGrad(const ObjectiveSpec& spec, const Vector& theta);

// Closed forms written directly in the block variables.
double FValueSubspace(const ObjectiveSpec& spec, const Matrix& theta_a,
                      const Matrix& theta_b);
double FValueSkew(const ObjectiveSpec& spec, const Matrix& theta_a,
                  const Matrix& theta_b);
double FValuePsd(const ObjectiveSpec& spec, const Matrix& theta);

// Default tuning of the experiments: lambda = 100 sqrt((n1 + n2) p_hat).
double DefaultLambda(int n1, int n2, double p_hat);
inline constexpr double kDefaultAlpha = 100.0;

}  // namespace lpmc

#endif  // LPMC_OBJECTIVE_H_
