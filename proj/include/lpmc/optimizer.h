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

#ifndef LPMC_OPTIMIZER_H_
#define LPMC_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "lpmc/linalg.h"
#include "lpmc/objective.h"

namespace lpmc {

struct SolveConfig {
  int max_iters = 500;
  double grad_tol_sq = 1e-10;
  double min_step = 1e-10;
  double init_scale = 1.0;  // theta_0 entries i.i.d. N(0, init_scale^2)
  std::uint64_t seed = 0;
};

enum class Termination { kGradTol, kIterCap };
std::string_view ToString(Termination termination);

struct SolveResult {
  Vector theta_hat;
  Matrix m_hat;                         // X(theta_hat) Y(theta_hat)^T
  std::vector<double> objective_trace;  // f(theta_0), then one value per step
  double grad_norm_sq_final = 0.0;
  int iterations = 0;
  int clamped_steps = 0;  // steps taken at min_step without a non-increase
  Termination termination = Termination::kIterCap;
};

struct LineSearchResult {
  double step = 0.0;
  Vector theta_next;
  double value_next = 0.0;
  int exponent = 0;      // t of the accepted step 2^-t
  bool clamped = false;  // no 2^-t above min_step gave f(next) <= f(theta)
};

// Halving search: step = 2^-t for the first t = 0, 1, ... with
// f(theta - 2^-t grad) <= f(theta), as long as 2^-t > min_step. Otherwise the
// step min_step is taken regardless of the value it produces.
LineSearchResult LineSearch(const std::function<double(const Vector&)>& f,
                            const Vector& theta, const Vector& grad, double f_theta,
                            double min_step = 1e-10);
LineSearchResult LineSearch(const ObjectiveSpec& spec, const Vector& theta,
                            const Vector& grad, double min_step = 1e-10);

// Gradient descent from a seeded Gaussian start (or from `theta0`). Stops when
// ||grad||^2 <= grad_tol_sq or after max_iters steps. Throws NumericFailure,
// with the trace so far attached, if the objective becomes non-finite.
SolveResult Solve(const ObjectiveSpec& spec, const SolveConfig& config);
SolveResult Solve(const ObjectiveSpec& spec, const SolveConfig& config,
                  const Vector& theta0);

}  // namespace lpmc

#endif  // LPMC_OPTIMIZER_H_
