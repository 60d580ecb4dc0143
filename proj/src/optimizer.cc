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

#include "lpmc/optimizer.h"

#include <cmath>
#include <string>

#include "lpmc/errors.h"
#include "lpmc/rng.h"

namespace lpmc {

std::string_view ToString(Termination termination) {
  switch (termination) {
    case Termination::kGradTol:
      return "grad-tol";
    case Termination::kIterCap:
      return "iter-cap";
  }
  return "unknown";
}

LineSearchResult LineSearch(const std::function<double(const Vector&)>& f,
                            const Vector& theta, const Vector& grad, double f_theta,
                            double min_step) {
  if (theta.size() != grad.size()) throw ArgumentError("line_search: length mismatch");
  if (!(min_step > 0.0)) throw ArgumentError("line_search: min_step must be > 0");
  LineSearchResult result;
  double step = 1.0;
  for (int t = 0; step > min_step; ++t, step *= 0.5) {
    Vector next = theta - step * grad;
    const double value = f(next);
    if (value <= f_theta) {
      result.step = step;
      result.exponent = t;
      result.theta_next = std::move(next);
      result.value_next = value;
      return result;
    }
    result.exponent = t + 1;
  }
  result.step = min_step;
  result.clamped = true;
  result.theta_next = theta - min_step * grad;
  result.value_next = f(result.theta_next);
  return result;
}

LineSearchResult LineSearch(const ObjectiveSpec& spec, const Vector& theta,
                            const Vector& grad, double min_step) {
  auto f = [&spec](const Vector& v) { return FValue(spec, v); };
  return LineSearch(f, theta, grad, f(theta), min_step);
}

SolveResult Solve(const ObjectiveSpec& spec, const SolveConfig& config) {
  if (!(config.init_scale >= 0.0)) {
    throw ArgumentError("solve: init_scale must be >= 0");
  }
  Rng rng(config.seed);
  Vector theta0(spec.param().dim());
  for (Eigen::Index i = 0; i < theta0.size(); ++i) {
    theta0(i) = config.init_scale * rng.Normal();
  }
  return Solve(spec, config, theta0);
}

SolveResult Solve(const ObjectiveSpec& spec, const SolveConfig& config,
                  const Vector& theta0) {
  if (config.max_iters < 1) throw ArgumentError("solve: max_iters must be >= 1");
  if (!(config.grad_tol_sq > 0.0) || !(config.min_step > 0.0)) {
    throw ArgumentError("solve: tolerances must be > 0");
  }
  if (theta0.size() != spec.param().dim()) {
    throw ArgumentError("solve: theta0 has the wrong length");
  }
  auto f = [&spec](const Vector& v) { return FValue(spec, v); };

  SolveResult result;
  Vector theta = theta0;
  double value = f(theta);
  result.objective_trace.push_back(value);
  if (!std::isfinite(value)) {
    throw NumericFailure("solve: non-finite objective at the initial point", value,
                         result.objective_trace);
  }
  while (true) {
    const Vector grad = FGrad(spec, theta);
    result.grad_norm_sq_final = grad.squaredNorm();
    if (result.grad_norm_sq_final <= config.grad_tol_sq) {
      result.termination = Termination::kGradTol;
      break;
    }
    if (result.iterations >= config.max_iters) {
      result.termination = Termination::kIterCap;
      break;
    }
    LineSearchResult step = LineSearch(f, theta, grad, value, config.min_step);
    theta = std::move(step.theta_next);
    value = step.value_next;
    ++result.iterations;
    if (step.clamped) ++result.clamped_steps;
    result.objective_trace.push_back(value);
    if (!std::isfinite(value)) {
      throw NumericFailure(
          "solve: non-finite objective at iteration " + std::to_string(result.iterations),
          value, result.objective_trace);
    }
  }
  const LinearParam& param = spec.param();
  result.m_hat = param.X(theta) * param.Y(theta).transpose();
  result.theta_hat = std::move(theta);
  return result;
}

}  // namespace lpmc
