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
#include <string>

#include "lpmc/errors.h"

namespace lpmc {

namespace {

void RequireFactorShapes(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y) {
  const LinearParam& param = spec.param();
  if (x.rows() != param.n1() || y.rows() != param.n2() || x.cols() != param.rank() ||
      y.cols() != param.rank()) {
    throw ArgumentError("objective: factor shapes do not match the parameterization");
  }
}

// Residual X Y^T - M on the mask, in mask order. xt, yt are r x n copies so
// each entry is a dot product of two contiguous columns.
std::vector<double> MaskResidual(const ObjectiveSpec& spec, const Matrix& xt,
                                 const Matrix& yt) {
  const auto& indices = spec.mask().indices();
  const auto& values = spec.observed_values();
  std::vector<double> out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out[k] = xt.col(indices[k].row).dot(yt.col(indices[k].col)) - values[k];
  }
  return out;
}

double HingeGap(double norm, double alpha) {
  return norm > alpha ? norm - alpha : 0.0;
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(LinearParam param, Matrix observed, ObservationMask mask,
                             double p_hat, double lambda, double alpha)
    : param_(std::move(param)),
      observed_(std::move(observed)),
      mask_(std::move(mask)),
      p_hat_(p_hat),
      lambda_(lambda),
      alpha_(alpha) {
  if (observed_.rows() != param_.n1() || observed_.cols() != param_.n2() ||
      mask_.rows() != param_.n1() || mask_.cols() != param_.n2()) {
    throw ArgumentError("ObjectiveSpec: observed/mask shape does not match the parameterization");
  }
  if (!(p_hat_ > 0.0 && p_hat_ <= 1.0)) {
    throw ArgumentError("ObjectiveSpec: p_hat must lie in (0, 1]");
  }
  if (!(lambda_ >= 0.0) || std::isinf(lambda_)) {
    throw ArgumentError("ObjectiveSpec: lambda must be finite and >= 0");
  }
  if (!(alpha_ >= 0.0)) throw ArgumentError("ObjectiveSpec: alpha must be >= 0");
  RequireFinite(observed_, "ObjectiveSpec");
  values_.reserve(mask_.size());
  for (const Index& idx : mask_.indices()) values_.push_back(observed_(idx.row, idx.col));
  if (((observed_.array() != 0.0) && (mask_.Indicator().array() == 0.0)).any()) {
    throw ArgumentError("ObjectiveSpec: observed matrix has entries off the mask");
  }
}

ObjectiveSpec MakeSpec(const LinearParam& param, const Matrix& m,
                       const ObservationMask& mask, double lambda, double alpha) {
  return ObjectiveSpec(param, ProjectOmega(m, mask), mask, EstimateP(mask), lambda, alpha);
}

double RegularizerValue(const Matrix& x, double alpha) {
  if (!(alpha >= 0.0)) throw ArgumentError("regularizer_value: alpha must be >= 0");
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double s = HingeGap(x.row(i).norm(), alpha);
    total += s * s * s * s;
  }
  return total;
}

Matrix RegularizerGrad(const Matrix& x, double alpha) {
  if (!(alpha >= 0.0)) throw ArgumentError("regularizer_grad: alpha must be >= 0");
  Matrix g = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    const double s = HingeGap(norm, alpha);
    if (s > 0.0) g.row(i) = (4.0 * s * s * s / norm) * x.row(i);
  }
  return g;
}

double RegularizerHessianForm(const Matrix& x, const Matrix& d, double alpha) {
  if (x.rows() != d.rows() || x.cols() != d.cols()) {
    throw ArgumentError("regularizer_hessian_form: shape mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    const double s = HingeGap(norm, alpha);
    if (s <= 0.0) continue;
    const double along = x.row(i).dot(d.row(i)) / norm;
    const double across = d.row(i).squaredNorm() - along * along;
    total += 12.0 * s * s * along * along + 4.0 * s * s * s * across / norm;
  }
  return total;
}

ObjectiveTerms FTermsXY(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y) {
  RequireFactorShapes(spec, x, y);
  const Matrix xt = x.transpose(), yt = y.transpose();
  double fit = 0.0;
  for (double e : MaskResidual(spec, xt, yt)) fit += e * e;
  ObjectiveTerms terms;
  terms.fit = fit / (2.0 * spec.p_hat());
  terms.balance = 0.125 * (xt * x - yt * y).squaredNorm();
  if (spec.lambda() > 0.0) {
    terms.regularizer =
        spec.lambda() * (RegularizerValue(x, spec.alpha()) + RegularizerValue(y, spec.alpha()));
  }
  return terms;
}

double FValueXY(const ObjectiveSpec& spec, const Matrix& x, const Matrix& y) {
  return FTermsXY(spec, x, y).total();
}

std::pair<Matrix, Matrix> FGradXY(const ObjectiveSpec& spec, const Matrix& x,
                                  const Matrix& y) {
  RequireFactorShapes(spec, x, y);
  const Matrix xt = x.transpose(), yt = y.transpose();
  const std::vector<double> residual = MaskResidual(spec, xt, yt);
  const auto& indices = spec.mask().indices();
  const double scale = 1.0 / spec.p_hat();
  Matrix gxt = Matrix::Zero(xt.rows(), xt.cols());
  Matrix gyt = Matrix::Zero(yt.rows(), yt.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double e = scale * residual[k];
    gxt.col(indices[k].row).noalias() += e * yt.col(indices[k].col);
    gyt.col(indices[k].col).noalias() += e * xt.col(indices[k].row);
  }
  const Matrix b = xt * x - yt * y;
  Matrix gx = gxt.transpose() + 0.5 * x * b;
  Matrix gy = gyt.transpose() - 0.5 * y * b;
  if (spec.lambda() > 0.0) {
    gx += spec.lambda() * RegularizerGrad(x, spec.alpha());
    gy += spec.lambda() * RegularizerGrad(y, spec.alpha());
  }
  return {std::move(gx), std::move(gy)};
}

ObjectiveTerms FTerms(const ObjectiveSpec& spec, const Vector& theta) {
  const LinearParam& param = spec.param();
  return FTermsXY(spec, param.X(theta), param.Y(theta));
}

double FValue(const ObjectiveSpec& spec, const Vector& theta) {
  return FTerms(spec, theta).total();
}

Vector FGrad(const ObjectiveSpec& spec, const Vector& theta) {
  const LinearParam& param = spec.param();
  const auto [gx, gy] = FGradXY(spec, param.X(theta), param.Y(theta));
  return param.AdjointX(gx) + param.AdjointY(gy);
}

double FValueSubspace(const ObjectiveSpec& spec, const Matrix& theta_a,
                      const Matrix& theta_b) {
  const LinearParam& param = spec.param();
  if (param.kind() != ParamKind::kSubspace) {
    throw ArgumentError("f_value_subspace: spec is not a subspace parameterization");
  }
  const Matrix& bu = param.basis_u();
  const Matrix& bv = param.basis_v();
  if (theta_a.rows() != bu.cols() || theta_b.rows() != bv.cols() ||
      theta_a.cols() != param.rank() || theta_b.cols() != param.rank()) {
    throw ArgumentError("f_value_subspace: block shape mismatch");
  }
  const Matrix fitted = bu * theta_a * theta_b.transpose() * bv.transpose();
  const double fit = ProjectOmega(fitted - spec.observed(), spec.mask()).squaredNorm();
  const double balance =
      (theta_a.transpose() * theta_a - theta_b.transpose() * theta_b).squaredNorm();
  const double reg = RegularizerValue(bu * theta_a, spec.alpha()) +
                     RegularizerValue(bv * theta_b, spec.alpha());
  return fit / (2.0 * spec.p_hat()) + balance / 8.0 + spec.lambda() * reg;
}

double FValueSkew(const ObjectiveSpec& spec, const Matrix& theta_a, const Matrix& theta_b) {
  const LinearParam& param = spec.param();
  if (param.kind() != ParamKind::kSkew) {
    throw ArgumentError("f_value_skew: spec is not a skew parameterization");
  }
  if (theta_a.rows() != param.n1() || theta_b.rows() != param.n1() ||
      theta_a.cols() != param.rank() / 2 || theta_b.cols() != param.rank() / 2) {
    throw ArgumentError("f_value_skew: block shape mismatch");
  }
  const Matrix fitted =
      theta_a * theta_b.transpose() - theta_b * theta_a.transpose();
  const double fit = ProjectOmega(fitted - spec.observed(), spec.mask()).squaredNorm();
  const double diag_gap =
      (theta_a.transpose() * theta_a - theta_b.transpose() * theta_b).squaredNorm();
  const double cross =
      (theta_a.transpose() * theta_b + theta_b.transpose() * theta_a).squaredNorm();
  Matrix stacked(theta_b.rows(), theta_b.cols() + theta_a.cols());
  stacked << theta_b, theta_a;
  return fit / (2.0 * spec.p_hat()) + 0.25 * diag_gap + 0.25 * cross +
         2.0 * spec.lambda() * RegularizerValue(stacked, spec.alpha());
}

double FValuePsd(const ObjectiveSpec& spec, const Matrix& theta) {
  const LinearParam& param = spec.param();
  if (param.kind() != ParamKind::kPsd) {
    throw ArgumentError("f_value_psd: spec is not a psd parameterization");
  }
  if (theta.rows() != param.n1() || theta.cols() != param.rank()) {
    throw ArgumentError("f_value_psd: block shape mismatch");
  }
  const double fit =
      ProjectOmega(theta * theta.transpose() - spec.observed(), spec.mask()).squaredNorm();
  return fit / (2.0 * spec.p_hat()) +
         2.0 * spec.lambda() * RegularizerValue(theta, spec.alpha());
}

double DefaultLambda(int n1, int n2, double p_hat) {
  return 100.0 * std::sqrt(static_cast<double>(n1 + n2) * p_hat);
}

}  // namespace lpmc
