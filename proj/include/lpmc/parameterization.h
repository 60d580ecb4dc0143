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

#ifndef LPMC_PARAMETERIZATION_H_
#define LPMC_PARAMETERIZATION_H_

#include <string_view>
#include <utility>

#include "lpmc/linalg.h"

namespace lpmc {

enum class ParamKind { kRectangular, kPsd, kSubspace, kSkew };

std::string_view ToString(ParamKind kind);
ParamKind ParseParamKind(std::string_view name);

// A linear map theta -> (X(theta), Y(theta)), X in R^{n1 x r}, Y in R^{n2 x r}.
//
// theta is the column-major vec of two stacked blocks (one for psd):
//   rectangular  [Theta_X (n1 x r), Theta_Y (n2 x r)]     X = Theta_X, Y = Theta_Y
//   psd          [Theta (n x r)]                          X = Y = Theta
//   subspace     [Theta_A (s1 x r), Theta_B (s2 x r)]     X = U~ Theta_A, Y = V~ Theta_B
//   skew         [Theta_A (n x r/2), Theta_B (n x r/2)]   X = [Theta_A, -Theta_B],
//                                                         Y = [Theta_B,  Theta_A]
class LinearParam {
 public:
  static LinearParam Rectangular(int n1, int n2, int r);
  static LinearParam Psd(int n, int r);
  // The bases are re-orthonormalized (with a warning on stderr) when their
  // Gram residual exceeds 1e-12.
  static LinearParam Subspace(const Matrix& basis_u, const Matrix& basis_v, int r);
  static LinearParam Skew(int n, int r);

  ParamKind kind() const { return kind_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int rank() const { return r_; }
  int dim() const { return dim_; }
  const Matrix& basis_u() const { return basis_u_; }
  const Matrix& basis_v() const { return basis_v_; }

  Matrix X(const Vector& theta) const;
  Matrix Y(const Vector& theta) const;

  // Transposes of the linear maps: <X(delta), g> = <delta, AdjointX(g)>.
  Vector AdjointX(const Matrix& g) const;
  Vector AdjointY(const Matrix& g) const;

  // Shapes of the two parameter blocks (second is 0 x 0 for psd).
  std::pair<int, int> first_block_shape() const;
  std::pair<int, int> second_block_shape() const;

  // Split theta into its blocks / assemble theta from blocks.
  std::pair<Matrix, Matrix> Unpack(const Vector& theta) const;
  Vector Pack(const Matrix& first, const Matrix& second = Matrix()) const;

 private:
  LinearParam(ParamKind kind, int n1, int n2, int r);
  void RequireLength(const Vector& theta, const char* op) const;

  ParamKind kind_;
  int n1_;
  int n2_;
  int r_;
  int dim_ = 0;
  Matrix basis_u_;
  Matrix basis_v_;
};

// A candidate xi for the correlated parametric factorization of m_star with
// respect to theta, with the measured residuals of its three conditions:
//   fit      ||M* - X(xi) Y(xi)^T||_F / ||M*||_F
//   balance  ||X(xi)^T X(xi) - Y(xi)^T Y(xi)||_F
//   corr     smallest eigenvalue of the symmetric part of
//            X(theta)^T X(xi) + Y(theta)^T Y(xi)
struct WitnessCertificate {
  Vector xi;
  double residual_fit = 0.0;
  double residual_balance = 0.0;
  double min_corr_eig = 0.0;
  double m_star_norm = 0.0;  // ||M*||_F
  double corr_scale = 0.0;   // ||X(theta)|| ||X(xi)|| + ||Y(theta)|| ||Y(xi)||

  bool passes() const;
};

// Measures the three conditions for a given xi.
WitnessCertificate Certify(const LinearParam& param, const Vector& theta,
                           const Vector& xi, const Matrix& m_star);

// Rotation-based witnesses. Each throws DegeneracyError when m_star cannot be
// represented by the parameterization (outside the subspace bases, odd rank
// or non-skew for the skew kind, indefinite for psd, rank above r).
WitnessCertificate WitnessRectangular(const LinearParam& param, const Vector& theta,
                                      const Matrix& m_star);
WitnessCertificate WitnessSubspace(const LinearParam& param, const Vector& theta,
                                   const Matrix& m_star);
WitnessCertificate WitnessSkew(const LinearParam& param, const Vector& theta,
                               const Matrix& m_star);
WitnessCertificate WitnessPsd(const LinearParam& param, const Vector& theta,
                              const Matrix& m_star);

// Dispatches on param.kind().
WitnessCertificate Witness(const LinearParam& param, const Vector& theta,
                           const Matrix& m_star);

}  // namespace lpmc

#endif  // LPMC_PARAMETERIZATION_H_
