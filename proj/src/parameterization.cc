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

#include "lpmc/parameterization.h"

#include <complex>
#include <iostream>
#include <string>

#include "lpmc/errors.h"

namespace lpmc {

namespace {

constexpr double kGramTolerance = 1e-12;
constexpr double kCertificateTolerance = 1e-8;

Matrix RequireOrthonormal(const Matrix& basis, const char* name) {
  RequireFinite(basis, name);
  const Eigen::Index s = basis.cols();
  const double residual =
      (basis.transpose() * basis - Matrix::Identity(s, s)).norm();
  if (residual <= kGramTolerance) return basis;
  std::cerr << "warning: " << name << " is not orthonormal (Gram residual "
            << residual << "); re-orthonormalizing\n";
  Matrix q = OrthonormalizeColumns(basis);
  if (ComputeReducedSvd(basis).rank() < s) {
    throw ArgumentError(std::string(name) + ": basis columns are linearly dependent");
  }
  return q;
}

// Balanced factors of a matrix of rank <= r: S = A B^T with A^T A = B^T B,
// padded with zero columns up to r.
std::pair<Matrix, Matrix> BalancedFactors(const Matrix& s, int r) {
  const ReducedSvd svd = ComputeReducedSvd(s);
  if (svd.rank() > r) {
    throw DegeneracyError("witness: ground truth has rank " +
                          std::to_string(svd.rank()) + " > r = " + std::to_string(r));
  }
  const Vector root = svd.sigma.cwiseSqrt();
  Matrix a = Matrix::Zero(s.rows(), r);
  Matrix b = Matrix::Zero(s.cols(), r);
  a.leftCols(svd.rank()) = svd.u * root.asDiagonal();
  b.leftCols(svd.rank()) = svd.v * root.asDiagonal();
  return {a, b};
}

// Orthogonal T with c * T symmetric positive semidefinite: c = A D B^T,
// T = B A^T gives c T = A D A^T.
Matrix RotationToPsd(const Matrix& c) {
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().transpose();
}

double FrobeniusOrOne(const Matrix& m) {
  const double norm = m.norm();
  return norm > 0.0 ? norm : 1.0;
}

}  // namespace

std::string_view ToString(ParamKind kind) {
  switch (kind) {
    case ParamKind::kRectangular:
      return "rectangular";
    case ParamKind::kPsd:
      return "psd";
    case ParamKind::kSubspace:
      return "subspace";
    case ParamKind::kSkew:
      return "skew";
  }
  return "unknown";
}

ParamKind ParseParamKind(std::string_view name) {
  if (name == "rectangular" || name == "rect") return ParamKind::kRectangular;
  if (name == "psd") return ParamKind::kPsd;
  if (name == "subspace") return ParamKind::kSubspace;
  if (name == "skew") return ParamKind::kSkew;
  throw ArgumentError("unknown parameterization kind: " + std::string(name));
}

LinearParam::LinearParam(ParamKind kind, int n1, int n2, int r)
    : kind_(kind), n1_(n1), n2_(n2), r_(r) {
  if (n1 < 1 || n2 < 1 || r < 1) {
    throw ArgumentError("LinearParam: n1, n2, r must be positive");
  }
}

LinearParam LinearParam::Rectangular(int n1, int n2, int r) {
  LinearParam param(ParamKind::kRectangular, n1, n2, r);
  param.dim_ = (n1 + n2) * r;
  return param;
}

LinearParam LinearParam::Psd(int n, int r) {
  LinearParam param(ParamKind::kPsd, n, n, r);
  param.dim_ = n * r;
  return param;
}

LinearParam LinearParam::Subspace(const Matrix& basis_u, const Matrix& basis_v, int r) {
  LinearParam param(ParamKind::kSubspace, static_cast<int>(basis_u.rows()),
                    static_cast<int>(basis_v.rows()), r);
  if (basis_u.cols() > basis_u.rows() || basis_v.cols() > basis_v.rows()) {
    throw ArgumentError("LinearParam::Subspace: basis has more columns than rows");
  }
  param.basis_u_ = RequireOrthonormal(basis_u, "basis_u");
  param.basis_v_ = RequireOrthonormal(basis_v, "basis_v");
  param.dim_ = static_cast<int>(basis_u.cols() + basis_v.cols()) * r;
  return param;
}

LinearParam LinearParam::Skew(int n, int r) {
  if (r % 2 != 0) throw ArgumentError("LinearParam::Skew: r must be even");
  LinearParam param(ParamKind::kSkew, n, n, r);
  param.dim_ = n * r;
  return param;
}

std::pair<int, int> LinearParam::first_block_shape() const {
  switch (kind_) {
    case ParamKind::kRectangular:
    case ParamKind::kPsd:
      return {n1_, r_};
    case ParamKind::kSubspace:
      return {static_cast<int>(basis_u_.cols()), r_};
    case ParamKind::kSkew:
      return {n1_, r_ / 2};
  }
  return {0, 0};
}

std::pair<int, int> LinearParam::second_block_shape() const {
  switch (kind_) {
    case ParamKind::kRectangular:
      return {n2_, r_};
    case ParamKind::kPsd:
      return {0, 0};
    case ParamKind::kSubspace:
      return {static_cast<int>(basis_v_.cols()), r_};
    case ParamKind::kSkew:
      return {n1_, r_ / 2};
  }
  return {0, 0};
}

void LinearParam::RequireLength(const Vector& theta, const char* op) const {
  if (theta.size() != dim_) {
    throw ArgumentError(std::string(op) + ": theta has length " +
                        std::to_string(theta.size()) + ", expected " +
                        std::to_string(dim_));
  }
}

std::pair<Matrix, Matrix> LinearParam::Unpack(const Vector& theta) const {
  RequireLength(theta, "unpack");
  const auto [r1, c1] = first_block_shape();
  const auto [r2, c2] = second_block_shape();
  Matrix first = Eigen::Map<const Matrix>(theta.data(), r1, c1);
  Matrix second = Eigen::Map<const Matrix>(theta.data() + r1 * c1, r2, c2);
  return {std::move(first), std::move(second)};
}

Vector LinearParam::Pack(const Matrix& first, const Matrix& second) const {
  const auto [r1, c1] = first_block_shape();
  const auto [r2, c2] = second_block_shape();
  if (first.rows() != r1 || first.cols() != c1 ||
      (r2 * c2 > 0 && (second.rows() != r2 || second.cols() != c2))) {
    throw ArgumentError("pack: block shape mismatch");
  }
  Vector theta(dim_);
  Eigen::Map<Matrix>(theta.data(), r1, c1) = first;
  if (r2 * c2 > 0) Eigen::Map<Matrix>(theta.data() + r1 * c1, r2, c2) = second;
  return theta;
}

Matrix LinearParam::X(const Vector& theta) const {
  auto [a, b] = Unpack(theta);
  switch (kind_) {
    case ParamKind::kRectangular:
    case ParamKind::kPsd:
      return a;
    case ParamKind::kSubspace:
      return basis_u_ * a;
    case ParamKind::kSkew: {
      Matrix x(n1_, r_);
      x << a, -b;
      return x;
    }
  }
  return Matrix();
}

Matrix LinearParam::Y(const Vector& theta) const {
  auto [a, b] = Unpack(theta);
  switch (kind_) {
    case ParamKind::kRectangular:
      return b;
    case ParamKind::kPsd:
      return a;
    case ParamKind::kSubspace:
      return basis_v_ * b;
    case ParamKind::kSkew: {
      Matrix y(n2_, r_);
      y << b, a;
      return y;
    }
  }
  return Matrix();
}

Vector LinearParam::AdjointX(const Matrix& g) const {
  if (g.rows() != n1_ || g.cols() != r_) {
    throw ArgumentError("adjoint_x: gradient block must be n1 x r");
  }
  const auto [r2, c2] = second_block_shape();
  const Matrix zero2 = Matrix::Zero(r2, c2);
  switch (kind_) {
    case ParamKind::kRectangular:
      return Pack(g, zero2);
    case ParamKind::kPsd:
      return Pack(g);
    case ParamKind::kSubspace:
      return Pack(basis_u_.transpose() * g, zero2);
    case ParamKind::kSkew:
      return Pack(g.leftCols(r_ / 2), -g.rightCols(r_ / 2));
  }
  return Vector();
}

Vector LinearParam::AdjointY(const Matrix& g) const {
  if (g.rows() != n2_ || g.cols() != r_) {
    throw ArgumentError("adjoint_y: gradient block must be n2 x r");
  }
  const auto [r1, c1] = first_block_shape();
  const Matrix zero1 = Matrix::Zero(r1, c1);
  switch (kind_) {
    case ParamKind::kRectangular:
      return Pack(zero1, g);
    case ParamKind::kPsd:
      return Pack(g);
    case ParamKind::kSubspace:
      return Pack(zero1, basis_v_.transpose() * g);
    case ParamKind::kSkew:
      return Pack(g.rightCols(r_ / 2), g.leftCols(r_ / 2));
  }
  return Vector();
}

bool WitnessCertificate::passes() const {
  return residual_fit <= kCertificateTolerance &&
         residual_balance <= kCertificateTolerance * m_star_norm &&
         min_corr_eig >= -kCertificateTolerance * corr_scale;
}

WitnessCertificate Certify(const LinearParam& param, const Vector& theta,
                           const Vector& xi, const Matrix& m_star) {
  if (m_star.rows() != param.n1() || m_star.cols() != param.n2()) {
    throw ArgumentError("certify: ground truth shape mismatch");
  }
  const Matrix x_theta = param.X(theta), y_theta = param.Y(theta);
  const Matrix x_xi = param.X(xi), y_xi = param.Y(xi);

  WitnessCertificate cert;
  cert.xi = xi;
  cert.m_star_norm = m_star.norm();
  cert.residual_fit = (m_star - x_xi * y_xi.transpose()).norm() / FrobeniusOrOne(m_star);
  cert.residual_balance =
      (x_xi.transpose() * x_xi - y_xi.transpose() * y_xi).norm();
  const Matrix corr = x_theta.transpose() * x_xi + y_theta.transpose() * y_xi;
  const Matrix sym = 0.5 * (corr + corr.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  cert.min_corr_eig = eig.eigenvalues().minCoeff();
  cert.corr_scale = x_theta.norm() * x_xi.norm() + y_theta.norm() * y_xi.norm();
  return cert;
}

WitnessCertificate WitnessRectangular(const LinearParam& param, const Vector& theta,
                                      const Matrix& m_star) {
  if (param.kind() != ParamKind::kRectangular) {
    throw ArgumentError("witness_rectangular: wrong parameterization kind");
  }
  if (m_star.rows() != param.n1() || m_star.cols() != param.n2()) {
    throw ArgumentError("witness_rectangular: ground truth shape mismatch");
  }
  RequireFinite(m_star, "witness_rectangular");
  const auto [xi_x, xi_y] = BalancedFactors(m_star, param.rank());
  const auto [theta_x, theta_y] = param.Unpack(theta);
  const Matrix t = RotationToPsd(theta_x.transpose() * xi_x + theta_y.transpose() * xi_y);
  return Certify(param, theta, param.Pack(xi_x * t, xi_y * t), m_star);
}

WitnessCertificate WitnessSubspace(const LinearParam& param, const Vector& theta,
                                   const Matrix& m_star) {
  if (param.kind() != ParamKind::kSubspace) {
    throw ArgumentError("witness_subspace: wrong parameterization kind");
  }
  if (m_star.rows() != param.n1() || m_star.cols() != param.n2()) {
    throw ArgumentError("witness_subspace: ground truth shape mismatch");
  }
  RequireFinite(m_star, "witness_subspace");
  const Matrix& bu = param.basis_u();
  const Matrix& bv = param.basis_v();
  const Matrix core = bu.transpose() * m_star * bv;  // S = U~^T M* V~
  if ((bu * core * bv.transpose() - m_star).norm() >
      kCertificateTolerance * FrobeniusOrOne(m_star)) {
    throw DegeneracyError(
        "witness_subspace: ground truth is not representable in the bases");
  }
  const auto [xi_a, xi_b] = BalancedFactors(core, param.rank());
  const auto [theta_a, theta_b] = param.Unpack(theta);
  const Matrix t = RotationToPsd(theta_a.transpose() * xi_a + theta_b.transpose() * xi_b);
  return Certify(param, theta, param.Pack(xi_a * t, xi_b * t), m_star);
}

WitnessCertificate WitnessSkew(const LinearParam& param, const Vector& theta,
                               const Matrix& m_star) {
  if (param.kind() != ParamKind::kSkew) {
    throw ArgumentError("witness_skew: wrong parameterization kind");
  }
  if (m_star.rows() != param.n1() || m_star.cols() != param.n2()) {
    throw ArgumentError("witness_skew: ground truth shape mismatch");
  }
  const YoulaDecomposition youla = YoulaDecompose(m_star);
  const int half = param.rank() / 2;
  if (youla.lambdas.size() > half) {
    throw DegeneracyError("witness_skew: ground truth rank exceeds r");
  }
  const int pairs = static_cast<int>(youla.lambdas.size());
  const Vector root = youla.lambdas.cwiseSqrt();
  Matrix star_a = Matrix::Zero(param.n1(), half);
  Matrix star_b = Matrix::Zero(param.n1(), half);
  star_a.leftCols(pairs) = youla.phis * root.asDiagonal();
  star_b.leftCols(pairs) = youla.psis * root.asDiagonal();

  // (Theta_A + i Theta_B)^H (Xi_A* + i Xi_B*) = A D B^H, rotate by B A^H.
  const auto [theta_a, theta_b] = param.Unpack(theta);
  using ComplexMatrix = Eigen::MatrixXcd;
  const ComplexMatrix theta_c =
      theta_a.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * theta_b.cast<std::complex<double>>();
  const ComplexMatrix star_c =
      star_a.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * star_b.cast<std::complex<double>>();
  const ComplexMatrix corr = theta_c.adjoint() * star_c;
  Eigen::JacobiSVD<ComplexMatrix> svd(corr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix unitary = svd.matrixV() * svd.matrixU().adjoint();
  const Matrix r1 = unitary.real();
  const Matrix r2 = unitary.imag();

  Matrix embedded(2 * half, 2 * half);
  embedded << r1, -r2, r2, r1;
  const double orthogonality =
      (embedded.transpose() * embedded - Matrix::Identity(2 * half, 2 * half)).norm();
  if (orthogonality > 1e-10) {
    throw NumericFailure("witness_skew: rotation is not orthogonal", orthogonality);
  }
  const Matrix xi_a = star_a * r1 - star_b * r2;
  const Matrix xi_b = star_a * r2 + star_b * r1;
  return Certify(param, theta, param.Pack(xi_a, xi_b), m_star);
}

WitnessCertificate WitnessPsd(const LinearParam& param, const Vector& theta,
                              const Matrix& m_star) {
  if (param.kind() != ParamKind::kPsd) {
    throw ArgumentError("witness_psd: wrong parameterization kind");
  }
  if (m_star.rows() != param.n1() || m_star.cols() != param.n2()) {
    throw ArgumentError("witness_psd: ground truth shape mismatch");
  }
  RequireFinite(m_star, "witness_psd");
  const double norm = m_star.norm();
  if ((m_star - m_star.transpose()).norm() > 1e-10 * FrobeniusOrOne(m_star)) {
    throw DegeneracyError("witness_psd: ground truth is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m_star + m_star.transpose()));
  const Vector& values = eig.eigenvalues();  // ascending
  if (values(0) < -kCertificateTolerance * norm) {
    throw DegeneracyError("witness_psd: ground truth is not positive semidefinite");
  }
  const double cutoff = kDefaultRelativeCutoff * values.cwiseAbs().maxCoeff();
  const Eigen::Index n = values.size();
  int k = 0;
  while (k < n && values(n - 1 - k) > cutoff) ++k;
  if (k > param.rank()) {
    throw DegeneracyError("witness_psd: ground truth rank exceeds r");
  }
  Matrix xi0 = Matrix::Zero(n, param.rank());
  for (int i = 0; i < k; ++i) {
    xi0.col(i) = eig.eigenvectors().col(n - 1 - i) * std::sqrt(values(n - 1 - i));
  }
  const auto [theta_block, unused] = param.Unpack(theta);
  // Theta^T Xi0 = U S V^T, Xi = Xi0 V U^T.
  const Matrix xi = xi0 * RotationToPsd(theta_block.transpose() * xi0);
  return Certify(param, theta, param.Pack(xi), m_star);
}

WitnessCertificate Witness(const LinearParam& param, const Vector& theta,
                           const Matrix& m_star) {
  switch (param.kind()) {
    case ParamKind::kRectangular:
      return WitnessRectangular(param, theta, m_star);
    case ParamKind::kPsd:
      return WitnessPsd(param, theta, m_star);
    case ParamKind::kSubspace:
      return WitnessSubspace(param, theta, m_star);
    case ParamKind::kSkew:
      return WitnessSkew(param, theta, m_star);
  }
  throw ArgumentError("witness: unknown kind");
}

}  // namespace lpmc
