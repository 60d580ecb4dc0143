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

#ifndef LPMC_LINALG_H_
#define LPMC_LINALG_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace lpmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative rank cutoff used when a caller does not supply one:
// singular values at or below kDefaultRelativeCutoff * sigma_max are dropped.
inline constexpr double kDefaultRelativeCutoff = 1e-10;

struct ReducedSvd {
  Matrix u;      // n x k, orthonormal columns
  Vector sigma;  // k, nonincreasing, all above the cutoff
  Matrix v;      // m x k, orthonormal columns

  int rank() const { return static_cast<int>(sigma.size()); }
  Matrix Reconstruct() const;
};

// Real skew-symmetric S = sum_i lambda_i (phi_i psi_i^T - psi_i phi_i^T).
struct YoulaDecomposition {
  Vector lambdas;  // nonincreasing, positive
  Matrix phis;     // n x (r/2)
  Matrix psis;     // n x (r/2)

  int rank() const { return 2 * static_cast<int>(lambdas.size()); }
  Matrix Reconstruct() const;
};

// Throws ArgumentError if the matrix is empty or holds NaN/Inf.
void RequireFinite(const Matrix& a, std::string_view what);

// Thin SVD keeping singular values strictly above `rank_cutoff`. Without a
// cutoff, kDefaultRelativeCutoff * sigma_max is used.
ReducedSvd ComputeReducedSvd(const Matrix& a,
                             std::optional<double> rank_cutoff = std::nullopt);

// Youla decomposition computed by pairing singular vectors of `s`: for a
// left singular vector phi with singular value lambda, psi = -S phi / lambda
// completes the pair, and the orthogonal complement of span{phi, psi} inside
// the singular subspace is again S-invariant.
// Throws ContractViolation if `s` is not skew-symmetric and DegeneracyError if
// its numerical rank is odd.
YoulaDecomposition YoulaDecompose(const Matrix& s,
                                  std::optional<double> rank_cutoff = std::nullopt);

// Largest singular value by power iteration on a^T a from a seeded random
// start. Converged when the Rayleigh quotient changes by less than `tol`
// relative. Throws NumericFailure (carrying the last estimate) otherwise.
double SpectralNorm(const Matrix& a, double tol = 1e-13, int max_iter = 100000,
                    std::uint64_t seed = 0x5eed);

// Max Euclidean row norm.
double TwoInfNorm(const Matrix& a);

// Frobenius inner product.
inline double Inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

// Orthonormal basis of the column span (thin Householder QR).
Matrix OrthonormalizeColumns(const Matrix& a);

}  // namespace lpmc

#endif  // LPMC_LINALG_H_
