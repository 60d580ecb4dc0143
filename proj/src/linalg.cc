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

#include "lpmc/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lpmc/errors.h"
#include "lpmc/rng.h"

namespace lpmc {

Matrix ReducedSvd::Reconstruct() const {
  return u * sigma.asDiagonal() * v.transpose();
}

Matrix YoulaDecomposition::Reconstruct() const {
  const Matrix weighted = phis * lambdas.asDiagonal();
  return weighted * psis.transpose() - psis * weighted.transpose();
}

void RequireFinite(const Matrix& a, std::string_view what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw ArgumentError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw ArgumentError(std::string(what) + ": non-finite entries");
  }
}

ReducedSvd ComputeReducedSvd(const Matrix& a, std::optional<double> rank_cutoff) {
  RequireFinite(a, "reduced_svd");
  if (rank_cutoff && *rank_cutoff < 0.0) {
    throw ArgumentError("reduced_svd: negative rank cutoff");
  }
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericFailure("reduced_svd: SVD iteration did not converge");
  }
  const Vector& values = svd.singularValues();
  const double cutoff =
      rank_cutoff.value_or(values.size() > 0 ? kDefaultRelativeCutoff * values(0) : 0.0);
  int k = 0;
  while (k < values.size() && values(k) > cutoff) ++k;
  return ReducedSvd{svd.matrixU().leftCols(k), values.head(k),
                    svd.matrixV().leftCols(k)};
}

YoulaDecomposition YoulaDecompose(const Matrix& s, std::optional<double> rank_cutoff) {
  RequireFinite(s, "youla_decompose");
  if (s.rows() != s.cols()) {
    throw ContractViolation("youla_decompose: input is not square");
  }
  const Eigen::Index n = s.rows();
  const double norm = s.norm();
  if ((s + s.transpose()).norm() > 1e-10 * norm) {
    throw ContractViolation("youla_decompose: input is not skew-symmetric");
  }
  if (norm == 0.0) {
    return YoulaDecomposition{Vector(0), Matrix(n, 0), Matrix(n, 0)};
  }

  const ReducedSvd svd = ComputeReducedSvd(s, rank_cutoff);
  const int k = svd.rank();
  if (k % 2 != 0) {
    throw DegeneracyError("youla_decompose: odd numerical rank " + std::to_string(k));
  }
  const int pairs = k / 2;
  Matrix basis(n, k);  // accepted phi/psi columns, interleaved
  std::vector<double> lambdas;
  std::vector<Vector> phis, psis;
  int used = 0;
  auto project_out = [&](Vector& x) {
    for (int pass = 0; pass < 2; ++pass) {
      x -= basis.leftCols(used) * (basis.leftCols(used).transpose() * x);
    }
  };
  for (int j = 0; j < k && static_cast<int>(lambdas.size()) < pairs; ++j) {
    Vector phi = svd.u.col(j);
    project_out(phi);
    const double residual = phi.norm();
    if (residual < 0.5) continue;  // already spanned by an earlier pair
    phi /= residual;
    Vector psi = -(s * phi);
    project_out(psi);
    const double lambda = psi.norm();
    if (!(lambda > 0.0)) {
      throw DegeneracyError("youla_decompose: singular vector in the null space");
    }
    psi /= lambda;
    basis.col(used++) = phi;
    basis.col(used++) = psi;
    lambdas.push_back(phi.dot(s * psi));
    phis.push_back(std::move(phi));
    psis.push_back(std::move(psi));
  }
  if (static_cast<int>(lambdas.size()) != pairs) {
    throw DegeneracyError("youla_decompose: could not pair singular vectors");
  }

  std::vector<int> order(pairs);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambdas[a] > lambdas[b]; });
  YoulaDecomposition out{Vector(pairs), Matrix(n, pairs), Matrix(n, pairs)};
  for (int i = 0; i < pairs; ++i) {
    out.lambdas(i) = lambdas[order[i]];
    out.phis.col(i) = phis[order[i]];
    out.psis.col(i) = psis[order[i]];
  }
  return out;
}

double SpectralNorm(const Matrix& a, double tol, int max_iter, std::uint64_t seed) {
  RequireFinite(a, "spectral_norm");
  if (a.isZero(0.0)) return 0.0;
  Rng rng(seed);
  Vector x(a.cols());
  double estimate = 0.0;
  for (int restart = 0; restart < 4; ++restart) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.Normal();
    x.normalize();
    double previous = -1.0;
    bool degenerate = false;
    for (int it = 0; it < max_iter; ++it) {
      const Vector ax = a * x;
      estimate = ax.squaredNorm();  // Rayleigh quotient of a^T a
      if (std::abs(estimate - previous) <= tol * estimate) {
        return std::sqrt(estimate);
      }
      previous = estimate;
      Vector next = a.transpose() * ax;
      const double norm = next.norm();
      if (norm == 0.0) {
        degenerate = true;  // start landed in the null space
        break;
      }
      x = next / norm;
    }
    if (!degenerate) break;
  }
  throw NumericFailure("spectral_norm: power iteration did not converge",
                       std::sqrt(estimate));
}

double TwoInfNorm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.rowwise().norm().maxCoeff();
}

Matrix OrthonormalizeColumns(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

}  // namespace lpmc
