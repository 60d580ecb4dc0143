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

#ifndef LPMC_SAMPLING_H_
#define LPMC_SAMPLING_H_

#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "lpmc/linalg.h"
#include "lpmc/rng.h"

namespace lpmc {

enum class SamplingModel {
  kBernoulliRect,     // every cell independently with probability p
  kSymmetricOffdiag,  // every unordered off-diagonal pair, mirrored
};

std::string_view ToString(SamplingModel model);
SamplingModel ParseSamplingModel(std::string_view name);

struct Index {
  int row;
  int col;
  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index&, const Index&) = default;
};

// The observed index set with the metadata of the model that produced it.
// Indices are kept sorted row-major and unique. For kSymmetricOffdiag the
// constructor enforces a square shape, an empty diagonal, and (i,j) in the
// set iff (j,i) is.
class ObservationMask {
 public:
  ObservationMask(int rows, int cols, std::vector<Index> indices,
                  SamplingModel model, double nominal_p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Index>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  SamplingModel model() const { return model_; }
  double nominal_p() const { return nominal_p_; }

  // 0/1 matrix of the index set.
  Matrix Indicator() const;

 private:
  int rows_;
  int cols_;
  std::vector<Index> indices_;
  SamplingModel model_;
  double nominal_p_;
};

ObservationMask SampleBernoulli(int n1, int n2, double p, Rng& rng);
ObservationMask SampleSymmetricOffdiag(int n, double p, Rng& rng);

// P_Omega: keeps entries on the mask, zeroes the rest.
Matrix ProjectOmega(const Matrix& m, const ObservationMask& mask);

// |Omega| / (rows * cols).
double EstimateP(const ObservationMask& mask);

// i.i.d. N(0, sigma^2) entries.
Matrix GaussianNoise(int n1, int n2, double sigma, Rng& rng);

// Skew-symmetric: strict upper triangle i.i.d. N(0, sigma^2), zero diagonal,
// lower triangle the negation.
Matrix SkewGaussianNoise(int n, double sigma, Rng& rng);

// Text dump: header "# rows cols model nominal_p" then one "i j value" line
// per observed index, value taken from `values` (1 when omitted).
void WriteMask(std::ostream& os, const ObservationMask& mask,
               const Matrix* values = nullptr);

struct MaskWithValues {
  ObservationMask mask;
  Matrix values;  // zero off the mask
};
MaskWithValues ReadMask(std::istream& is);

}  // namespace lpmc

#endif  // LPMC_SAMPLING_H_
