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

#include "lpmc/sampling.h"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lpmc/errors.h"

namespace lpmc {

namespace {

void RequireProbability(double p, const char* op) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(op) + ": p must lie in [0, 1]");
  }
}

void RequireDims(int n1, int n2, const char* op) {
  if (n1 < 1 || n2 < 1) {
    throw ArgumentError(std::string(op) + ": dimensions must be positive");
  }
}

}  // namespace

std::string_view ToString(SamplingModel model) {
  switch (model) {
    case SamplingModel::kBernoulliRect:
      return "bernoulli-rect";
    case SamplingModel::kSymmetricOffdiag:
      return "symmetric-offdiag";
  }
  return "unknown";
}

SamplingModel ParseSamplingModel(std::string_view name) {
  if (name == "bernoulli-rect") return SamplingModel::kBernoulliRect;
  if (name == "symmetric-offdiag") return SamplingModel::kSymmetricOffdiag;
  throw ArgumentError("unknown sampling model: " + std::string(name));
}

ObservationMask::ObservationMask(int rows, int cols, std::vector<Index> indices,
                                 SamplingModel model, double nominal_p)
    : rows_(rows), cols_(cols), indices_(std::move(indices)), model_(model),
      nominal_p_(nominal_p) {
  RequireDims(rows, cols, "ObservationMask");
  RequireProbability(nominal_p, "ObservationMask");
  for (const Index& idx : indices_) {
    if (idx.row < 0 || idx.row >= rows || idx.col < 0 || idx.col >= cols) {
      throw ArgumentError("ObservationMask: index out of range");
    }
  }
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (model == SamplingModel::kSymmetricOffdiag) {
    if (rows != cols) {
      throw ArgumentError("ObservationMask: symmetric model needs a square shape");
    }
    for (const Index& idx : indices_) {
      if (idx.row == idx.col) {
        throw ArgumentError("ObservationMask: symmetric model excludes the diagonal");
      }
      if (!std::binary_search(indices_.begin(), indices_.end(),
                              Index{idx.col, idx.row})) {
        throw ArgumentError("ObservationMask: symmetric model needs mirrored pairs");
      }
    }
  }
}

Matrix ObservationMask::Indicator() const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const Index& idx : indices_) out(idx.row, idx.col) = 1.0;
  return out;
}

ObservationMask SampleBernoulli(int n1, int n2, double p, Rng& rng) {
  RequireDims(n1, n2, "sample_bernoulli");
  RequireProbability(p, "sample_bernoulli");
  std::vector<Index> indices;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (rng.Uniform() < p) indices.push_back({i, j});
    }
  }
  return ObservationMask(n1, n2, std::move(indices), SamplingModel::kBernoulliRect, p);
}

ObservationMask SampleSymmetricOffdiag(int n, double p, Rng& rng) {
  RequireDims(n, n, "sample_symmetric_offdiag");
  RequireProbability(p, "sample_symmetric_offdiag");
  std::vector<Index> indices;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.Uniform() < p) {
        indices.push_back({i, j});
        indices.push_back({j, i});
      }
    }
  }
  return ObservationMask(n, n, std::move(indices), SamplingModel::kSymmetricOffdiag, p);
}

Matrix ProjectOmega(const Matrix& m, const ObservationMask& mask) {
  if (m.rows() != mask.rows() || m.cols() != mask.cols()) {
    throw ArgumentError("project_omega: shape mismatch");
  }
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const Index& idx : mask.indices()) out(idx.row, idx.col) = m(idx.row, idx.col);
  return out;
}

double EstimateP(const ObservationMask& mask) {
  return static_cast<double>(mask.size()) /
         (static_cast<double>(mask.rows()) * static_cast<double>(mask.cols()));
}

Matrix GaussianNoise(int n1, int n2, double sigma, Rng& rng) {
  RequireDims(n1, n2, "gaussian_noise");
  if (!(sigma >= 0.0)) throw ArgumentError("gaussian_noise: sigma must be >= 0");
  Matrix out(n1, n2);
  // Row-major draw order so the stream layout matches the mask samplers.
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) out(i, j) = sigma * rng.Normal();
  }
  return out;
}

Matrix SkewGaussianNoise(int n, double sigma, Rng& rng) {
  RequireDims(n, n, "skew_gaussian_noise");
  if (!(sigma >= 0.0)) throw ArgumentError("skew_gaussian_noise: sigma must be >= 0");
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out(i, j) = sigma * rng.Normal();
      out(j, i) = -out(i, j);
    }
  }
  return out;
}

void WriteMask(std::ostream& os, const ObservationMask& mask, const Matrix* values) {
  if (values && (values->rows() != mask.rows() || values->cols() != mask.cols())) {
    throw ArgumentError("write_mask: value matrix shape mismatch");
  }
  os << "# " << mask.rows() << ' ' << mask.cols() << ' ' << ToString(mask.model())
     << ' ' << std::setprecision(17) << mask.nominal_p() << '\n';
  for (const Index& idx : mask.indices()) {
    const double value = values ? (*values)(idx.row, idx.col) : 1.0;
    os << idx.row << ' ' << idx.col << ' ' << value << '\n';
  }
  if (!os) throw IoError("write_mask: stream failure");
}

MaskWithValues ReadMask(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("read_mask: missing header");
  std::istringstream header(line);
  char hash = 0;
  int rows = 0, cols = 0;
  std::string model;
  double nominal_p = 0.0;
  if (!(header >> hash >> rows >> cols >> model >> nominal_p) || hash != '#') {
    throw IoError("read_mask: malformed header '" + line + "'");
  }
  std::vector<Index> indices;
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    Index idx{};
    double value = 0.0;
    if (!(fields >> idx.row >> idx.col >> value)) {
      throw IoError("read_mask: malformed line '" + line + "'");
    }
    indices.push_back(idx);
    values.push_back(value);
  }
  Matrix dense = Matrix::Zero(std::max(rows, 0), std::max(cols, 0));
  ObservationMask mask(rows, cols, indices, ParseSamplingModel(model), nominal_p);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    dense(indices[k].row, indices[k].col) = values[k];
  }
  return MaskWithValues{std::move(mask), std::move(dense)};
}

}  // namespace lpmc
