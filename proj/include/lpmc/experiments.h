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

#ifndef LPMC_EXPERIMENTS_H_
#define LPMC_EXPERIMENTS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpmc/linalg.h"
#include "lpmc/parameterization.h"
#include "lpmc/sampling.h"

namespace lpmc {

enum class Experiment {
  kSubspaceNoisy = 1,
  kSubspacePhase = 2,
  kSkewCompare = 3,
  kSingleSolve = 4,
  kDiagnostics = 5,
};

std::string_view ToString(Experiment experiment);
Experiment ParseExperiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kSingleSolve;
  int n = 60;                   // n1 = n2 = n
  std::vector<int> r{2};        // rank grid (skew-compare sweeps it)
  std::vector<int> s{6};        // subspace dimension grid
  std::vector<double> p_grid{0.5};
  std::optional<double> sigma;  // unset: 1/n for subspace-noisy, 0 otherwise
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<double> lambda;  // unset: 100 sqrt((n1 + n2) p_hat)
  std::optional<double> alpha;   // unset: 100
  int max_iters = 500;
  ParamKind kind = ParamKind::kSubspace;    // single-solve / diagnostics
  std::optional<SamplingModel> model;       // unset: symmetric-offdiag for skew
  bool timing = false;  // record wall_time (breaks byte-identical output)
  int jobs = 1;

  double ResolvedSigma() const;
};

// Defaults of each experiment at full scale.
ExperimentConfig DefaultConfig(Experiment experiment);
// Throws ArgumentError on p outside (0, 1], trials < 1, s < r, odd skew rank...
void ValidateConfig(const ExperimentConfig& config);

struct TrialRecord {
  std::string experiment;
  int trial = 0;
  double p = 0.0;
  int s = 0;  // 0 when no subspace constraint applies
  int r = 0;
  std::string solver;  // parameterization kind
  std::uint64_t seed = 0;
  std::size_t observed = 0;  // |Omega|
  double relative_error = 0.0;  // ||M^ - M*||_F^2 / ||M*||_F^2
  bool success = false;         // relative_error <= 1e-6
  int iterations = 0;
  std::string termination;
  double wall_time = 0.0;  // seconds, only when timing is on
};

inline constexpr double kSuccessThreshold = 1e-6;

struct SummaryRow {
  std::string experiment;
  double p = 0.0;
  int s = 0;
  int r = 0;
  std::string solver;
  int trials = 0;
  double mean_log10_error = 0.0;
  double median_log10_error = 0.0;
  double success_rate = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summary;
};

// Orthonormal columns drawn as leading left singular vectors of a seeded
// n x n standard normal matrix.
Matrix RandomSingularBasis(int n, int k, std::uint64_t seed);

struct Instance {
  Matrix m_star;
  LinearParam param;
};

// Ground truths of the experiments:
//   subspace     M* = u_1 v_1^T + ... + u_r v_r^T, bases [u_1..u_s], [v_1..v_s]
//   rectangular  the same M* without the bases
//   skew         sum_i u_i v_i^T - v_i u_i^T over r/2 orthonormal pairs
//   psd          u_1 u_1^T + ... + u_r u_r^T
// `seed` fixes the random matrices; s is ignored outside the subspace kind.
Instance MakeInstance(ParamKind kind, int n, int r, int s, std::uint64_t seed);

ExperimentResult RunSubspaceNoisy(const ExperimentConfig& config);
ExperimentResult RunSubspacePhase(const ExperimentConfig& config);
ExperimentResult RunSkewCompare(const ExperimentConfig& config);
ExperimentResult RunSingleSolve(const ExperimentConfig& config);
ExperimentResult RunExperiment(const ExperimentConfig& config);

// Header line, one row per record, then "#summary" rows.
void WriteCsv(std::ostream& os, const ExperimentResult& result, bool timing);
// Gnuplot data blocks (one per s / r / solver series): p, mean, median, rate.
void WriteGnuplot(std::ostream& os, const ExperimentResult& result);

struct DiagnosticsReport {
  std::string text;                   // key: value blocks
  std::vector<std::string> failures;  // names of failed hard checks
  bool ok() const { return failures.empty(); }
};

DiagnosticsReport RunDiagnostics(const ExperimentConfig& config);

}  // namespace lpmc

#endif  // LPMC_EXPERIMENTS_H_
