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

#include "lpmc/experiments.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lpmc/errors.h"

namespace lpmc {
namespace {

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

std::string Csv(const ExperimentResult& result, bool timing = false) {
  std::ostringstream os;
  WriteCsv(os, result, timing);
  return os.str();
}

ExperimentConfig SmallPhase() {
  ExperimentConfig c;
  c.experiment = Experiment::kSubspacePhase;
  c.n = 30;
  c.r = {2};
  c.s = {4, 6};
  c.p_grid = {0.3, 0.6};
  c.trials = 2;
  c.master_seed = 17;
  c.max_iters = 300;
  return c;
}

TEST(ExperimentNamesTest, RoundTrip) {
  for (Experiment e : {Experiment::kSubspaceNoisy, Experiment::kSubspacePhase,
                       Experiment::kSkewCompare, Experiment::kSingleSolve,
                       Experiment::kDiagnostics}) {
    EXPECT_EQ(ParseExperiment(ToString(e)), e);
  }
  EXPECT_THROW(ParseExperiment("bogus"), ArgumentError);
}

TEST(DefaultConfigTest, FullScaleGrids) {
  const ExperimentConfig noisy = DefaultConfig(Experiment::kSubspaceNoisy);
  EXPECT_EQ(noisy.n, 500);
  EXPECT_EQ(noisy.s, (std::vector<int>{10, 20, 30, 40}));
  EXPECT_DOUBLE_EQ(noisy.ResolvedSigma(), 1.0 / 500);
  const ExperimentConfig phase = DefaultConfig(Experiment::kSubspacePhase);
  EXPECT_EQ(phase.ResolvedSigma(), 0.0);
  ASSERT_EQ(phase.p_grid.size(), 20u);
  EXPECT_DOUBLE_EQ(phase.p_grid.back(), 20 * 1e-4);
  const ExperimentConfig skew = DefaultConfig(Experiment::kSkewCompare);
  EXPECT_EQ(skew.r, (std::vector<int>{4, 10, 20}));
}

TEST(ValidateConfigTest, RejectsBadValues) {
  ExperimentConfig c = SmallPhase();
  EXPECT_NO_THROW(ValidateConfig(c));
  c.p_grid = {0.0};
  EXPECT_THROW(ValidateConfig(c), ArgumentError);
  c = SmallPhase();
  c.s = {1};
  EXPECT_THROW(ValidateConfig(c), ArgumentError);
  c = SmallPhase();
  c.trials = 0;
  EXPECT_THROW(ValidateConfig(c), ArgumentError);
  c = SmallPhase();
  c.sigma = -1.0;
  EXPECT_THROW(ValidateConfig(c), ArgumentError);
  c = SmallPhase();
  c.experiment = Experiment::kSkewCompare;
  c.r = {3};
  EXPECT_THROW(ValidateConfig(c), ArgumentError);
}

TEST(InstanceTest, GroundTruthStructure) {
  const Instance sub = MakeInstance(ParamKind::kSubspace, 20, 2, 5, 3);
  const ReducedSvd svd = ComputeReducedSvd(sub.m_star);
  EXPECT_EQ(svd.rank(), 2);
  const Matrix& bu = sub.param.basis_u();
  EXPECT_LE((sub.m_star - bu * bu.transpose() * sub.m_star).norm(), 1e-12);
  const Instance skew = MakeInstance(ParamKind::kSkew, 12, 4, 0, 3);
  EXPECT_LE((skew.m_star + skew.m_star.transpose()).norm(), 1e-14);
  EXPECT_EQ(ComputeReducedSvd(skew.m_star).rank(), 4);
  const Instance again = MakeInstance(ParamKind::kSubspace, 20, 2, 5, 3);
  EXPECT_EQ(again.m_star, sub.m_star);
  const Matrix q = RandomSingularBasis(10, 3, 4);
  EXPECT_LE((q.transpose() * q - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(CsvTest, SchemaAndSummary) {
  const ExperimentResult result = RunExperiment(SmallPhase());
  ASSERT_EQ(result.records.size(), 2u * 2u * 2u);
  std::istringstream in(Csv(result));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "experiment,trial,p,s,r,solver,seed,observed,relative_error,success,iterations,"
            "termination,wall_time");
  int rows = 0, summaries = 0;
  while (std::getline(in, line)) {
    const auto fields = Split(line, ',');
    if (fields[0] == "#summary") {
      if (fields[1] == "experiment") continue;
      ++summaries;
      ASSERT_EQ(fields.size(), 10u);
      const double rate = std::stod(fields[9]);
      EXPECT_GE(rate, 0.0);
      EXPECT_LE(rate, 1.0);
      continue;
    }
    ++rows;
    ASSERT_EQ(fields.size(), 13u) << line;
    EXPECT_EQ(fields[0], "subspace-phase");
    EXPECT_EQ(fields[5], "subspace");
    EXPECT_EQ(fields[12], "NA");
    const double err = std::stod(fields[8]);
    EXPECT_EQ(fields[9], err <= kSuccessThreshold ? "1" : "0");
  }
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(summaries, 4);
}

TEST(CsvTest, DeterministicAcrossRunsAndJobCounts) {
  ExperimentConfig c = SmallPhase();
  const std::string a = Csv(RunExperiment(c));
  const std::string b = Csv(RunExperiment(c));
  c.jobs = 3;
  const std::string d = Csv(RunExperiment(c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
  c.master_seed = 18;
  EXPECT_NE(a, Csv(RunExperiment(c)));
}

TEST(CsvTest, TimingColumnIsNumericWhenEnabled) {
  ExperimentConfig c;
  c.experiment = Experiment::kSingleSolve;
  c.n = 12;
  c.kind = ParamKind::kRectangular;
  c.timing = true;
  const ExperimentResult result = RunExperiment(c);
  std::istringstream in(Csv(result, true));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const auto fields = Split(line, ',');
  EXPECT_GE(std::stod(fields[12]), 0.0);
}

TEST(SingleSolveTest, FullObservationRecoversEveryKind) {
  for (ParamKind kind :
       {ParamKind::kRectangular, ParamKind::kPsd, ParamKind::kSubspace, ParamKind::kSkew}) {
    ExperimentConfig c;
    c.experiment = Experiment::kSingleSolve;
    c.kind = kind;
    c.n = 20;
    c.r = {2};
    c.s = {5};
    c.p_grid = {1.0};
    c.trials = 4;
    const ExperimentResult result = RunSingleSolve(c);
    // With unit singular values the top Hessian eigenvalue sits exactly at
    // 2 / step for a grid step, and the largest non-increasing step can lock
    // into a slowly decaying 2-cycle. Rectangular and psd starts sometimes
    // stall this way; they still end close to the truth.
    const bool strict = kind == ParamKind::kSubspace || kind == ParamKind::kSkew;
    for (const TrialRecord& rec : result.records) {
      if (strict || rec.success) {
        EXPECT_TRUE(rec.success) << ToString(kind) << " err=" << rec.relative_error;
        EXPECT_EQ(rec.termination, "grad-tol");
      } else {
        EXPECT_EQ(rec.termination, "iter-cap");
        EXPECT_LT(rec.relative_error, 1e-2) << ToString(kind);
      }
    }
  }
}

TEST(SkewCompareTest, PairedRecordsAndSkewEstimates) {
  ExperimentConfig c;
  c.experiment = Experiment::kSkewCompare;
  c.n = 24;
  c.r = {2, 4};
  c.p_grid = {0.6};
  c.trials = 2;
  const ExperimentResult result = RunSkewCompare(c);
  ASSERT_EQ(result.records.size(), 2u * 2u * 2u);
  for (std::size_t k = 0; k < result.records.size(); k += 2) {
    EXPECT_EQ(result.records[k].solver, "skew");
    EXPECT_EQ(result.records[k + 1].solver, "rectangular");
    EXPECT_EQ(result.records[k].observed, result.records[k + 1].observed);
    EXPECT_EQ(result.records[k].r, result.records[k + 1].r);
  }
  // Medians are emitted for both solvers.
  int skew_rows = 0, rect_rows = 0;
  for (const SummaryRow& row : result.summary) {
    skew_rows += row.solver == "skew";
    rect_rows += row.solver == "rectangular";
    EXPECT_TRUE(std::isfinite(row.median_log10_error));
  }
  EXPECT_EQ(skew_rows, 2);
  EXPECT_EQ(rect_rows, 2);
}

TEST(GnuplotTest, OneBlockPerSeries) {
  const ExperimentResult result = RunExperiment(SmallPhase());
  std::ostringstream os;
  WriteGnuplot(os, result);
  const std::string text = os.str();
  EXPECT_NE(text.find("# solver=subspace r=2 s=4"), std::string::npos);
  EXPECT_NE(text.find("# solver=subspace r=2 s=6"), std::string::npos);
}

TEST(DiagnosticsTest, DefaultInstancePassesHardChecks) {
  ExperimentConfig c = DefaultConfig(Experiment::kDiagnostics);
  c.p_grid = {0.5};
  const DiagnosticsReport rep = RunDiagnostics(c);
  EXPECT_TRUE(rep.ok()) << rep.text;
  for (const char* block : {"[profile]", "[witness]", "[key_identity]", "[k_decomposition]",
                            "[psi]", "[rate_conditions]", "[concentration]", "[checks]"}) {
    EXPECT_NE(rep.text.find(block), std::string::npos) << block;
  }
  EXPECT_EQ(rep.text, RunDiagnostics(c).text);
}

TEST(DiagnosticsTest, EveryKind) {
  for (ParamKind kind :
       {ParamKind::kRectangular, ParamKind::kPsd, ParamKind::kSubspace, ParamKind::kSkew}) {
    ExperimentConfig c = DefaultConfig(Experiment::kDiagnostics);
    c.kind = kind;
    c.n = 16;
    c.r = {2};
    c.s = {4};
    c.trials = 3;
    c.sigma = 0.01;
    c.p_grid = {0.5};
    const DiagnosticsReport rep = RunDiagnostics(c);
    EXPECT_TRUE(rep.ok()) << ToString(kind) << "\n" << rep.text;
  }
}

}  // namespace
}  // namespace lpmc
