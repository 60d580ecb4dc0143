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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "lpmc/errors.h"
#include "lpmc/landscape.h"
#include "lpmc/objective.h"
#include "lpmc/optimizer.h"
#include "lpmc/rng.h"

namespace lpmc {

namespace {

// Stream layout: trial t of experiment e draws from Derive(master, {e, t}),
// split into mask / noise / init sub-streams. Re-creating the mask stream for
// every p makes the masks of one trial nested in p; the noise and init streams
// are shared by every cell of the trial, so cells differ only in (p, s, r).
constexpr std::uint64_t kTruthStream = ~0ULL;
constexpr std::uint64_t kMaskStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kInitStream = 3;

Rng TrialStream(const ExperimentConfig& config, int trial) {
  return Rng::Derive(config.master_seed, {static_cast<std::uint64_t>(config.experiment),
                                          static_cast<std::uint64_t>(trial)});
}

std::uint64_t TruthSeed(const ExperimentConfig& config) {
  return Rng::Derive(config.master_seed,
                     {static_cast<std::uint64_t>(config.experiment), kTruthStream})
      .NextU64();
}

std::uint64_t InitSeed(const Rng& trial_stream) {
  return trial_stream.Split(kInitStream).NextU64();
}

SamplingModel ModelFor(const ExperimentConfig& config, ParamKind kind) {
  if (config.model) return *config.model;
  return kind == ParamKind::kSkew ? SamplingModel::kSymmetricOffdiag
                                  : SamplingModel::kBernoulliRect;
}

ObservationMask DrawMask(int n, double p, SamplingModel model, const Rng& trial_stream) {
  Rng rng = trial_stream.Split(kMaskStream);
  return model == SamplingModel::kSymmetricOffdiag ? SampleSymmetricOffdiag(n, p, rng)
                                                   : SampleBernoulli(n, n, p, rng);
}

Matrix DrawNoise(int n, double sigma, ParamKind kind, const Rng& trial_stream) {
  if (sigma == 0.0) return Matrix::Zero(n, n);
  Rng rng = trial_stream.Split(kNoiseStream);
  return kind == ParamKind::kSkew ? SkewGaussianNoise(n, sigma, rng)
                                  : GaussianNoise(n, n, sigma, rng);
}

double Log10Error(double err) {
  return std::log10(std::max(err, std::numeric_limits<double>::min()));
}

struct TrialSetup {
  const ExperimentConfig* config;
  const LinearParam* param;
  const Matrix* m_star;
  const ObservationMask* mask;
  const Matrix* noise;
  std::uint64_t init_seed;
};

TrialRecord SolveTrial(const TrialSetup& setup) {
  const ExperimentConfig& config = *setup.config;
  TrialRecord rec;
  rec.experiment = std::string(ToString(config.experiment));
  rec.solver = std::string(ToString(setup.param->kind()));
  rec.r = setup.param->rank();
  rec.s = setup.param->kind() == ParamKind::kSubspace
              ? static_cast<int>(setup.param->basis_u().cols())
              : 0;
  rec.p = setup.mask->nominal_p();
  rec.seed = setup.init_seed;
  rec.observed = setup.mask->size();

  const auto start = std::chrono::steady_clock::now();
  const double truth_sq = setup.m_star->squaredNorm();
  if (setup.mask->size() == 0) {
    // Nothing observed: the estimate stays at zero.
    rec.relative_error = truth_sq > 0.0 ? 1.0 : 0.0;
    rec.termination = "empty-mask";
  } else {
    const double p_hat = EstimateP(*setup.mask);
    const double lambda =
        config.lambda.value_or(DefaultLambda(setup.param->n1(), setup.param->n2(), p_hat));
    const double alpha = config.alpha.value_or(kDefaultAlpha);
    const ObjectiveSpec spec(*setup.param, ProjectOmega(*setup.m_star + *setup.noise, *setup.mask),
                             *setup.mask, p_hat, lambda, alpha);
    SolveConfig solve_config;
    solve_config.max_iters = config.max_iters;
    solve_config.seed = setup.init_seed;
    const SolveResult result = Solve(spec, solve_config);
    rec.relative_error =
        (result.m_hat - *setup.m_star).squaredNorm() / (truth_sq > 0.0 ? truth_sq : 1.0);
    rec.iterations = result.iterations;
    rec.termination = std::string(ToString(result.termination));
  }
  rec.success = rec.relative_error <= kSuccessThreshold;
  if (config.timing) {
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
  }
  return rec;
}

// Runs tasks on `jobs` threads; results land in their own slots so the output
// order never depends on scheduling.
void RunTasks(std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs <= 1 || tasks.size() <= 1) {
    for (auto& task : tasks) task();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = std::min<int>(jobs, static_cast<int>(tasks.size()));
  for (int i = 0; i < count; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<SummaryRow> Summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  std::map<std::tuple<double, int, int, std::string>, std::vector<const TrialRecord*>> groups;
  std::vector<std::tuple<double, int, int, std::string>> order;
  for (const auto& rec : records) {
    const auto key = std::make_tuple(rec.p, rec.s, rec.r, rec.solver);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&rec);
  }
  for (const auto& key : order) {
    const auto& group = groups[key];
    std::vector<double> logs;
    int successes = 0;
    for (const TrialRecord* rec : group) {
      logs.push_back(Log10Error(rec->relative_error));
      successes += rec->success ? 1 : 0;
    }
    SummaryRow row;
    row.experiment = group.front()->experiment;
    std::tie(row.p, row.s, row.r, row.solver) = key;
    row.trials = static_cast<int>(group.size());
    double sum = 0.0;
    for (double v : logs) sum += v;
    row.mean_log10_error = sum / logs.size();
    std::sort(logs.begin(), logs.end());
    const std::size_t m = logs.size();
    row.median_log10_error = m % 2 ? logs[m / 2] : 0.5 * (logs[m / 2 - 1] + logs[m / 2]);
    row.success_rate = static_cast<double>(successes) / m;
    rows.push_back(row);
  }
  return rows;
}

std::string Format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

std::string Num(double value) { return Format("%.17g", value); }
std::string Short(double value) { return Format("%.10g", value); }

int MaxOf(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

std::string_view ToString(Experiment experiment) {
  switch (experiment) {
    case Experiment::kSubspaceNoisy:
      return "subspace-noisy";
    case Experiment::kSubspacePhase:
      return "subspace-phase";
    case Experiment::kSkewCompare:
      return "skew-compare";
    case Experiment::kSingleSolve:
      return "single-solve";
    case Experiment::kDiagnostics:
      return "diagnostics";
  }
  return "unknown";
}

Experiment ParseExperiment(std::string_view name) {
  for (Experiment e : {Experiment::kSubspaceNoisy, Experiment::kSubspacePhase,
                       Experiment::kSkewCompare, Experiment::kSingleSolve,
                       Experiment::kDiagnostics}) {
    if (name == ToString(e)) return e;
  }
  throw ArgumentError("unknown experiment: " + std::string(name));
}

double ExperimentConfig::ResolvedSigma() const {
  if (sigma) return *sigma;
  return experiment == Experiment::kSubspaceNoisy ? 1.0 / n : 0.0;
}

ExperimentConfig DefaultConfig(Experiment experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  auto grid = [](double step) {
    std::vector<double> out;
    for (int k = 1; k <= 20; ++k) out.push_back(k * step);
    return out;
  };
  switch (experiment) {
    case Experiment::kSubspaceNoisy:
      c.n = 500;
      c.r = {2};
      c.s = {10, 20, 30, 40};
      c.p_grid = grid(0.005);
      c.trials = 10;
      break;
    case Experiment::kSubspacePhase:
      c.n = 500;
      c.r = {2};
      c.s = {10, 20, 30, 40};
      c.p_grid = grid(1e-4);
      c.trials = 10;
      break;
    case Experiment::kSkewCompare:
      c.n = 500;
      c.r = {4, 10, 20};
      c.s = {};
      c.p_grid = grid(0.01);
      c.trials = 10;
      c.kind = ParamKind::kSkew;
      break;
    case Experiment::kSingleSolve:
      break;
    case Experiment::kDiagnostics:
      c.n = 40;
      c.s = {5};
      c.trials = 10;
      break;
  }
  return c;
}

void ValidateConfig(const ExperimentConfig& c) {
  if (c.n < 2) throw ArgumentError("config: n must be at least 2");
  if (c.trials < 1) throw ArgumentError("config: trials must be >= 1");
  if (c.max_iters < 1) throw ArgumentError("config: max_iters must be >= 1");
  if (c.jobs < 1) throw ArgumentError("config: jobs must be >= 1");
  if (c.p_grid.empty()) throw ArgumentError("config: empty p grid");
  for (double p : c.p_grid) {
    if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("config: p values must lie in (0, 1]");
  }
  if (c.r.empty()) throw ArgumentError("config: empty r list");
  for (int r : c.r) {
    if (r < 1 || r > c.n) throw ArgumentError("config: r must lie in [1, n]");
  }
  if (!(c.ResolvedSigma() >= 0.0)) throw ArgumentError("config: sigma must be >= 0");
  if (c.lambda && !(*c.lambda >= 0.0)) throw ArgumentError("config: lambda must be >= 0");
  if (c.alpha && !(*c.alpha >= 0.0)) throw ArgumentError("config: alpha must be >= 0");
  const bool subspace = c.experiment == Experiment::kSubspaceNoisy ||
                        c.experiment == Experiment::kSubspacePhase ||
                        ((c.experiment == Experiment::kSingleSolve ||
                          c.experiment == Experiment::kDiagnostics) &&
                         c.kind == ParamKind::kSubspace);
  if (subspace) {
    if (c.s.empty()) throw ArgumentError("config: empty s list");
    for (int s : c.s) {
      if (s < MaxOf(c.r) || s > c.n) throw ArgumentError("config: need r <= s <= n");
    }
  }
  const bool skew = c.experiment == Experiment::kSkewCompare ||
                    ((c.experiment == Experiment::kSingleSolve ||
                      c.experiment == Experiment::kDiagnostics) &&
                     c.kind == ParamKind::kSkew);
  if (skew) {
    for (int r : c.r) {
      if (r % 2 != 0) throw ArgumentError("config: skew ranks must be even");
    }
  }
}

Matrix RandomSingularBasis(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw ArgumentError("random_singular_basis: need 0 <= k <= n");
  Rng rng(seed);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.Normal();
  }
  Eigen::BDCSVD<Matrix> svd(g, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k);
}

Instance MakeInstance(ParamKind kind, int n, int r, int s, std::uint64_t seed) {
  const std::uint64_t seed_u = Rng::Derive(seed, {1}).NextU64();
  const std::uint64_t seed_v = Rng::Derive(seed, {2}).NextU64();
  switch (kind) {
    case ParamKind::kSubspace: {
      if (s < r) throw ArgumentError("make_instance: need s >= r");
      const Matrix bu = RandomSingularBasis(n, s, seed_u);
      const Matrix bv = RandomSingularBasis(n, s, seed_v);
      Matrix m = bu.leftCols(r) * bv.leftCols(r).transpose();
      return Instance{std::move(m), LinearParam::Subspace(bu, bv, r)};
    }
    case ParamKind::kRectangular: {
      const Matrix u = RandomSingularBasis(n, r, seed_u);
      const Matrix v = RandomSingularBasis(n, r, seed_v);
      return Instance{u * v.transpose(), LinearParam::Rectangular(n, n, r)};
    }
    case ParamKind::kPsd: {
      const Matrix u = RandomSingularBasis(n, r, seed_u);
      return Instance{u * u.transpose(), LinearParam::Psd(n, r)};
    }
    case ParamKind::kSkew: {
      if (r % 2 != 0) throw ArgumentError("make_instance: skew rank must be even");
      const Matrix q = RandomSingularBasis(n, r, seed_u);
      const Matrix u = q.leftCols(r / 2), v = q.rightCols(r / 2);
      return Instance{u * v.transpose() - v * u.transpose(), LinearParam::Skew(n, r)};
    }
  }
  throw ArgumentError("make_instance: unknown kind");
}

ExperimentResult RunSubspaceNoisy(const ExperimentConfig& config) {
  ValidateConfig(config);
  const int n = config.n, r = config.r.front();
  const Instance truth = MakeInstance(ParamKind::kSubspace, n, r, MaxOf(config.s),
                                      TruthSeed(config));
  std::vector<LinearParam> params;
  for (int s : config.s) {
    params.push_back(LinearParam::Subspace(truth.param.basis_u().leftCols(s),
                                           truth.param.basis_v().leftCols(s), r));
  }
  const double sigma = config.ResolvedSigma();

  // Per-trial data shared by all cells: the noise and one mask per p.
  struct TrialData {
    Rng stream{0};
    Matrix noise;
    std::vector<ObservationMask> masks;
  };
  std::vector<TrialData> data(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    data[t].stream = TrialStream(config, t);
    data[t].noise = DrawNoise(n, sigma, ParamKind::kSubspace, data[t].stream);
    for (double p : config.p_grid) {
      data[t].masks.push_back(DrawMask(n, p, SamplingModel::kBernoulliRect, data[t].stream));
    }
  }

  ExperimentResult result;
  const std::size_t cells = config.p_grid.size() * params.size() * config.trials;
  result.records.resize(cells);
  std::vector<std::function<void()>> tasks;
  std::size_t slot = 0;
  for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
    for (std::size_t si = 0; si < params.size(); ++si) {
      for (int t = 0; t < config.trials; ++t, ++slot) {
        tasks.push_back([&, pi, si, t, slot] {
          const TrialSetup setup{&config, &params[si], &truth.m_star, &data[t].masks[pi],
                                 &data[t].noise, InitSeed(data[t].stream)};
          result.records[slot] = SolveTrial(setup);
          result.records[slot].trial = t;
        });
      }
    }
  }
  RunTasks(tasks, config.jobs);
  result.summary = Summarize(result.records);
  return result;
}

ExperimentResult RunSubspacePhase(const ExperimentConfig& config) {
  return RunSubspaceNoisy(config);
}

ExperimentResult RunSkewCompare(const ExperimentConfig& config) {
  ValidateConfig(config);
  const int n = config.n;
  const int r_max = MaxOf(config.r);
  // One random matrix; rank r uses its first r left singular vectors.
  const Matrix q = RandomSingularBasis(n, r_max, TruthSeed(config));
  std::vector<Matrix> truths;
  std::vector<LinearParam> skew_params, rect_params;
  for (int r : config.r) {
    const Matrix u = q.leftCols(r / 2), v = q.middleCols(r / 2, r / 2);
    truths.push_back(u * v.transpose() - v * u.transpose());
    skew_params.push_back(LinearParam::Skew(n, r));
    rect_params.push_back(LinearParam::Rectangular(n, n, r));
  }
  const SamplingModel model = ModelFor(config, ParamKind::kSkew);
  const double sigma = config.ResolvedSigma();

  struct TrialData {
    Rng stream{0};
    Matrix noise;
    std::vector<ObservationMask> masks;
  };
  std::vector<TrialData> data(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    data[t].stream = TrialStream(config, t);
    data[t].noise = DrawNoise(n, sigma, ParamKind::kSkew, data[t].stream);
    for (double p : config.p_grid) data[t].masks.push_back(DrawMask(n, p, model, data[t].stream));
  }

  ExperimentResult result;
  result.records.resize(config.p_grid.size() * config.r.size() * config.trials * 2);
  std::vector<std::function<void()>> tasks;
  std::size_t slot = 0;
  for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
    for (std::size_t ri = 0; ri < config.r.size(); ++ri) {
      for (int t = 0; t < config.trials; ++t) {
        for (const LinearParam* param : {&skew_params[ri], &rect_params[ri]}) {
          tasks.push_back([&, pi, ri, t, slot, param] {
            const TrialSetup setup{&config, param, &truths[ri], &data[t].masks[pi],
                                   &data[t].noise, InitSeed(data[t].stream)};
            result.records[slot] = SolveTrial(setup);
            result.records[slot].trial = t;
          });
          ++slot;
        }
      }
    }
  }
  RunTasks(tasks, config.jobs);
  result.summary = Summarize(result.records);
  return result;
}

ExperimentResult RunSingleSolve(const ExperimentConfig& config) {
  ValidateConfig(config);
  const int n = config.n, r = config.r.front();
  const int s = config.s.empty() ? r : config.s.front();
  const Instance truth = MakeInstance(config.kind, n, r, s, TruthSeed(config));
  const SamplingModel model = ModelFor(config, config.kind);
  const double sigma = config.ResolvedSigma();

  ExperimentResult result;
  result.records.resize(config.p_grid.size() * config.trials);
  std::vector<Matrix> noises(config.trials);
  std::vector<Rng> streams;
  for (int t = 0; t < config.trials; ++t) {
    streams.push_back(TrialStream(config, t));
    noises[t] = DrawNoise(n, sigma, config.kind, streams[t]);
  }
  std::vector<std::function<void()>> tasks;
  std::size_t slot = 0;
  for (double p : config.p_grid) {
    for (int t = 0; t < config.trials; ++t, ++slot) {
      tasks.push_back([&, p, t, slot] {
        const ObservationMask mask = DrawMask(n, p, model, streams[t]);
        const TrialSetup setup{&config, &truth.param, &truth.m_star, &mask, &noises[t],
                               InitSeed(streams[t])};
        result.records[slot] = SolveTrial(setup);
        result.records[slot].trial = t;
      });
    }
  }
  RunTasks(tasks, config.jobs);
  result.summary = Summarize(result.records);
  return result;
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::kSubspaceNoisy:
      return RunSubspaceNoisy(config);
    case Experiment::kSubspacePhase:
      return RunSubspacePhase(config);
    case Experiment::kSkewCompare:
      return RunSkewCompare(config);
    case Experiment::kSingleSolve:
      return RunSingleSolve(config);
    case Experiment::kDiagnostics:
      break;
  }
  throw ArgumentError("run_experiment: diagnostics produce a report, not a CSV");
}

void WriteCsv(std::ostream& os, const ExperimentResult& result, bool timing) {
  os << "experiment,trial,p,s,r,solver,seed,observed,relative_error,success,iterations,"
        "termination,wall_time\n";
  for (const TrialRecord& rec : result.records) {
    os << rec.experiment << ',' << rec.trial << ',' << Short(rec.p) << ',' << rec.s << ','
       << rec.r << ',' << rec.solver << ',' << rec.seed << ',' << rec.observed << ','
       << Num(rec.relative_error) << ',' << (rec.success ? 1 : 0) << ',' << rec.iterations
       << ',' << rec.termination << ',' << (timing ? Num(rec.wall_time) : "NA") << '\n';
  }
  os << "#summary,experiment,p,s,r,solver,trials,mean_log10_error,median_log10_error,"
        "success_rate\n";
  for (const SummaryRow& row : result.summary) {
    os << "#summary," << row.experiment << ',' << Short(row.p) << ',' << row.s << ','
       << row.r << ',' << row.solver << ',' << row.trials << ',' << Num(row.mean_log10_error)
       << ',' << Num(row.median_log10_error) << ',' << Num(row.success_rate) << '\n';
  }
  if (!os) throw IoError("write_csv: stream failure");
}

void WriteGnuplot(std::ostream& os, const ExperimentResult& result) {
  std::map<std::tuple<int, int, std::string>, std::vector<const SummaryRow*>> series;
  for (const SummaryRow& row : result.summary) {
    series[std::make_tuple(row.s, row.r, row.solver)].push_back(&row);
  }
  bool first = true;
  for (auto& [key, rows] : series) {
    if (!first) os << "\n\n";
    first = false;
    const auto& [s, r, solver] = key;
    os << "# solver=" << solver << " r=" << r << " s=" << s << "\n";
    os << "# p mean_log10_error median_log10_error success_rate\n";
    std::sort(rows.begin(), rows.end(),
              [](const SummaryRow* a, const SummaryRow* b) { return a->p < b->p; });
    for (const SummaryRow* row : rows) {
      os << Short(row->p) << ' ' << Num(row->mean_log10_error) << ' '
         << Num(row->median_log10_error) << ' ' << Num(row->success_rate) << '\n';
    }
  }
  if (!os) throw IoError("write_gnuplot: stream failure");
}

DiagnosticsReport RunDiagnostics(const ExperimentConfig& config) {
  ValidateConfig(config);
  const int n = config.n, r = config.r.front();
  const int s = config.s.empty() ? r : config.s.front();
  const double p = config.p_grid.front();
  const double sigma = config.ResolvedSigma();
  const Instance truth = MakeInstance(config.kind, n, r, s, TruthSeed(config));
  const LinearParam& param = truth.param;
  const Rng stream = TrialStream(config, 0);
  const ObservationMask mask = DrawMask(n, p, ModelFor(config, config.kind), stream);
  const Matrix noise = DrawNoise(n, sigma, config.kind, stream);
  if (mask.size() == 0) throw ArgumentError("diagnostics: the sampled mask is empty");
  const double p_hat = EstimateP(mask);
  const double lambda = config.lambda.value_or(DefaultLambda(n, n, p_hat));
  const double alpha = config.alpha.value_or(kDefaultAlpha);
  const ObjectiveSpec spec(param, ProjectOmega(truth.m_star + noise, mask), mask, p_hat,
                           lambda, alpha);

  DiagnosticsReport report;
  std::ostringstream out;
  auto fail = [&](const std::string& name) {
    if (std::find(report.failures.begin(), report.failures.end(), name) ==
        report.failures.end()) {
      report.failures.push_back(name);
    }
  };

  out << "[instance]\n"
      << "kind: " << ToString(config.kind) << "\n"
      << "n: " << n << "\nr: " << r << "\n";
  if (config.kind == ParamKind::kSubspace) out << "s: " << s << "\n";
  out << "p: " << Short(p) << "\np_hat: " << Num(p_hat) << "\nobserved: " << mask.size()
      << "\nsigma: " << Num(sigma) << "\nlambda: " << Num(lambda) << "\nalpha: " << Num(alpha)
      << "\nseed: " << config.master_seed << "\n\n";

  const GroundTruthProfile profile = Profile(truth.m_star, r);
  out << "[profile]\n"
      << "sigma1: " << Num(profile.sigma1) << "\nsigma_r: " << Num(profile.sigma_r)
      << "\nkappa: " << Num(profile.kappa) << "\nmu: " << Num(profile.mu) << "\n\n";

  Rng theta_rng = stream.Split(kInitStream);
  std::vector<Vector> thetas, xis;
  out << "[witness]\n";
  for (int i = 0; i < config.trials; ++i) {
    Vector theta(param.dim());
    for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = theta_rng.Normal();
    const WitnessCertificate cert = Witness(param, theta, truth.m_star);
    const BasicPropertiesReport basic = BasicProperties(param, cert.xi, profile);
    out << "theta_" << i << ": fit=" << Num(cert.residual_fit)
        << " balance=" << Num(cert.residual_balance)
        << " min_corr_eig=" << Num(cert.min_corr_eig) << " certified="
        << (cert.passes() ? "true" : "false") << " basic_properties="
        << (basic.passes() ? "true" : "false") << "\n";
    if (!cert.passes()) fail("witness");
    if (!basic.passes()) fail("basic-properties");
    thetas.push_back(std::move(theta));
    xis.push_back(cert.xi);
  }
  out << "\n";

  out << "[key_identity]\n";
  double worst_identity = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    Vector delta(param.dim());
    for (Eigen::Index k = 0; k < delta.size(); ++k) delta(k) = theta_rng.Normal();
    const double kt = AuxKtilde(spec, thetas[i], delta);
    const double kf =
        AuxKf(spec, param.X(thetas[i]), param.Y(thetas[i]), param.X(delta), param.Y(delta));
    const double residual = std::abs(kt - kf) / (1.0 + std::abs(kf));
    worst_identity = std::max(worst_identity, residual);
    out << "theta_" << i << ": k_tilde=" << Num(kt) << " k_f=" << Num(kf)
        << " residual=" << Num(residual) << "\n";
  }
  out << "max_residual: " << Num(worst_identity) << "\n\n";
  if (!(worst_identity <= 1e-8)) fail("key-identity");

  out << "[k_decomposition]\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const KReport k = KDecomposition(spec, thetas[i], xis[i], truth.m_star, noise);
    out << "theta_" << i << ": k_tilde=" << Num(k.k_tilde) << " k_f=" << Num(k.k_f)
        << " k1=" << Num(k.k1) << " k2=" << Num(k.k2) << " k3=" << Num(k.k3)
        << " k4=" << Num(k.k4) << " bound=" << Num(k.bound())
        << " holds=" << (k.bound_holds() ? "true" : "false") << "\n";
    if (!k.bound_holds()) fail("k-bound");
    if (!k.identity_holds()) fail("key-identity");
    if (sigma == 0.0 && k.k4 != 0.0) fail("k4-noiseless");
  }
  out << "\n";

  out << "[psi]\n"
      << "surrogate: " << Num(PsiSurrogate(mask, noise, param)) << "\n";
  if (config.kind == ParamKind::kSubspace) {
    out << "unprojected: " << Num(SpectralNorm(ProjectOmega(noise, mask))) << "\n";
  }
  out << "\n";

  out << "[rate_conditions]\n";
  for (const auto& [label, c] : {std::pair<const char*, double>{"c=1", 1.0},
                                 std::pair<const char*, double>{"c=C0", kC0Preset}}) {
    const RateReport rate = RateConditions(profile, p_hat, lambda, alpha, n, n, c, c);
    for (const RateLine& line : rate.lines) {
      out << label << " " << line.name << ": value=" << Num(line.value)
          << " lower=" << Num(line.lower) << " upper=" << Num(line.upper)
          << " binding=\"" << line.binding << "\" pass=" << (line.pass ? "true" : "false")
          << "\n";
    }
  }
  out << "\n";

  const ConcentrationReport conc =
      ConcentrationSpotchecks(mask, 20, r, stream.Split(kNoiseStream).NextU64() ^ 1);
  out << "[concentration]\n"
      << "trials: " << conc.trials.size() << "\nomega_gap: " << Num(conc.trials[0].omega_gap)
      << "\nratio_to_sqrt_nmax_p: " << Num(conc.max_ratio())
      << "\nall_hold: " << (conc.all_hold() ? "true" : "false")
      << "\nrip_deviation: "
      << Num(RipDeviation(mask, profile, 20, stream.Split(kNoiseStream).NextU64() ^ 2))
      << "\n\n";
  if (!conc.all_hold()) fail("concentration");

  SolveConfig solve_config;
  solve_config.max_iters = config.max_iters;
  solve_config.seed = InitSeed(stream);
  const SolveResult solved = Solve(spec, solve_config);
  const WitnessCertificate cert = Witness(param, solved.theta_hat, truth.m_star);
  const double truth_sq = truth.m_star.squaredNorm();
  out << "[solve]\n"
      << "relative_error: " << Num((solved.m_hat - truth.m_star).squaredNorm() / truth_sq)
      << "\niterations: " << solved.iterations
      << "\ntermination: " << ToString(solved.termination)
      << "\ngrad_norm_sq: " << Num(solved.grad_norm_sq_final)
      << "\nk_tilde_at_solution: "
      << Num(AuxKtilde(spec, solved.theta_hat, solved.theta_hat - cert.xi)) << "\n\n";

  out << "[checks]\n";
  if (report.failures.empty()) {
    out << "status: pass\n";
  } else {
    out << "status: fail\nfailed:";
    for (const auto& name : report.failures) out << ' ' << name;
    out << "\n";
  }
  report.text = out.str();
  return report;
}

}  // namespace lpmc
