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

// Command-line front end for the experiment sweeps and the diagnostics report.
//
//   lpmc subspace-phase --n 60 --s 6 --p-grid 0.02,0.5 --trials 10 --out phase.csv
//   lpmc diagnostics --n 40 --s 5
//   lpmc skew-compare --config desk.toml --trials 3
//
// Exit status: 0 on success, 2 when a hard invariant fails, 1 on I/O or
// argument errors.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpmc/errors.h"
#include "lpmc/experiments.h"
#include "lpmc/parameterization.h"
#include "lpmc/sampling.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIoOrArgs = 1;
constexpr int kExitInvariant = 2;

struct Flags {
  std::optional<int> n;
  std::vector<int> r;
  std::vector<int> s;
  std::vector<double> p_grid;
  std::optional<double> sigma;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<int> max_iters;
  std::optional<std::string> kind;
  std::optional<std::string> model;
  std::optional<int> jobs;
  bool timing = false;
  std::string out;
  std::string dat;
};

void AddFlags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--n", f.n, "matrix size (n1 = n2 = n)");
  cmd.add_option("--r", f.r, "rank, or comma list of ranks")->delimiter(',');
  cmd.add_option("--s", f.s, "subspace dimension, or comma list")->delimiter(',');
  cmd.add_option("--p-grid", f.p_grid, "comma list of sampling rates")->delimiter(',');
  cmd.add_option("--sigma", f.sigma, "noise standard deviation");
  cmd.add_option("--trials", f.trials, "trials per grid cell");
  cmd.add_option("--seed", f.seed, "master seed");
  cmd.add_option("--lambda", f.lambda, "regularizer weight (default 100 sqrt((n1+n2) p_hat))");
  cmd.add_option("--alpha", f.alpha, "regularizer threshold (default 100)");
  cmd.add_option("--max-iters", f.max_iters, "gradient descent iteration cap");
  cmd.add_option("--kind", f.kind, "rectangular | psd | subspace | skew");
  cmd.add_option("--model", f.model, "bernoulli-rect | symmetric-offdiag");
  cmd.add_option("--jobs", f.jobs, "worker threads");
  cmd.add_flag("--timing", f.timing, "record wall_time (output is no longer byte-stable)");
  cmd.add_option("--out", f.out, "output path (default stdout)");
  cmd.add_option("--dat", f.dat, "also write gnuplot data blocks to this path");
}

lpmc::ExperimentConfig BuildConfig(lpmc::Experiment experiment, const Flags& f) {
  lpmc::ExperimentConfig c = lpmc::DefaultConfig(experiment);
  if (f.n) c.n = *f.n;
  if (!f.r.empty()) c.r = f.r;
  if (!f.s.empty()) c.s = f.s;
  if (!f.p_grid.empty()) c.p_grid = f.p_grid;
  if (f.sigma) c.sigma = *f.sigma;
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.master_seed = *f.seed;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.max_iters) c.max_iters = *f.max_iters;
  if (f.kind) c.kind = lpmc::ParseParamKind(*f.kind);
  if (f.model) c.model = lpmc::ParseSamplingModel(*f.model);
  if (f.jobs) c.jobs = *f.jobs;
  c.timing = f.timing;
  lpmc::ValidateConfig(c);
  return c;
}

// Writes through `write` to `path`, or to stdout when the path is empty.
template <typename Fn>
void Emit(const std::string& path, Fn write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw lpmc::IoError("cannot write to stdout");
    return;
  }
  std::ofstream file(path);
  if (!file) throw lpmc::IoError("cannot open '" + path + "' for writing");
  write(file);
  file.close();
  if (!file) throw lpmc::IoError("write to '" + path + "' failed");
}

int Run(lpmc::Experiment experiment, const Flags& f) {
  const lpmc::ExperimentConfig config = BuildConfig(experiment, f);
  if (experiment == lpmc::Experiment::kDiagnostics) {
    const lpmc::DiagnosticsReport report = lpmc::RunDiagnostics(config);
    Emit(f.out, [&](std::ostream& os) { os << report.text; });
    if (!report.ok()) {
      for (const std::string& name : report.failures) {
        std::cerr << "hard check failed: " << name << "\n";
      }
      return kExitInvariant;
    }
    return kExitOk;
  }
  const lpmc::ExperimentResult result = lpmc::RunExperiment(config);
  Emit(f.out, [&](std::ostream& os) { lpmc::WriteCsv(os, result, config.timing); });
  if (!f.dat.empty()) {
    Emit(f.dat, [&](std::ostream& os) { lpmc::WriteGnuplot(os, result); });
  }
  return kExitOk;
}

// Expands a key = value file into "--key=value" arguments. Keys already given
// on the command line are skipped so the command line wins. Sectioned keys
// apply only to the matching subcommand.
std::vector<std::string> ConfigArgs(const std::string& path, const std::string& command,
                                    const std::vector<std::string>& cli_args) {
  std::set<std::string> given;
  for (const std::string& arg : cli_args) {
    if (arg.rfind("--", 0) == 0) given.insert(arg.substr(2, arg.find('=') - 2));
  }
  std::vector<std::string> out;
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(path)) {
    if (!item.parents.empty() && item.parents != std::vector<std::string>{command}) continue;
    if (item.name == "config" || given.count(item.name)) continue;
    std::string joined;
    for (const std::string& value : item.inputs) joined += (joined.empty() ? "" : ",") + value;
    out.push_back("--" + item.name + "=" + joined);
  }
  return out;
}

const lpmc::Experiment kExperiments[] = {
    lpmc::Experiment::kSubspaceNoisy, lpmc::Experiment::kSubspacePhase,
    lpmc::Experiment::kSkewCompare, lpmc::Experiment::kSingleSolve,
    lpmc::Experiment::kDiagnostics};

const char* const kDescriptions[] = {
    "noisy subspace-constrained completion sweep over (p, s)",
    "noiseless subspace-constrained success-rate sweep over (p, s)",
    "skew versus rectangular solver on identical skew data",
    "independent solves of one generated instance",
    "landscape diagnostics report for one generated instance"};

// Parses args (program name first); returns the index of the chosen
// subcommand, or an exit code through `exit_code` when parsing stops.
int Parse(const std::vector<std::string>& args, Flags& flags, std::string& config,
          std::optional<int>& exit_code) {
  CLI::App app{"Nonconvex matrix completion with linear parameterizations"};
  app.require_subcommand(1);
  std::vector<CLI::App*> commands;
  for (int i = 0; i < 5; ++i) {
    CLI::App* cmd =
        app.add_subcommand(std::string(lpmc::ToString(kExperiments[i])), kDescriptions[i]);
    AddFlags(*cmd, flags);
    cmd->add_option("--config", config, "key = value file with the same option names")
        ->check(CLI::ExistingFile);
    commands.push_back(cmd);
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e) == 0 ? kExitOk : kExitIoOrArgs;
    return -1;
  }
  for (int i = 0; i < 5; ++i) {
    if (commands[i]->parsed()) return i;
  }
  exit_code = kExitIoOrArgs;
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  Flags flags;
  std::string config;
  std::optional<int> exit_code;
  int command = Parse(args, flags, config, exit_code);
  if (exit_code) return *exit_code;

  try {
    if (!config.empty()) {
      // Re-parse with the file's keys spliced in after the subcommand name.
      const std::string name(lpmc::ToString(kExperiments[command]));
      const auto at = std::find(args.begin() + 1, args.end(), name);
      const std::vector<std::string> rest(at + 1, args.end());
      std::vector<std::string> merged(args.begin(), at + 1);
      for (std::string& arg : ConfigArgs(config, name, rest)) merged.push_back(std::move(arg));
      merged.insert(merged.end(), rest.begin(), rest.end());
      flags = Flags{};
      command = Parse(merged, flags, config, exit_code);
      if (exit_code) return *exit_code;
    }
    return Run(kExperiments[command], flags);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  } catch (const lpmc::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  } catch (const lpmc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  } catch (const std::exception& e) {
    // Contract, degeneracy and numeric failures are broken invariants.
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  }
}
