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

#ifndef LPMC_ERRORS_H_
#define LPMC_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace lpmc {

// Bad shapes, out-of-range probabilities, length mismatches.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An input violates a structural precondition (e.g. a matrix that should be
// skew-symmetric is not).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is structurally valid but degenerate for the requested operation:
// odd numerical rank of a skew matrix, rank below the requested r, ground
// truth outside the span of a subspace basis, an indefinite "PSD" input.
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative kernel failed to converge or produced non-finite values.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double best_estimate = 0.0,
                 std::vector<double> trace = {})
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        trace_(std::move(trace)) {}

  double best_estimate() const { return best_estimate_; }
  const std::vector<double>& trace() const { return trace_; }

 private:
  double best_estimate_;
  std::vector<double> trace_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpmc

#endif  // LPMC_ERRORS_H_
