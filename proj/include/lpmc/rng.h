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

#ifndef LPMC_RNG_H_
#define LPMC_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace lpmc {

// Counter-based generator. The i-th output of a stream is a pure function of
// (key, i), so a trial can derive its own stream from (master seed, ids...)
// without consuming anything from a shared sequence. Output bits are
// identical on every platform; normal variates go through std::log/std::cos
// and are reproducible wherever libm is correctly rounded.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(Mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Stream for a path of identifiers below `seed`, e.g.
  // Rng::Derive(master, {experiment_id, trial}).
  static Rng Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  // Child stream; does not advance this one.
  Rng Split(std::uint64_t id) const;

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal (Box-Muller, second variate cached).
  double Normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t Mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lpmc

#endif  // LPMC_RNG_H_
