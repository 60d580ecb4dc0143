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

#include "lpmc/rng.h"

#include <cmath>
#include <numbers>

namespace lpmc {

std::uint64_t Rng::Mix(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  Rng rng(seed);
  for (std::uint64_t id : path) rng = rng.Split(id);
  return rng;
}

Rng Rng::Split(std::uint64_t id) const {
  Rng child(0);
  child.key_ = Mix(key_ ^ Mix(id + 0x3c6ef372fe94f82bULL));
  return child;
}

std::uint64_t Rng::NextU64() {
  // Two rounds over (key, counter) keep nearby keys decorrelated.
  const std::uint64_t c = counter_++;
  return Mix(Mix(key_ + c * 0x9e3779b97f4a7c15ULL) ^ key_);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace lpmc
