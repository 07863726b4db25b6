// Copyright 2026 The bellnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic seeded randomness.  splitmix64 is used instead of the
// standard-library engines because its output stream is fully specified, so
// seeded reports are byte-identical across platforms and standard-library
// versions.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bellnet {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); rejection sampling keeps it unbiased.
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  // Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Dirichlet(1,...,1) weights: a uniform point on the simplex.
  std::vector<double> simplex_weights(int k) {
    if (k <= 0) throw std::invalid_argument("Rng::simplex_weights: k must be positive");
    std::vector<double> w(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& v : w) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      v = -std::log(u);
      total += v;
    }
    for (double& v : w) v /= total;
    return w;
  }

  // Independent deterministic substream; substreams with distinct tags do
  // not collide for any practical workload.
  Rng substream(std::uint64_t tag) const {
    Rng child(state_ ^ (0xD1B54A32D192ED03ull * (tag + 1)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bellnet
