/*
 * Copyright 2026 The flowshap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace flowshap {

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every derived quantity below is
// computed here rather than through <random> distributions (which differ
// between standard libraries), so a seed reproduces the same stream on any
// platform and in other languages:
//
//   uniform()      (next() >> 11) * 2^-53, in [0, 1)
//   below(n)       rejection sampling: draw r until r >= (2^64 - n) mod n,
//                  return r mod n
//   normal(m, s)   Box-Muller, one uniform pair per draw:
//                  m + s * sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
//   shuffle        Fisher-Yates from the back, j = below(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double stddev);
  bool bernoulli(double q) { return uniform() < q; }
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Child seeds: splitmix64(root XOR fnv1a64(label)) and
// splitmix64(root + golden_gamma * (index + 1)).
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::span<const std::byte> bytes);

}  // namespace flowshap
