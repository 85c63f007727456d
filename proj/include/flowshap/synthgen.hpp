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
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "flowshap/dataio.hpp"
#include "flowshap/rng.hpp"
#include "json.hpp"

namespace flowshap::synth {

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Normal {
  double mean = 0.0;
  double stddev = 1.0;
};
struct Bernoulli {
  double q = 0.5;
};
struct Constant {
  double value = 0.0;
};

using Distribution = std::variant<Uniform, Normal, Bernoulli, Constant>;

double sample(const Distribution& dist, Rng& rng);

struct FeatureSpec {
  std::string name;
  Distribution benign;
  Distribution attack;
};

struct SynthSpec {
  std::vector<FeatureSpec> features;
  std::string label_column = "Label";
  std::string benign_label = "BENIGN";
  std::string attack_label = "ATTACK";

  // Throws on duplicate names or invalid distribution parameters.
  void validate() const;
};

// Rows are emitted benign-first. Cells are drawn row by row, feature by
// feature, from one Rng seeded with `seed`.
RawTable generate(const SynthSpec& spec, std::size_t n_benign, std::size_t n_attack, std::uint64_t seed);

// Flow-like preset: binary "Inbound" and "URG Flag Count", near-zero
// "Min Packet Length" for attacks, several separated volume/timing features
// and a handful of uninformative ones (24 features in total).
SynthSpec ddos_like_preset();

// `informative` features with unit-variance class shift `shift`, followed by
// `noise` features drawn from the same distribution for both classes.
SynthSpec informative_noise_preset(std::size_t informative, std::size_t noise, double shift);

// JSON form:
//   {"label_column": "Label", "benign_label": "BENIGN", "attack_label": "ATTACK",
//    "features": [{"name": "x", "benign": {"type": "normal", "mean": 0, "stddev": 1},
//                  "attack": {"type": "uniform", "lo": 0, "hi": 1}}]}
// with distribution types uniform(lo, hi), normal(mean, stddev),
// bernoulli(q), constant(value).
SynthSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SynthSpec& spec);
SynthSpec load_spec(const std::filesystem::path& path);

}  // namespace flowshap::synth
