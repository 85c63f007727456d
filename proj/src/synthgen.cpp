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

#include "flowshap/synthgen.hpp"

#include <cmath>
#include <set>

#include "flowshap/error.hpp"
#include "flowshap/io.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::synth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_distribution(const Distribution& dist, const std::string& where) {
  std::visit(Overloaded{
                 [&](const Uniform& u) {
                   require(std::isfinite(u.lo) && std::isfinite(u.hi) && u.lo <= u.hi,
                           ErrorCode::kInvalidArgument, where + ": uniform requires lo <= hi");
                 },
                 [&](const Normal& n) {
                   require(std::isfinite(n.mean) && std::isfinite(n.stddev) && n.stddev >= 0.0,
                           ErrorCode::kInvalidArgument, where + ": normal requires stddev >= 0");
                 },
                 [&](const Bernoulli& b) {
                   require(b.q >= 0.0 && b.q <= 1.0, ErrorCode::kInvalidArgument,
                           where + ": bernoulli requires 0 <= q <= 1");
                 },
                 [&](const Constant& c) {
                   require(std::isfinite(c.value), ErrorCode::kInvalidArgument, where + ": constant must be finite");
                 },
             },
             dist);
}

Distribution distribution_from_json(const nlohmann::json& doc, const std::string& where) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "uniform") return Uniform{doc.at("lo").get<double>(), doc.at("hi").get<double>()};
  if (type == "normal") return Normal{doc.at("mean").get<double>(), doc.at("stddev").get<double>()};
  if (type == "bernoulli") return Bernoulli{doc.at("q").get<double>()};
  if (type == "constant") return Constant{doc.at("value").get<double>()};
  fail(ErrorCode::kInvalidArgument, where + ": unknown distribution type '" + type + "'");
}

nlohmann::json distribution_to_json(const Distribution& dist) {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return nlohmann::json{{"type", "uniform"}, {"lo", u.lo}, {"hi", u.hi}}; },
                        [](const Normal& n) {
                          return nlohmann::json{{"type", "normal"}, {"mean", n.mean}, {"stddev", n.stddev}};
                        },
                        [](const Bernoulli& b) { return nlohmann::json{{"type", "bernoulli"}, {"q", b.q}}; },
                        [](const Constant& c) { return nlohmann::json{{"type", "constant"}, {"value", c.value}}; },
                    },
                    dist);
}

}  // namespace

double sample(const Distribution& dist, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const Uniform& u) { return rng.uniform(u.lo, u.hi); },
                        [&](const Normal& n) { return rng.normal(n.mean, n.stddev); },
                        [&](const Bernoulli& b) { return rng.bernoulli(b.q) ? 1.0 : 0.0; },
                        [&](const Constant& c) { return c.value; },
                    },
                    dist);
}

void SynthSpec::validate() const {
  require(!features.empty(), ErrorCode::kInvalidArgument, "synth spec has no features");
  std::set<std::string, std::less<>> names;
  for (const FeatureSpec& f : features) {
    require(!f.name.empty(), ErrorCode::kInvalidArgument, "feature name is empty");
    require(f.name != label_column, ErrorCode::kInvalidArgument, "feature name collides with label column");
    require(names.insert(f.name).second, ErrorCode::kInvalidArgument, "duplicate feature name: " + f.name);
    validate_distribution(f.benign, f.name + " (benign)");
    validate_distribution(f.attack, f.name + " (attack)");
  }
  require(benign_label != attack_label, ErrorCode::kInvalidArgument, "benign and attack labels must differ");
}

RawTable generate(const SynthSpec& spec, std::size_t n_benign, std::size_t n_attack, std::uint64_t seed) {
  spec.validate();
  require(n_benign + n_attack >= 2, ErrorCode::kInvalidArgument, "generate needs at least two rows");
  const std::size_t rows = n_benign + n_attack;
  std::vector<RawColumn> columns(spec.features.size() + 1);
  for (std::size_t j = 0; j < spec.features.size(); ++j) {
    columns[j].name = spec.features[j].name;
    columns[j].numbers.reserve(rows);
  }
  RawColumn& labels = columns.back();
  labels.name = spec.label_column;
  labels.is_text = true;
  labels.text.reserve(rows);

  Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    const bool benign = r < n_benign;
    for (std::size_t j = 0; j < spec.features.size(); ++j) {
      const FeatureSpec& f = spec.features[j];
      columns[j].numbers.push_back(sample(benign ? f.benign : f.attack, rng));
    }
    labels.text.push_back(benign ? spec.benign_label : spec.attack_label);
  }
  return RawTable(std::move(columns), spec.label_column);
}

SynthSpec ddos_like_preset() {
  SynthSpec spec;
  spec.features = {
      {"Inbound", Bernoulli{0.08}, Bernoulli{0.96}},
      {"Min Packet Length", Normal{180.0, 40.0}, Normal{6.0, 3.0}},
      {"Fwd Packet Length Min", Normal{160.0, 40.0}, Normal{8.0, 4.0}},
      {"URG Flag Count", Bernoulli{0.35}, Bernoulli{0.02}},
      {"Flow Duration", Normal{5.0e5, 2.0e5}, Normal{1.0e3, 500.0}},
      {"Total Fwd Packets", Normal{12.0, 4.0}, Normal{2.0, 0.5}},
      {"Total Backward Packets", Normal{10.0, 4.0}, Constant{0.0}},
      {"Packet Length Std", Normal{90.0, 25.0}, Normal{2.0, 1.0}},
      {"Average Packet Size", Normal{250.0, 60.0}, Normal{420.0, 20.0}},
      {"Fwd Packet Length Max", Normal{400.0, 120.0}, Normal{440.0, 10.0}},
      {"ACK Flag Count", Bernoulli{0.6}, Bernoulli{0.1}},
      {"Protocol", Bernoulli{0.3}, Bernoulli{0.99}},
      {"Flow IAT Mean", Normal{8.0e4, 3.0e4}, Normal{200.0, 100.0}},
      {"Flow IAT Std", Normal{4.0e4, 1.5e4}, Normal{150.0, 80.0}},
      {"Bwd Packet Length Mean", Normal{300.0, 90.0}, Constant{0.0}},
      {"Init_Win_bytes_forward", Normal{8000.0, 3000.0}, Normal{-1.0, 0.0}},
      {"Fwd PSH Flags", Bernoulli{0.05}, Bernoulli{0.05}},
      {"CWE Flag Count", Bernoulli{0.1}, Bernoulli{0.1}},
      {"ECE Flag Count", Bernoulli{0.02}, Bernoulli{0.02}},
      {"Active Mean", Normal{100.0, 30.0}, Normal{100.0, 30.0}},
      {"Active Std", Uniform{0.0, 50.0}, Uniform{0.0, 50.0}},
      {"Idle Mean", Normal{500.0, 120.0}, Normal{500.0, 120.0}},
      {"Idle Std", Uniform{0.0, 80.0}, Uniform{0.0, 80.0}},
      {"Down/Up Ratio", Normal{1.0, 0.3}, Normal{1.0, 0.3}},
  };
  return spec;
}

SynthSpec informative_noise_preset(std::size_t informative, std::size_t noise, double shift) {
  SynthSpec spec;
  for (std::size_t i = 0; i < informative; ++i) {
    spec.features.push_back({"informative_" + std::to_string(i + 1), Normal{0.0, 1.0}, Normal{shift, 1.0}});
  }
  for (std::size_t i = 0; i < noise; ++i) {
    spec.features.push_back({"noise_" + std::to_string(i + 1), Normal{0.0, 1.0}, Normal{0.0, 1.0}});
  }
  return spec;
}

SynthSpec spec_from_json(const nlohmann::json& doc) {
  SynthSpec spec;
  try {
    spec.label_column = doc.value("label_column", spec.label_column);
    spec.benign_label = doc.value("benign_label", spec.benign_label);
    spec.attack_label = doc.value("attack_label", spec.attack_label);
    for (const auto& f : doc.at("features")) {
      const std::string name = f.at("name").get<std::string>();
      spec.features.push_back(
          {name, distribution_from_json(f.at("benign"), name), distribution_from_json(f.at("attack"), name)});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("synth spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const SynthSpec& spec) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeatureSpec& f : spec.features) {
    features.push_back({{"name", f.name}, {"benign", distribution_to_json(f.benign)}, {"attack", distribution_to_json(f.attack)}});
  }
  return {{"label_column", spec.label_column},
          {"benign_label", spec.benign_label},
          {"attack_label", spec.attack_label},
          {"features", features}};
}

SynthSpec load_spec(const std::filesystem::path& path) { return spec_from_json(read_json(path)); }

}  // namespace flowshap::synth
