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

#include "flowshap/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flowshap/error.hpp"
#include "flowshap/io.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::mlp {

namespace {

using ColMatrix = Eigen::MatrixXd;

double sigmoid(double z) {
  // Keep the output strictly inside (0, 1) even where exp() saturates.
  constexpr double kLo = std::numeric_limits<double>::min();
  constexpr double kHi = 1.0 - 0x1.0p-53;
  return std::clamp(1.0 / (1.0 + std::exp(-z)), kLo, kHi);
}

double activate(Activation a, double z) { return a == Activation::kRelu ? std::max(z, 0.0) : sigmoid(z); }

double clamped(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

double cross_entropy(double p, int y) {
  const double q = clamped(p);
  return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double forward_impl(const MlpModel& model, Vector h) {
  const std::size_t layers = model.weights.size();
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    Vector z = model.weights[l] * h + model.biases[l];
    h = z.unaryExpr([a = model.hidden_activation](double v) { return activate(a, v); });
  }
  const double logit = model.weights.back().row(0).dot(h) + model.biases.back()(0);
  return sigmoid(logit);
}

void check_labels(std::span<const int> labels, Eigen::Index rows) {
  require(labels.size() == static_cast<std::size_t>(rows), ErrorCode::kDimensionMismatch,
          "label count differs from row count");
  for (int y : labels) require(y == 0 || y == 1, ErrorCode::kInvalidArgument, "labels must be 0 or 1");
}

void check_input(const MlpModel& model, Eigen::Index cols) {
  require(static_cast<std::size_t>(cols) == model.input_dim(), ErrorCode::kDimensionMismatch,
          "model expects " + std::to_string(model.input_dim()) + " features, got " + std::to_string(cols));
}

// Batched backward pass; returns gradients of the mean clamped loss.
Gradients backprop(const MlpModel& model, const Matrix& rows, std::span<const int> labels) {
  const std::size_t layers = model.weights.size();
  const auto n = rows.rows();
  std::vector<ColMatrix> pre(layers);     // n x units
  std::vector<ColMatrix> post(layers + 1);
  post[0] = rows;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = (post[l] * model.weights[l].transpose()).rowwise() + model.biases[l].transpose();
    if (l + 1 < layers) {
      post[l + 1] = pre[l].unaryExpr([a = model.hidden_activation](double v) { return activate(a, v); });
    } else {
      post[l + 1] = pre[l].unaryExpr([](double v) { return sigmoid(v); });
    }
  }

  ColMatrix delta(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = post[layers](i, 0);
    const bool inside = p >= kProbFloor && p <= 1.0 - kProbFloor;
    delta(i, 0) = inside ? (p - labels[static_cast<std::size_t>(i)]) / static_cast<double>(n) : 0.0;
  }

  Gradients grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    grads.weights[l] = delta.transpose() * post[l];
    grads.biases[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    ColMatrix upstream = delta * model.weights[l];
    if (model.hidden_activation == Activation::kRelu) {
      delta = upstream.cwiseProduct(pre[l - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    } else {
      delta = upstream.cwiseProduct(post[l].unaryExpr([](double a) { return a * (1.0 - a); }));
    }
  }
  return grads;
}

// Visits every parameter of the model as a mutable double.
template <typename Fn>
void for_each_parameter(MlpModel& model, Fn&& fn) {
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < model.weights[l].size(); ++i) fn(model.weights[l].data()[i], l, true, i);
    for (Eigen::Index i = 0; i < model.biases[l].size(); ++i) fn(model.biases[l].data()[i], l, false, i);
  }
}

}  // namespace

std::string_view to_string(Activation a) { return a == Activation::kRelu ? "relu" : "logistic"; }
std::string_view to_string(Optimizer o) { return o == Optimizer::kSgd ? "sgd" : "adam"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "logistic" || name == "sigmoid") return Activation::kLogistic;
  fail(ErrorCode::kInvalidArgument, "unknown activation: " + std::string(name));
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adam") return Optimizer::kAdam;
  fail(ErrorCode::kInvalidArgument, "unknown optimizer: " + std::string(name));
}

std::size_t MlpModel::num_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

void MlpModel::validate() const {
  require(layer_sizes.size() >= 2, ErrorCode::kInvalidArgument, "model needs an input and an output layer");
  require(layer_sizes.back() == 1, ErrorCode::kInvalidArgument, "output layer must have one unit");
  require(weights.size() == layer_sizes.size() - 1 && biases.size() == weights.size(), ErrorCode::kInvalidArgument,
          "parameter count does not match layer count");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    require(layer_sizes[l] > 0, ErrorCode::kInvalidArgument, "layer sizes must be positive");
    const auto rows = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    const auto cols = static_cast<Eigen::Index>(layer_sizes[l]);
    require(weights[l].rows() == rows && weights[l].cols() == cols && biases[l].size() == rows,
            ErrorCode::kInvalidArgument,
            "layer " + std::to_string(l) + " shape breaks the chain: expected " + std::to_string(rows) + "x" +
                std::to_string(cols));
    require(weights[l].allFinite() && biases[l].allFinite(), ErrorCode::kNumeric, "model has non-finite parameters");
  }
  require(feature_names.empty() || feature_names.size() == input_dim(), ErrorCode::kInvalidArgument,
          "feature_names length differs from input size");
}

void TrainConfig::validate() const {
  require(epochs >= 1, ErrorCode::kInvalidArgument, "epochs must be >= 1");
  require(batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), ErrorCode::kInvalidArgument,
          "learning_rate must be positive");
}

MlpModel init(std::size_t input_dim, std::span<const std::size_t> hidden_sizes, std::uint64_t seed,
              Activation hidden_activation) {
  require(input_dim >= 1, ErrorCode::kInvalidArgument, "input_dim must be >= 1");
  require(!hidden_sizes.empty(), ErrorCode::kInvalidArgument, "at least one hidden layer is required");
  MlpModel model;
  model.hidden_activation = hidden_activation;
  model.layer_sizes.push_back(input_dim);
  for (std::size_t h : hidden_sizes) {
    require(h >= 1, ErrorCode::kInvalidArgument, "hidden layer sizes must be >= 1");
    model.layer_sizes.push_back(h);
  }
  model.layer_sizes.push_back(1);

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    const std::size_t fan_in = model.layer_sizes[l];
    const std::size_t fan_out = model.layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(static_cast<Eigen::Index>(fan_out), static_cast<Eigen::Index>(fan_in));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index k = 0; k < w.cols(); ++k) w(i, k) = rng.uniform(-bound, bound);
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(Vector::Zero(static_cast<Eigen::Index>(fan_out)));
  }
  return model;
}

double forward(const MlpModel& model, std::span<const double> x) {
  require(x.size() == model.input_dim(), ErrorCode::kDimensionMismatch,
          "model expects " + std::to_string(model.input_dim()) + " features, got " + std::to_string(x.size()));
  Vector h(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]), ErrorCode::kInvalidArgument, "input is not finite");
    h(static_cast<Eigen::Index>(i)) = x[i];
  }
  return forward_impl(model, std::move(h));
}

std::vector<double> predict(const MlpModel& model, const Matrix& rows) {
  check_input(model, rows.cols());
  std::vector<double> out(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Vector h = rows.row(i).transpose();
    out[static_cast<std::size_t>(i)] = forward_impl(model, std::move(h));
  }
  return out;
}

std::vector<double> predict_batch(const MlpModel& model, const FlowTable& table) {
  if (table.num_rows() == 0) return {};
  return predict(model, table.features);
}

double loss(const MlpModel& model, const Matrix& rows, std::span<const int> labels) {
  check_input(model, rows.cols());
  check_labels(labels, rows.rows());
  require(rows.rows() > 0, ErrorCode::kInvalidArgument, "loss over zero rows");
  const std::vector<double> p = predict(model, rows);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += cross_entropy(p[i], labels[i]);
  return total / static_cast<double>(p.size());
}

Gradients loss_gradient(const MlpModel& model, const Matrix& rows, std::span<const int> labels) {
  check_input(model, rows.cols());
  check_labels(labels, rows.rows());
  require(rows.rows() > 0, ErrorCode::kInvalidArgument, "gradient over zero rows");
  return backprop(model, rows, labels);
}

TrainResult train(MlpModel model, const FlowTable& data, const TrainConfig& config) {
  config.validate();
  model.validate();
  data.validate();
  check_input(model, data.features.cols());
  require(data.has_both_classes(), ErrorCode::kSingleClass, "single-class data");

  const std::size_t n = data.num_rows();
  const std::size_t layers = model.weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);

  // Adam moments.
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  Gradients m, v;
  for (std::size_t l = 0; l < layers; ++l) {
    m.weights.push_back(Matrix::Zero(model.weights[l].rows(), model.weights[l].cols()));
    m.biases.push_back(Vector::Zero(model.biases[l].size()));
  }
  v = m;
  std::uint64_t step = 0;

  TrainResult result;
  Matrix batch;
  std::vector<int> batch_labels;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      batch.resize(static_cast<Eigen::Index>(stop - start), data.features.cols());
      batch_labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.row(static_cast<Eigen::Index>(i - start)) = data.features.row(static_cast<Eigen::Index>(order[i]));
        batch_labels.push_back(data.labels[order[i]]);
      }
      Gradients g = backprop(model, batch, batch_labels);
      ++step;
      for (std::size_t l = 0; l < layers; ++l) {
        if (config.optimizer == Optimizer::kSgd) {
          model.weights[l] -= config.learning_rate * g.weights[l];
          model.biases[l] -= config.learning_rate * g.biases[l];
          continue;
        }
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
        auto adam = [&](auto& param, auto& mom, auto& vel, const auto& grad) {
          mom = kBeta1 * mom + (1.0 - kBeta1) * grad;
          vel = kBeta2 * vel + (1.0 - kBeta2) * grad.cwiseProduct(grad);
          param.array() -= config.learning_rate * (mom.array() / c1) / ((vel.array() / c2).sqrt() + kAdamEps);
        };
        adam(model.weights[l], m.weights[l], v.weights[l], g.weights[l]);
        adam(model.biases[l], m.biases[l], v.biases[l], g.biases[l]);
      }
    }
    const double epoch_loss = loss(model, data.features, data.labels);
    if (!std::isfinite(epoch_loss)) {
      fail(ErrorCode::kNumeric, "training diverged: non-finite loss at epoch " + std::to_string(epoch + 1));
    }
    result.loss_history.push_back(epoch_loss);
  }
  model.validate();
  result.model = std::move(model);
  return result;
}

double gradient_check(const MlpModel& model, std::span<const double> x, int y, double epsilon) {
  require(epsilon >= 1e-7 && epsilon <= 1e-3, ErrorCode::kInvalidArgument, "epsilon must lie in [1e-7, 1e-3]");
  require(x.size() == model.input_dim(), ErrorCode::kDimensionMismatch, "input size differs from model");
  Matrix row(1, static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = x[i];
  const std::vector<int> label{y};
  const Gradients analytic = loss_gradient(model, row, label);

  MlpModel probe = model;
  double worst = 0.0;
  for_each_parameter(probe, [&](double& param, std::size_t layer, bool is_weight, Eigen::Index index) {
    const double saved = param;
    param = saved + epsilon;
    const double up = loss(probe, row, label);
    param = saved - epsilon;
    const double down = loss(probe, row, label);
    param = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double exact =
        is_weight ? analytic.weights[layer].data()[index] : analytic.biases[layer].data()[index];
    const double rel = std::abs(exact - numeric) / std::max(std::abs(exact) + std::abs(numeric), 1e-8);
    worst = std::max(worst, rel);
  });
  return worst;
}

nlohmann::json to_json(const MlpModel& model) {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    nlohmann::json layer = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i) {
      layer.push_back(std::vector<double>(model.weights[l].row(i).begin(), model.weights[l].row(i).end()));
    }
    weights.push_back(std::move(layer));
    biases.push_back(std::vector<double>(model.biases[l].begin(), model.biases[l].end()));
  }
  nlohmann::json doc = {{"layer_sizes", model.layer_sizes},
                        {"hidden_activation", to_string(model.hidden_activation)},
                        {"output_activation", "sigmoid"},
                        {"weights", weights},
                        {"biases", biases}};
  if (!model.feature_names.empty()) doc["feature_names"] = model.feature_names;
  return doc;
}

MlpModel model_from_json(const nlohmann::json& doc) {
  MlpModel model;
  try {
    model.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    model.hidden_activation = parse_activation(doc.at("hidden_activation").get<std::string>());
    if (doc.contains("output_activation")) {
      const auto out = doc.at("output_activation").get<std::string>();
      require(out == "sigmoid" || out == "logistic", ErrorCode::kInvalidArgument,
              "output activation must be the logistic sigmoid");
    }
    if (doc.contains("feature_names")) model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& layer : doc.at("weights")) {
      const auto rows = layer.get<std::vector<std::vector<double>>>();
      const std::size_t cols = rows.empty() ? 0 : rows.front().size();
      Matrix w(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == cols, ErrorCode::kInvalidArgument, "ragged weight matrix");
        for (std::size_t k = 0; k < cols; ++k) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
      model.weights.push_back(std::move(w));
    }
    for (const auto& layer : doc.at("biases")) {
      const auto values = layer.get<std::vector<double>>();
      model.biases.push_back(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("model file: ") + e.what());
  }
  model.validate();
  return model;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) { write_json(path, to_json(model)); }

MlpModel load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

}  // namespace flowshap::mlp
