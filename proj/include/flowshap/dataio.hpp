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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace flowshap {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kBenign = 1;
inline constexpr int kMalicious = 0;

enum class CellKind { kNumber, kMissing, kInfinite, kText };

// One column of a raw table. Numeric columns encode a missing cell as NaN and
// an infinite cell as +/-inf; text columns keep the trimmed cell strings.
struct RawColumn {
  std::string name;
  bool is_text = false;
  std::vector<double> numbers;
  std::vector<std::string> text;

  std::size_t size() const { return is_text ? text.size() : numbers.size(); }
};

// Column-major table as read from disk, before cleaning and label encoding.
class RawTable {
 public:
  RawTable() = default;
  // Throws if column lengths differ, names repeat, or `label_column` is not
  // one of the text columns.
  RawTable(std::vector<RawColumn> columns, std::string label_column);

  std::size_t num_rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t num_columns() const { return columns_.size(); }
  const std::vector<RawColumn>& columns() const { return columns_; }
  std::vector<std::string> column_names() const;
  const std::string& label_column() const { return label_column_; }
  std::size_t label_index() const { return label_index_; }
  const RawColumn& labels() const { return columns_[label_index_]; }
  // Index of `name`, or npos.
  std::size_t find_column(std::string_view name) const;
  CellKind kind(std::size_t row, std::size_t col) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<RawColumn> columns_;
  std::string label_column_;
  std::size_t label_index_ = 0;
};

// Numeric feature table with binary labels (1 = benign, 0 = malicious).
struct FlowTable {
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> labels;

  std::size_t num_rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t count_label(int label) const;
  bool has_both_classes() const { return count_label(kBenign) > 0 && count_label(kMalicious) > 0; }
  // Throws unless the table is non-empty, finite, shape-consistent and
  // labelled in {0, 1}.
  void validate() const;
};

struct ScalerParams {
  std::vector<std::string> feature_names;
  std::vector<double> mins;
  std::vector<double> maxes;
};

// The ten identifier/time columns excluded before modelling, plus the
// spellings the public CSV exports actually use for three of them.
std::vector<std::string> default_drop_columns();

RawTable parse_csv(std::istream& in, std::string_view label_column);
RawTable load_csv(const std::filesystem::path& path, std::string_view label_column);

RawTable clean(const RawTable& raw, std::span<const std::string> drop_columns);
FlowTable encode_labels(const RawTable& raw, std::string_view benign_value);

ScalerParams fit_scaler(const FlowTable& table);
FlowTable apply_scaler(const FlowTable& table, const ScalerParams& params);

FlowTable balance_subsample(const FlowTable& table, double attack_fraction, std::uint64_t seed);
// The row indices balance_subsample keeps, in output order.
std::vector<std::size_t> balance_subsample_rows(const FlowTable& table, double attack_fraction, std::uint64_t seed);

struct SplitResult {
  FlowTable train;
  FlowTable test;
  std::vector<std::size_t> train_rows;  // indices into the input table
  std::vector<std::size_t> test_rows;
};

SplitResult split(const FlowTable& table, double test_fraction, std::uint64_t seed,
                  bool stratified = true);

// Row and column selection helpers.
RawTable select_rows(const RawTable& raw, std::span<const std::size_t> rows);
FlowTable select_rows(const FlowTable& table, std::span<const std::size_t> rows);
FlowTable project_columns(const FlowTable& table, std::span<const std::string> names);
// Raw rows whose label is `benign_value` or is listed in `keep_labels`.
RawTable filter_labels(const RawTable& raw, std::string_view benign_value,
                       std::span<const std::string> keep_labels);
// Distinct label values in first-appearance order.
std::vector<std::string> distinct_labels(const RawTable& raw);

void write_csv(const RawTable& raw, std::ostream& out);
void write_csv(const RawTable& raw, const std::filesystem::path& path);
// Writes features plus a trailing label column holding "1" / "0".
void write_csv(const FlowTable& table, const std::filesystem::path& path,
               std::string_view label_column = "Label");
// Reads a table written by the FlowTable overload of write_csv.
FlowTable load_flow_csv(const std::filesystem::path& path, std::string_view label_column = "Label");

nlohmann::json to_json(const ScalerParams& params);
ScalerParams scaler_from_json(const nlohmann::json& doc);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace flowshap
