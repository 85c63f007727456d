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

#include "flowshap/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "flowshap/error.hpp"
#include "flowshap/rng.hpp"

namespace flowshap {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Splits one CSV record. Double quotes delimit fields that may contain
// commas; a doubled quote inside is a literal quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

double parse_number(std::string_view cell) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  cell = trim(cell);
  if (cell.empty()) return kNaN;
  double sign = 1.0;
  std::string_view body = cell;
  if (body.front() == '+' || body.front() == '-') {
    sign = body.front() == '-' ? -1.0 : 1.0;
    body.remove_prefix(1);
  }
  const std::string word = lower(body);
  if (word == "nan") return kNaN;
  if (word == "inf" || word == "infinity") return sign * kInf;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec == std::errc::result_out_of_range) return sign * kInf;
  if (ec != std::errc() || ptr != body.data() + body.size()) return kNaN;
  return sign * value;
}

std::string quote_if_needed(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim(s) == s) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return format_double(v);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

std::uint64_t hash_value(double v) {
  if (v == 0.0) v = 0.0;  // -0 and +0 compare equal
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  return bits;
}

bool rows_equal(const RawTable& raw, std::size_t a, std::size_t b) {
  for (const RawColumn& col : raw.columns()) {
    if (col.is_text ? col.text[a] != col.text[b] : col.numbers[a] != col.numbers[b]) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// RawTable

RawTable::RawTable(std::vector<RawColumn> columns, std::string label_column)
    : columns_(std::move(columns)), label_column_(std::move(label_column)) {
  require(!columns_.empty(), ErrorCode::kInvalidArgument, "table has no columns");
  const std::size_t rows = columns_.front().size();
  std::set<std::string, std::less<>> seen;
  for (const RawColumn& col : columns_) {
    require(col.size() == rows, ErrorCode::kDimensionMismatch,
            "column '" + col.name + "' has " + std::to_string(col.size()) + " cells, expected " +
                std::to_string(rows));
    require(seen.insert(col.name).second, ErrorCode::kInvalidArgument,
            "duplicate column name: " + col.name);
  }
  label_index_ = find_column(label_column_);
  require(label_index_ != npos, ErrorCode::kInvalidArgument,
          "header missing label_column: " + label_column_);
  require(columns_[label_index_].is_text, ErrorCode::kInvalidArgument,
          "label column must hold text: " + label_column_);
}

std::vector<std::string> RawTable::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const RawColumn& col : columns_) names.push_back(col.name);
  return names;
}

std::size_t RawTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return npos;
}

CellKind RawTable::kind(std::size_t row, std::size_t col) const {
  const RawColumn& c = columns_.at(col);
  if (c.is_text) return CellKind::kText;
  double v = c.numbers.at(row);
  if (std::isnan(v)) return CellKind::kMissing;
  if (std::isinf(v)) return CellKind::kInfinite;
  return CellKind::kNumber;
}

// ---------------------------------------------------------------------------
// FlowTable

std::size_t FlowTable::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void FlowTable::validate() const {
  require(num_features() > 0 && num_features() == feature_names.size(), ErrorCode::kDimensionMismatch,
          "feature matrix has " + std::to_string(num_features()) + " columns but " +
              std::to_string(feature_names.size()) + " names");
  require(num_rows() > 0, ErrorCode::kInvalidArgument, "table has no rows");
  require(labels.size() == num_rows(), ErrorCode::kDimensionMismatch, "label count differs from row count");
  require(features.allFinite(), ErrorCode::kInvalidArgument, "features contain non-finite values");
  for (int y : labels) {
    require(y == kBenign || y == kMalicious, ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

// ---------------------------------------------------------------------------
// Loading and cleaning

std::vector<std::string> default_drop_columns() {
  return {"Unnamed",     "Flow ID",   "Source IP",  "Destination IP", "Source Port",
          "Destination Port", "Timestamp", "Flow Bytes", "Flow Packets", "SimilarHTTP",
          "Unnamed: 0",  "Flow Bytes/s", "Flow Packets/s"};
}

RawTable parse_csv(std::istream& in, std::string_view label_column) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header = split_record(line);
  // Repeated names get pandas-style ".1", ".2" suffixes.
  std::map<std::string, int> occurrences;
  for (std::string& name : header) {
    name = std::string(trim(name));
    int n = occurrences[name]++;
    if (n > 0) name += "." + std::to_string(n);
  }
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    fail(ErrorCode::kInvalidArgument, "header missing label_column: " + std::string(label_column));
  }
  const std::size_t label_index = static_cast<std::size_t>(label_it - header.begin());

  std::vector<RawColumn> columns(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    columns[c].name = header[c];
    columns[c].is_text = c == label_index;
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_record(line);
    if (fields.size() != header.size()) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                                  " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (columns[c].is_text) {
        columns[c].text.push_back(std::move(fields[c]));
      } else {
        columns[c].numbers.push_back(parse_number(fields[c]));
      }
    }
  }
  if (columns[label_index].text.empty()) fail(ErrorCode::kInvalidArgument, "file has no data rows");
  return RawTable(std::move(columns), std::string(label_column));
}

RawTable load_csv(const std::filesystem::path& path, std::string_view label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kNotFound, "file not found: " + path.string());
  return parse_csv(in, label_column);
}

RawTable clean(const RawTable& raw, std::span<const std::string> drop_columns) {
  std::set<std::string, std::less<>> drop(drop_columns.begin(), drop_columns.end());
  require(!drop.contains(raw.label_column()), ErrorCode::kInvalidArgument,
          "cannot drop the label column: " + raw.label_column());

  std::vector<const RawColumn*> kept;
  for (const RawColumn& col : raw.columns()) {
    if (!drop.contains(col.name)) kept.push_back(&col);
  }
  require(kept.size() >= 2, ErrorCode::kInvalidArgument, "clean: no feature columns remain");

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < raw.num_rows(); ++r) {
    bool finite = std::all_of(kept.begin(), kept.end(), [r](const RawColumn* col) {
      return col->is_text || std::isfinite(col->numbers[r]);
    });
    if (finite) rows.push_back(r);
  }

  std::vector<RawColumn> columns;
  for (const RawColumn* col : kept) columns.push_back(*col);
  RawTable projected(std::move(columns), raw.label_column());
  RawTable finite_rows = select_rows(projected, rows);

  // Exact duplicate removal; first occurrence wins.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  std::vector<std::size_t> unique_rows;
  for (std::size_t r = 0; r < finite_rows.num_rows(); ++r) {
    std::uint64_t h = 0;
    for (const RawColumn& col : finite_rows.columns()) {
      h = hash_combine(h, col.is_text ? std::hash<std::string>{}(col.text[r]) : hash_value(col.numbers[r]));
    }
    auto& bucket = buckets[h];
    bool duplicate = std::any_of(bucket.begin(), bucket.end(),
                                 [&](std::size_t other) { return rows_equal(finite_rows, r, other); });
    if (!duplicate) {
      bucket.push_back(r);
      unique_rows.push_back(r);
    }
  }
  require(!unique_rows.empty(), ErrorCode::kInvalidArgument, "clean: no rows remain");
  return select_rows(finite_rows, unique_rows);
}

FlowTable encode_labels(const RawTable& raw, std::string_view benign_value) {
  FlowTable table;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < raw.num_columns(); ++c) {
    if (c == raw.label_index()) continue;
    const RawColumn& col = raw.columns()[c];
    require(!col.is_text, ErrorCode::kInvalidArgument, "non-numeric feature cell encountered in column '" + col.name + "'");
    feature_cols.push_back(c);
    table.feature_names.push_back(col.name);
  }
  require(!feature_cols.empty(), ErrorCode::kInvalidArgument, "table has no feature columns");

  const std::size_t rows = raw.num_rows();
  table.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(feature_cols.size()));
  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    const RawColumn& col = raw.columns()[feature_cols[j]];
    for (std::size_t r = 0; r < rows; ++r) {
      double v = col.numbers[r];
      require(std::isfinite(v), ErrorCode::kInvalidArgument,
              "non-numeric feature cell encountered in column '" + col.name + "' row " + std::to_string(r));
      table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }
  table.labels.reserve(rows);
  for (const std::string& label : raw.labels().text) {
    table.labels.push_back(label == benign_value ? kBenign : kMalicious);
  }
  require(table.count_label(kBenign) > 0, ErrorCode::kInvalidArgument,
          "benign label '" + std::string(benign_value) + "' does not occur");
  table.validate();
  return table;
}

// ---------------------------------------------------------------------------
// Scaling

ScalerParams fit_scaler(const FlowTable& table) {
  require(table.num_rows() > 0 && table.num_features() > 0, ErrorCode::kInvalidArgument, "fit_scaler: empty table");
  ScalerParams params;
  params.feature_names = table.feature_names;
  for (Eigen::Index j = 0; j < table.features.cols(); ++j) {
    params.mins.push_back(table.features.col(j).minCoeff());
    params.maxes.push_back(table.features.col(j).maxCoeff());
  }
  return params;
}

FlowTable apply_scaler(const FlowTable& table, const ScalerParams& params) {
  require(params.mins.size() == table.num_features() && params.maxes.size() == table.num_features(),
          ErrorCode::kDimensionMismatch,
          "scaler has " + std::to_string(params.mins.size()) + " features, table has " +
              std::to_string(table.num_features()));
  require(params.feature_names.empty() || params.feature_names == table.feature_names,
          ErrorCode::kDimensionMismatch, "scaler feature names differ from table");
  FlowTable out = table;
  for (Eigen::Index j = 0; j < out.features.cols(); ++j) {
    const double lo = params.mins[static_cast<std::size_t>(j)];
    const double range = params.maxes[static_cast<std::size_t>(j)] - lo;
    for (Eigen::Index i = 0; i < out.features.rows(); ++i) {
      double& v = out.features(i, j);
      v = range > 0.0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::size_t> balance_subsample_rows(const FlowTable& table, double attack_fraction, std::uint64_t seed) {
  require(attack_fraction > 0.0 && attack_fraction <= 1.0, ErrorCode::kInvalidArgument,
          "attack_fraction must lie in (0, 1]");
  require(table.has_both_classes(), ErrorCode::kSingleClass, "balance_subsample: single-class data");
  std::vector<std::size_t> benign, malicious;
  for (std::size_t i = 0; i < table.num_rows(); ++i) {
    (table.labels[i] == kBenign ? benign : malicious).push_back(i);
  }
  Rng rng(seed);
  const auto wanted = static_cast<std::size_t>(std::llround(attack_fraction * static_cast<double>(malicious.size())));
  const std::size_t keep = std::clamp<std::size_t>(wanted, 1, malicious.size());
  rng.shuffle(std::span(malicious));
  std::vector<std::size_t> rows = benign;
  rows.insert(rows.end(), malicious.begin(), malicious.begin() + static_cast<std::ptrdiff_t>(keep));
  rng.shuffle(std::span(rows));
  return rows;
}

FlowTable balance_subsample(const FlowTable& table, double attack_fraction, std::uint64_t seed) {
  const std::vector<std::size_t> rows = balance_subsample_rows(table, attack_fraction, seed);
  return select_rows(table, rows);
}

SplitResult split(const FlowTable& table, double test_fraction, std::uint64_t seed, bool stratified) {
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::kInvalidArgument,
          "test_fraction must lie in (0, 1)");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> groups;
  if (stratified) {
    require(table.has_both_classes(), ErrorCode::kSingleClass, "stratified split needs both classes");
    groups.resize(2);
    for (std::size_t i = 0; i < table.num_rows(); ++i) groups[static_cast<std::size_t>(table.labels[i])].push_back(i);
  } else {
    groups.emplace_back(table.num_rows());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  }

  SplitResult result;
  for (auto& group : groups) {
    rng.shuffle(std::span(group));
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(group.size())));
    result.test_rows.insert(result.test_rows.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(n_test));
    result.train_rows.insert(result.train_rows.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test), group.end());
  }
  require(!result.test_rows.empty() && !result.train_rows.empty(), ErrorCode::kInvalidArgument,
          "test_fraction produces an empty partition");
  std::sort(result.train_rows.begin(), result.train_rows.end());
  std::sort(result.test_rows.begin(), result.test_rows.end());
  result.train = select_rows(table, result.train_rows);
  result.test = select_rows(table, result.test_rows);
  return result;
}

// ---------------------------------------------------------------------------
// Selection helpers

RawTable select_rows(const RawTable& raw, std::span<const std::size_t> rows) {
  std::vector<RawColumn> columns;
  columns.reserve(raw.num_columns());
  for (const RawColumn& col : raw.columns()) {
    RawColumn out{col.name, col.is_text, {}, {}};
    if (col.is_text) {
      out.text.reserve(rows.size());
      for (std::size_t r : rows) out.text.push_back(col.text.at(r));
    } else {
      out.numbers.reserve(rows.size());
      for (std::size_t r : rows) out.numbers.push_back(col.numbers.at(r));
    }
    columns.push_back(std::move(out));
  }
  return RawTable(std::move(columns), raw.label_column());
}

FlowTable select_rows(const FlowTable& table, std::span<const std::size_t> rows) {
  FlowTable out;
  out.feature_names = table.feature_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), table.features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] < table.num_rows(), ErrorCode::kInvalidArgument, "row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = table.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(table.labels[rows[i]]);
  }
  return out;
}

FlowTable project_columns(const FlowTable& table, std::span<const std::string> names) {
  require(!names.empty(), ErrorCode::kInvalidArgument, "no columns selected");
  FlowTable out;
  out.labels = table.labels;
  out.features.resize(table.features.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    auto it = std::find(table.feature_names.begin(), table.feature_names.end(), names[j]);
    require(it != table.feature_names.end(), ErrorCode::kInvalidArgument, "unknown feature: " + names[j]);
    out.features.col(static_cast<Eigen::Index>(j)) = table.features.col(it - table.feature_names.begin());
    out.feature_names.push_back(names[j]);
  }
  return out;
}

RawTable filter_labels(const RawTable& raw, std::string_view benign_value, std::span<const std::string> keep_labels) {
  std::vector<std::size_t> rows;
  const auto& labels = raw.labels().text;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] == benign_value || std::find(keep_labels.begin(), keep_labels.end(), labels[r]) != keep_labels.end()) {
      rows.push_back(r);
    }
  }
  return select_rows(raw, rows);
}

std::vector<std::string> distinct_labels(const RawTable& raw) {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  for (const std::string& label : raw.labels().text) {
    if (seen.insert(label).second) out.push_back(label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Writing

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "cannot format number");
  return std::string(buf, ptr);
}

void write_csv(const RawTable& raw, std::ostream& out) {
  const auto& cols = raw.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out << ',';
    out << quote_if_needed(cols[c].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < raw.num_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      out << (cols[c].is_text ? quote_if_needed(cols[c].text[r]) : format_cell(cols[c].numbers[r]));
    }
    out << '\n';
  }
}

void write_csv(const RawTable& raw, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write file: " + path.string());
  write_csv(raw, out);
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

void write_csv(const FlowTable& table, const std::filesystem::path& path, std::string_view label_column) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write file: " + path.string());
  for (const std::string& name : table.feature_names) out << quote_if_needed(name) << ',';
  out << quote_if_needed(label_column) << '\n';
  for (Eigen::Index i = 0; i < table.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.features.cols(); ++j) out << format_cell(table.features(i, j)) << ',';
    out << table.labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed: " + path.string());
}

FlowTable load_flow_csv(const std::filesystem::path& path, std::string_view label_column) {
  RawTable raw = load_csv(path, label_column);
  for (const std::string& label : raw.labels().text) {
    require(label == "0" || label == "1", ErrorCode::kParse,
            path.string() + ": label column must hold 0/1, found '" + label + "'");
  }
  FlowTable table;
  for (std::size_t c = 0; c < raw.num_columns(); ++c) {
    if (c != raw.label_index()) table.feature_names.push_back(raw.columns()[c].name);
  }
  table.features.resize(static_cast<Eigen::Index>(raw.num_rows()), static_cast<Eigen::Index>(table.feature_names.size()));
  Eigen::Index j = 0;
  for (std::size_t c = 0; c < raw.num_columns(); ++c) {
    if (c == raw.label_index()) continue;
    const auto& numbers = raw.columns()[c].numbers;
    for (std::size_t r = 0; r < numbers.size(); ++r) {
      require(std::isfinite(numbers[r]), ErrorCode::kParse,
              path.string() + ": non-finite value in column '" + raw.columns()[c].name + "'");
      table.features(static_cast<Eigen::Index>(r), j) = numbers[r];
    }
    ++j;
  }
  for (const std::string& label : raw.labels().text) table.labels.push_back(label == "1" ? kBenign : kMalicious);
  table.validate();
  return table;
}

nlohmann::json to_json(const ScalerParams& params) {
  return {{"feature_names", params.feature_names}, {"mins", params.mins}, {"maxes", params.maxes}};
}

ScalerParams scaler_from_json(const nlohmann::json& doc) {
  ScalerParams params;
  try {
    params.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    params.mins = doc.at("mins").get<std::vector<double>>();
    params.maxes = doc.at("maxes").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("scaler: ") + e.what());
  }
  require(params.mins.size() == params.feature_names.size() && params.maxes.size() == params.feature_names.size(),
          ErrorCode::kParse, "scaler: array lengths differ");
  for (std::size_t j = 0; j < params.mins.size(); ++j) {
    require(params.mins[j] <= params.maxes[j], ErrorCode::kParse, "scaler: min exceeds max for " + params.feature_names[j]);
  }
  return params;
}

}  // namespace flowshap
