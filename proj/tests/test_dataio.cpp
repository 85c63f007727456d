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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "flowshap/dataio.hpp"
#include "flowshap/error.hpp"
#include "support.hpp"

namespace flowshap {
namespace {

RawTable parse(const std::string& text, const std::string& label = "Label") {
  std::istringstream in(text);
  return parse_csv(in, label);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInternal;
}

FlowTable column_table(std::vector<std::vector<double>> cols, std::vector<int> labels) {
  Matrix m(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  return testing::make_table(m, std::move(labels));
}

FlowTable labelled(std::size_t benign, std::size_t malicious) {
  Matrix m(static_cast<Eigen::Index>(benign + malicious), 1);
  std::vector<int> labels;
  for (std::size_t i = 0; i < benign + malicious; ++i) {
    m(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    labels.push_back(i < benign ? kBenign : kMalicious);
  }
  return testing::make_table(m, labels);
}

TEST(LoadCsv, ParsesHeaderAndRows) {
  const RawTable t = parse("a,b,c,Label\n1,2,3,BENIGN\n4,5,6,DrDoS_DNS\n");
  EXPECT_EQ(t.num_rows(), 2u);
  EXPECT_EQ(t.num_columns(), 4u);
  EXPECT_EQ(t.columns()[1].numbers[1], 5.0);
  EXPECT_EQ(t.labels().text[1], "DrDoS_DNS");
}

TEST(LoadCsv, InfinityAndNanLiterals) {
  const RawTable t = parse("a,b,Label\nInfinity,nan,BENIGN\n-inf,NaN,X\n7,,X\n");
  EXPECT_EQ(t.kind(0, 0), CellKind::kInfinite);
  EXPECT_EQ(t.kind(1, 0), CellKind::kInfinite);
  EXPECT_EQ(t.kind(0, 1), CellKind::kMissing);
  EXPECT_EQ(t.kind(2, 1), CellKind::kMissing);
  EXPECT_EQ(t.num_rows(), 3u);
}

TEST(LoadCsv, UnparseableNumericCellIsMissing) {
  const RawTable t = parse("a,b,Label\n1,2,BENIGN\n3,oops,X\n");
  EXPECT_EQ(t.kind(1, 1), CellKind::kMissing);
}

TEST(LoadCsv, MissingLabelColumn) {
  try {
    parse("a,b\n1,2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("header missing label_column"), std::string::npos);
  }
}

TEST(LoadCsv, Errors) {
  EXPECT_EQ(code_of([] { load_csv("/nonexistent/flows.csv", "Label"); }), ErrorCode::kNotFound);
  EXPECT_EQ(code_of([] { parse("a,Label\n"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse("a,Label\n1,X,extra\n"); }), ErrorCode::kParse);
}

TEST(LoadCsv, QuotedFieldsAndWhitespace) {
  const RawTable t = parse("\" Flow ID\",x,Label\n\"1.2.3.4-5,6\", 2.5 ,\"BENIGN\"\r\n");
  EXPECT_EQ(t.column_names()[0], "Flow ID");
  // Only the label column keeps text; other non-numeric cells read as missing.
  EXPECT_FALSE(t.columns()[0].is_text);
  EXPECT_EQ(t.kind(0, 0), CellKind::kMissing);
  EXPECT_EQ(t.labels().text[0], "BENIGN");
  EXPECT_EQ(t.columns()[1].numbers[0], 2.5);
}

TEST(Clean, DropsPaperColumnsLeaving78Features) {
  const std::vector<std::string> dropped = {"Unnamed",     "Flow ID",   "Source IP",  "Destination IP",
                                            "Source Port", "Destination Port", "Timestamp", "Flow Bytes",
                                            "Flow Packets", "SimilarHTTP"};
  std::vector<RawColumn> cols;
  for (const auto& name : dropped) {
    RawColumn c{name, name.find("IP") != std::string::npos || name == "Flow ID" || name == "Timestamp", {}, {}};
    if (c.is_text) c.text = {"x", "y"};
    else c.numbers = {1, 2};
    cols.push_back(c);
  }
  for (int j = 0; j < 78; ++j) cols.push_back({"feat" + std::to_string(j), false, {1.0 * j, 2.0 * j + 1}, {}});
  cols.push_back({"Label", true, {}, {"BENIGN", "DrDoS_DNS"}});
  const RawTable raw(cols, "Label");
  ASSERT_EQ(raw.num_columns(), 89u);
  const RawTable cleaned = clean(raw, default_drop_columns());
  EXPECT_EQ(encode_labels(cleaned, "BENIGN").num_features(), 78u);
}

TEST(Clean, DropsRowsWithInfiniteOrMissingCells) {
  const RawTable t = parse("a,b,Label\n1,2,B\n3,4,B\nInfinity,5,B\n6,7,B\n8,9,B\n");
  const RawTable c = clean(t, {});
  EXPECT_EQ(c.num_rows(), 4u);
  for (std::size_t r = 0; r < c.num_rows(); ++r)
    for (std::size_t j = 0; j < c.num_columns(); ++j) EXPECT_NE(c.kind(r, j), CellKind::kInfinite);
}

TEST(Clean, RemovesExactDuplicatesKeepingFirst) {
  const RawTable t = parse("a,b,Label\n1,2,B\n1,2,B\n1,2,X\n");
  const RawTable c = clean(t, {});
  ASSERT_EQ(c.num_rows(), 2u);
  EXPECT_EQ(c.labels().text[0], "B");
  EXPECT_EQ(c.labels().text[1], "X");
}

TEST(Clean, AbsentDropColumnsSkipped) {
  const std::vector<std::string> drop = {"Not There", "b"};
  const RawTable c = clean(parse("a,b,Label\n1,2,B\n"), drop);
  EXPECT_EQ(c.column_names(), (std::vector<std::string>{"a", "Label"}));
}

TEST(Clean, EmptyResultIsAnError) {
  EXPECT_EQ(code_of([] { clean(parse("a,Label\nnan,B\n"), {}); }), ErrorCode::kInvalidArgument);
  const std::vector<std::string> drop = {"a"};
  EXPECT_EQ(code_of([&] { clean(parse("a,Label\n1,B\n"), drop); }), ErrorCode::kInvalidArgument);
}

TEST(EncodeLabels, BenignIsOne) {
  const FlowTable t = encode_labels(parse("a,Label\n1,BENIGN\n2,DrDoS_DNS\n3,DrDoS_LDAP\n"), "BENIGN");
  EXPECT_EQ(t.labels, (std::vector<int>{1, 0, 0}));
}

TEST(EncodeLabels, AllBenignAllowed) {
  const FlowTable t = encode_labels(parse("a,Label\n1,BENIGN\n2,BENIGN\n"), "BENIGN");
  EXPECT_EQ(t.labels, (std::vector<int>{1, 1}));
}

TEST(EncodeLabels, OneToAllGrouping) {
  // The benign value must occur; add one benign row and check the attacks.
  const FlowTable t =
      encode_labels(parse("a,Label\n1,DrDoS_DNS\n2,DrDoS_SNMP\n3,DrDoS_NetBIOS\n4,DrDoS_LDAP\n5,BENIGN\n"), "BENIGN");
  EXPECT_EQ(t.labels, (std::vector<int>{0, 0, 0, 0, 1}));
}

TEST(EncodeLabels, RejectsUncleanedInput) {
  EXPECT_EQ(code_of([] { encode_labels(parse("a,Label\ninf,BENIGN\n"), "BENIGN"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { encode_labels(parse("ip,Label\n1.2.3.4,BENIGN\n"), "BENIGN"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { encode_labels(parse("a,Label\n1,X\n"), "BENIGN"); }), ErrorCode::kInvalidArgument);
}

TEST(EncodeLabels, CountOfOnesMatchesBenignOccurrences) {
  const FlowTable t = encode_labels(parse("a,Label\n1,B\n2,X\n3,B\n4,Y\n5,B\n"), "B");
  EXPECT_EQ(t.count_label(1), 3u);
  for (int y : t.labels) EXPECT_TRUE(y == 0 || y == 1);
}

TEST(Scaler, FitExamples) {
  ScalerParams p = fit_scaler(column_table({{0, 5, 10}}, {1, 0, 1}));
  EXPECT_EQ(p.mins[0], 0.0);
  EXPECT_EQ(p.maxes[0], 10.0);
  p = fit_scaler(column_table({{7, 7, 7}}, {1, 0, 1}));
  EXPECT_EQ(p.mins[0], 7.0);
  EXPECT_EQ(p.maxes[0], 7.0);
  p = fit_scaler(column_table({{1, 3}, {100, 200}}, {1, 0}));
  EXPECT_EQ(p.mins, (std::vector<double>{1, 100}));
  EXPECT_EQ(p.maxes, (std::vector<double>{3, 200}));
}

TEST(Scaler, ApplyExamples) {
  const FlowTable t = column_table({{0, 5, 10}, {7, 7, 7}}, {1, 0, 1});
  const ScalerParams p = fit_scaler(t);
  const FlowTable s = apply_scaler(t, p);
  EXPECT_EQ(s.features(0, 0), 0.0);
  EXPECT_EQ(s.features(1, 0), 0.5);
  EXPECT_EQ(s.features(2, 0), 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.features(i, 1), 0.0);

  const FlowTable test = column_table({{12, -3}, {7, 7}}, {1, 0});
  const FlowTable st = apply_scaler(test, p);
  EXPECT_EQ(st.features(0, 0), 1.0);
  EXPECT_EQ(st.features(1, 0), 0.0);
}

TEST(Scaler, DimensionMismatch) {
  const ScalerParams p = fit_scaler(column_table({{0, 1}}, {1, 0}));
  EXPECT_EQ(code_of([&] { apply_scaler(column_table({{0, 1}, {2, 3}}, {1, 0}), p); }), ErrorCode::kDimensionMismatch);
}

TEST(Scaler, FitOnSelfMapsIntoUnitInterval) {
  std::mt19937_64 gen(3);
  const FlowTable t = testing::make_table(testing::random_matrix(50, 6, gen, -20, 20), std::vector<int>(50, 1));
  const FlowTable s = apply_scaler(t, fit_scaler(t));
  for (Eigen::Index j = 0; j < s.features.cols(); ++j) {
    EXPECT_GE(s.features.col(j).minCoeff(), 0.0);
    EXPECT_LE(s.features.col(j).maxCoeff(), 1.0);
    EXPECT_EQ(s.features.col(j).minCoeff(), 0.0);
    EXPECT_EQ(s.features.col(j).maxCoeff(), 1.0);
  }
}

TEST(Scaler, JsonRoundTrip) {
  ScalerParams p = fit_scaler(column_table({{0.1, 0.7}, {1e-17, 3}}, {1, 0}));
  const ScalerParams q = scaler_from_json(to_json(p));
  EXPECT_EQ(p.mins, q.mins);
  EXPECT_EQ(p.maxes, q.maxes);
  EXPECT_EQ(p.feature_names, q.feature_names);
}

TEST(BalanceSubsample, PaperFraction) {
  const FlowTable t = labelled(100, 10000);
  const FlowTable s = balance_subsample(t, 0.001, 9);
  EXPECT_EQ(s.count_label(kBenign), 100u);
  EXPECT_EQ(s.count_label(kMalicious), 10u);
}

TEST(BalanceSubsample, IdentityAndDeterminism) {
  const FlowTable t = labelled(30, 70);
  const FlowTable all = balance_subsample(t, 1.0, 1);
  EXPECT_EQ(all.num_rows(), 100u);
  const FlowTable a = balance_subsample(t, 0.3, 5);
  const FlowTable b = balance_subsample(t, 0.3, 5);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(BalanceSubsample, KeepsAtLeastOneAttack) {
  EXPECT_EQ(balance_subsample(labelled(10, 10), 0.001, 2).count_label(kMalicious), 1u);
}

TEST(BalanceSubsample, Errors) {
  EXPECT_EQ(code_of([] { balance_subsample(labelled(10, 0), 0.5, 1); }), ErrorCode::kSingleClass);
  EXPECT_EQ(code_of([] { balance_subsample(labelled(10, 10), 0.0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { balance_subsample(labelled(10, 10), 1.5, 1); }), ErrorCode::kInvalidArgument);
}

TEST(BalanceSubsample, BenignCountPreservedAcrossSeeds) {
  const FlowTable t = labelled(37, 400);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(balance_subsample(t, 0.05, seed).count_label(kBenign), 37u);
  }
}

TEST(Split, Sizes) {
  const SplitResult s = split(labelled(50, 50), 0.2, 3);
  EXPECT_EQ(s.train.num_rows(), 80u);
  EXPECT_EQ(s.test.num_rows(), 20u);
}

TEST(Split, Stratified) {
  const SplitResult s = split(labelled(90, 10), 0.2, 3);
  EXPECT_EQ(s.test.count_label(kBenign), 18u);
  EXPECT_EQ(s.test.count_label(kMalicious), 2u);
}

TEST(Split, DeterministicPartition) {
  const FlowTable t = labelled(40, 23);
  const SplitResult a = split(t, 0.3, 11);
  const SplitResult b = split(t, 0.3, 11);
  EXPECT_EQ(a.test_rows, b.test_rows);
  std::set<std::size_t> all(a.train_rows.begin(), a.train_rows.end());
  for (std::size_t r : a.test_rows) EXPECT_TRUE(all.insert(r).second) << "row in both partitions";
  EXPECT_EQ(all.size(), t.num_rows());
}

TEST(Split, StratifiedProportionsWithinOneRow) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FlowTable t = labelled(33 + seed, 17 + 2 * seed);
    const SplitResult s = split(t, 0.25, seed);
    for (int label : {kBenign, kMalicious}) {
      const double expected = 0.25 * static_cast<double>(t.count_label(label));
      EXPECT_LE(std::abs(static_cast<double>(s.test.count_label(label)) - expected), 1.0);
    }
  }
}

TEST(Split, EmptyPartitionIsAnError) {
  EXPECT_EQ(code_of([] { split(labelled(1, 1), 0.2, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { split(labelled(5, 5), 1.0, 1); }), ErrorCode::kInvalidArgument);
}

TEST(CsvWrite, RoundTripIsExact) {
  const auto dir = testing::scratch_dir("dataio_roundtrip");
  std::mt19937_64 gen(8);
  const FlowTable t = testing::make_table(testing::random_matrix(20, 4, gen, -1e6, 1e6), std::vector<int>(20, 1));
  write_csv(t, dir / "t.csv");
  const FlowTable back = load_flow_csv(dir / "t.csv");
  EXPECT_EQ(back.features, t.features);
  EXPECT_EQ(back.feature_names, t.feature_names);
}

TEST(ProjectColumns, UnknownFeature) {
  const std::vector<std::string> names = {"missing"};
  EXPECT_EQ(code_of([&] { project_columns(labelled(2, 2), names); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace flowshap
