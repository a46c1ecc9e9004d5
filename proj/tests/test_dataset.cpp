#include "relieve/dataset.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace relieve {
namespace {

TEST(ParseCsv, TwoColumnBasics) {
  const Dataset d = parse_csv("f1,f2,class\na,1,yes\nb,2,no\n");
  EXPECT_EQ(d.n_features(), 2u);
  EXPECT_EQ(d.n_rows(), 2u);
  EXPECT_EQ(d.class_name, "class");
  EXPECT_EQ(d.schema[0].kind, FeatureKind::kNominal);
  EXPECT_EQ(d.schema[1].kind, FeatureKind::kLinear);
  EXPECT_EQ(d.class_values, (std::vector<std::string>{"no", "yes"}));
  EXPECT_EQ(d.label_of(0), "yes");
  EXPECT_EQ(d.label_of(1), "no");
}

TEST(ParseCsv, NumericColumnsInferLinearWithRange) {
  const Dataset d = parse_csv("x,class\n2,a\n6,a\n10,b\n");
  EXPECT_EQ(d.schema[0].kind, FeatureKind::kLinear);
  EXPECT_DOUBLE_EQ(d.schema[0].min, 2.0);
  EXPECT_DOUBLE_EQ(d.schema[0].max, 10.0);
  EXPECT_DOUBLE_EQ(d.rows[1][0].value, 6.0);
}

TEST(ParseCsv, HintOverridesNumericInference) {
  SchemaHints hints{{"x", FeatureKind::kNominal}};
  const Dataset d = parse_csv("x,class\n0,a\n1,a\n10,b\n2,b\n", hints);
  EXPECT_EQ(d.schema[0].kind, FeatureKind::kNominal);
  // nominal symbols sort as strings
  EXPECT_EQ(d.schema[0].values, (std::vector<std::string>{"0", "1", "10", "2"}));
  EXPECT_EQ(cell_text(d, 2, 0), "10");
}

TEST(ParseCsv, QuestionMarkIsMissingAndLeavesValueSet) {
  SchemaHints hints{{"x", FeatureKind::kNominal}};
  const Dataset d = parse_csv("x,class\n0,a\n?,a\n1,b\n?,b\n", hints);
  EXPECT_TRUE(d.rows[1][0].missing);
  EXPECT_TRUE(d.rows[3][0].missing);
  EXPECT_EQ(d.schema[0].values, (std::vector<std::string>{"0", "1"}));

  const FeatureStats st = feature_stats(d, 0);
  EXPECT_EQ(st.missing, 2u);
  EXPECT_EQ(st.distinct, (std::vector<std::string>{"0", "1"}));
}

TEST(ParseCsv, MissingLinearCellsStayOutOfTheRange) {
  const Dataset d = parse_csv("x,class\n5,a\n?,a\n7,b\n");
  EXPECT_DOUBLE_EQ(d.schema[0].min, 5.0);
  EXPECT_DOUBLE_EQ(d.schema[0].max, 7.0);
  EXPECT_TRUE(d.rows[1][0].missing);
}

TEST(ParseCsv, HandReferenceTable) {
  const Dataset d = oracle::table2();
  ASSERT_EQ(d.n_features(), 3u);
  ASSERT_EQ(d.n_rows(), 4u);
  EXPECT_EQ(d.schema[2].name, "f_r");
  // f_r column: three "1" cells and one "0"
  const FeatureStats st = feature_stats(d, 2);
  EXPECT_EQ(st.distinct, (std::vector<std::string>{"0", "1"}));
  std::size_t zeros = 0, ones = 0;
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    (cell_text(d, i, 2) == "0" ? zeros : ones) += 1;
  EXPECT_EQ(zeros, 1u);
  EXPECT_EQ(ones, 3u);
  EXPECT_EQ(d.label_of(3), "1");
}

TEST(ParseCsv, CrlfAndTrailingNewlineTolerated) {
  const Dataset a = parse_csv("x,class\r\n1,a\r\n2,b\r\n");
  const Dataset b = parse_csv("x,class\n1,a\n2,b");
  EXPECT_TRUE(same_content(a, b));
}

TEST(ParseCsv, Rejections) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("onlyclass\n1\n"), ParseError);          // no feature column
  EXPECT_THROW(parse_csv("x,class\n"), ParseError);               // no instances
  EXPECT_THROW(parse_csv("x,x\n1,a\n"), ParseError);              // duplicate column
  EXPECT_THROW(parse_csv("x,class\n1\n"), ParseError);            // ragged row
  EXPECT_THROW(parse_csv("x,class\n1,a,b\n"), ParseError);        // too many cells
  EXPECT_THROW(parse_csv("x,class\n1,?\n"), ParseError);          // missing class
  EXPECT_THROW(parse_csv("x,class\n,a\n"), ParseError);           // empty cell
  EXPECT_THROW(parse_csv("x,class\n?,a\n?,b\n"), ParseError);     // all cells missing
  EXPECT_THROW(parse_csv("x,,class\n1,2,a\n"), ParseError);       // empty header name
}

TEST(Csv, RoundTripPreservesContent) {
  const Dataset d = oracle::table2();
  const Dataset again = parse_csv(to_csv(d), oracle::all_nominal({"f1", "f2", "f_r"}));
  EXPECT_TRUE(same_content(d, again));
}

TEST(Csv, CanonicalTextIsAFixedPoint) {
  const std::string text = "f1,f2,class\n0.5,a,x\n1.5,b,y\n";
  EXPECT_EQ(to_csv(parse_csv(text)), text);
}

TEST(Csv, FuzzRoundTrip) {
  Rng rng(7);
  for (int it = 0; it < 25; ++it) {
    oracle::RandomDataOptions opt;
    opt.missing_rate = it % 2 == 0 ? 0.0 : 0.15;
    const Dataset d = oracle::random_dataset(rng, opt);
    check_valid(d);
    SchemaHints hints;
    for (const auto& fs : d.schema) hints[fs.name] = fs.kind;
    const Dataset again = parse_csv(to_csv(d), hints);
    EXPECT_TRUE(same_content(d, again));
  }
}

TEST(Dataset, LookupHelpers) {
  const Dataset d = oracle::table2();
  EXPECT_EQ(d.feature_index("f2"), 1);
  EXPECT_EQ(d.feature_index("nope"), -1);
  EXPECT_EQ(d.class_index("1"), 1);
  EXPECT_EQ(d.class_index("zzz"), -1);
  EXPECT_EQ(d.schema[0].value_index("1"), 1);
  EXPECT_EQ(d.schema[0].value_index("7"), -1);
}

TEST(Dataset, SameContentIgnoresName) {
  Dataset a = oracle::table2();
  Dataset b = a;
  b.name = "other";
  EXPECT_TRUE(same_content(a, b));
  b.labels[0] = 1;
  EXPECT_FALSE(same_content(a, b));
}

TEST(Dataset, CheckValidCatchesBreakage) {
  Dataset d = oracle::table2();
  EXPECT_NO_THROW(check_valid(d));

  Dataset bad = d;
  bad.labels.pop_back();
  EXPECT_THROW(check_valid(bad), InternalError);

  bad = d;
  bad.schema[0].values = {"1", "0"};  // unsorted alphabet
  EXPECT_THROW(check_valid(bad), InternalError);

  bad = d;
  bad.rows[0][0].value = 9;  // code out of range
  EXPECT_THROW(check_valid(bad), InternalError);

  bad = d;
  bad.class_name = "f1";  // collides with a feature
  EXPECT_THROW(check_valid(bad), InternalError);
}

TEST(Dataset, FeatureStatsRejectsBadIndex) {
  EXPECT_THROW(feature_stats(oracle::table2(), 3), UsageError);
}

TEST(Numbers, ShortestFormRoundTrips) {
  for (const double v : {0.0, 1.0, -2.5, 0.1, 1e-9, 12345.678, 1.0 / 3.0}) {
    const auto text = detail::format_number(v);
    EXPECT_EQ(*detail::parse_number(text), v) << text;
  }
  EXPECT_FALSE(detail::parse_number("abc"));
  EXPECT_FALSE(detail::parse_number("1.2.3"));
  EXPECT_FALSE(detail::parse_number(""));
  EXPECT_FALSE(detail::parse_number("nan"));
}

}  // namespace
}  // namespace relieve
