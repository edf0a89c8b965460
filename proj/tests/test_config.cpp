#include "entire_growth/config.hpp"
#include "entire_growth/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace entire_growth;
using namespace entire_growth::config;

namespace {

std::string parse_failure(std::string_view text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    return e.what();
  }
  return "";
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << body;
  return p.string();
}

}  // namespace

TEST(ConfigParse, SectionsKeysAndPositions) {
  const auto doc = parse(
      "# leading comment\n"
      "[first]\n"
      "family = power_order(rho = 2, C = 1)  ; trailing\n"
      "  analyses = coeff_bound, tauberian\n"
      "\n"
      "[second]\n"
      "family = exp\n");
  ASSERT_EQ(doc.sections.size(), 2u);
  const auto& s = doc.sections[0];
  EXPECT_EQ(s.name, "first");
  const auto* fam = s.find("family");
  ASSERT_NE(fam, nullptr);
  EXPECT_EQ(fam->value_pos.line, 3u);
  EXPECT_EQ(fam->value_pos.column, 10u);
  const auto& call = fam->items.at(0).value;
  EXPECT_EQ(call.kind, Value::Kind::call);
  EXPECT_EQ(call.text, "power_order");
  EXPECT_EQ(call.args.at(0).key, "rho");
  EXPECT_DOUBLE_EQ(call.args.at(1).value.number, 1.0);
  const auto* an = s.find("analyses");
  EXPECT_EQ(an->key_pos.column, 3u);
  EXPECT_EQ(an->items.size(), 2u);
  EXPECT_EQ(an->items[1].value.text, "tauberian");
  EXPECT_EQ(doc.sections[1].find("family")->items[0].value.kind, Value::Kind::word);
}

TEST(ConfigParse, NumbersAndExponentials) {
  const auto items = parse_value("1.5, -2e-3, e^2, .25, \"quoted, text\"");
  ASSERT_EQ(items.size(), 5u);
  EXPECT_DOUBLE_EQ(items[0].value.number, 1.5);
  EXPECT_DOUBLE_EQ(items[1].value.number, -2e-3);
  EXPECT_DOUBLE_EQ(items[2].value.number, std::exp(2.0));
  EXPECT_DOUBLE_EQ(items[3].value.number, 0.25);
  EXPECT_EQ(items[4].value.kind, Value::Kind::string);
  EXPECT_EQ(items[4].value.text, "quoted, text");
}

TEST(ConfigParse, PathsAndNestedCalls) {
  const auto items = parse_value("factorized(exp, custom_coeff_csv(data/a-b.csv))");
  const auto& f = items.at(0).value;
  ASSERT_EQ(f.args.size(), 2u);
  EXPECT_EQ(f.args[1].value.args.at(0).value.text, "data/a-b.csv");
}

TEST(ConfigParse, ErrorsCarryLineAndColumn) {
  EXPECT_NE(parse_failure("[a]\nfamily exp\n").find("line 2, column 1"), std::string::npos);
  EXPECT_NE(parse_failure("family = exp\n").find("outside of any [section]"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\nx = 1\nx = 2\n").find("line 3"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\n[a]\n").find("duplicate section"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\nn_grid = 1, 1.2.3\n").find("line 2, column 13"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\nfamily = f(1, 2\n").find("expected ')'"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\nname = \"open\n").find("unterminated"), std::string::npos);
  EXPECT_NE(parse_failure("[a b]\n").find("section name"), std::string::npos);
  EXPECT_NE(parse_failure("[a]\nk =\n").find("missing value"), std::string::npos);
}

TEST(ConfigGrid, Generators) {
  const auto g = expand_grid(parse_value("1, linspace(0, 1, 3), geomspace(1, 100, 3), range(10, 30, 10)"));
  const std::vector<double> want = {1, 0, 0.5, 1, 1, 10, 100, 10, 20, 30};
  ASSERT_EQ(g.size(), want.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], want[i], 1e-12);
  EXPECT_THROW(expand_grid(parse_value("linspace(0, 1)")), Error);
  EXPECT_THROW(expand_grid(parse_value("geomspace(0, 1, 3)")), Error);
  EXPECT_THROW(expand_grid(parse_value("spiral(0, 1, 3)")), Error);
  EXPECT_THROW(expand_grid(parse_value("word")), Error);
}

TEST(CsvFormat, SeventeenDigitsAndSpecials) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(1.0), "1");
  char buf[64];
  for (double x : {-2.5e-300, 123456.789, 1e22, 5e-324}) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    EXPECT_EQ(io::format_double(x), buf);
  }
  EXPECT_EQ(io::format_double(kInf), "inf");
  EXPECT_EQ(io::format_double(kNegInf), "-inf");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
  for (double x : {std::exp(1.0), 1.0 / 3.0, 6.02214076e23}) EXPECT_EQ(std::stod(io::format_double(x)), x);
}

TEST(CsvFormat, TableLayout) {
  io::CsvTable t({"n", "value"});
  t.add_numbers({1.0, 0.5});
  t.add_row({"2", ""});
  EXPECT_EQ(t.str(), "n,value\n1,0.5\n2,\n");
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_THROW(t.add_row({"1"}), Error);
}

TEST(CsvLoad, CoefficientsWithZerosAndGaps) {
  const auto path = temp_file("eg_coeffs.csv", "# comment\nn,ln_abs_c\n0,0\n1,ZERO\n3,-1.5\n");
  const auto f = io::load_coefficients_csv(path);
  EXPECT_EQ(f.max_index(), 3u);
  EXPECT_DOUBLE_EQ(*f.log_abs(0), 0.0);
  EXPECT_FALSE(f.log_abs(1));
  EXPECT_FALSE(f.log_abs(2));
  EXPECT_DOUBLE_EQ(*f.log_abs(3), -1.5);
  EXPECT_FALSE(f.log_abs(4));
}

TEST(CsvLoad, RejectsMalformedTables) {
  const auto bad_header = temp_file("eg_bad1.csv", "k,ln_abs_c\n0,0\n");
  const auto bad_order = temp_file("eg_bad2.csv", "n,ln_abs_c\n2,0\n1,0\n");
  const auto bad_value = temp_file("eg_bad3.csv", "n,ln_abs_c\n0,abc\n");
  for (const auto& p : {bad_header, bad_order, bad_value}) {
    try {
      io::load_coefficients_csv(p);
      FAIL() << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parse);
    }
  }
  EXPECT_THROW(io::load_coefficients_csv("/nonexistent/eg.csv"), Error);
}

TEST(CsvLoad, Distribution) {
  const auto path = temp_file("eg_dist.csv", "k,ln_mass\n0,-0.69314718055994529\n2,-0.69314718055994529\n");
  const auto m = io::load_distribution_csv(path);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_FALSE(m[1]);
}
