#include <cmath>
#include <limits>

#include "geninv/matrix_io.hpp"

#include "test_support.hpp"

using namespace geninv;
using geninv::testing::random_matrix;

namespace {

RationalScalar q(long p, long d) { return RationalScalar(mpq_class(p, d)); }

ParseError parse_error_of(const std::string& text, MatrixFormat f) {
  try {
    parse_matrix(text, f);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseError("none", 0, 0);
}

}  // namespace

TEST(Scalar, Syntax) {
  EXPECT_EQ(parse_scalar("3"), RationalScalar(3));
  EXPECT_EQ(parse_scalar(" -2/6 "), q(-1, 3));
  EXPECT_EQ(parse_scalar("0.1"), q(1, 10));
  EXPECT_EQ(parse_scalar("1.5e-2"), q(3, 200));
  EXPECT_EQ(parse_scalar("2i"), RationalScalar(0, 2));
  EXPECT_EQ(parse_scalar("i"), RationalScalar(0, 1));
  EXPECT_EQ(parse_scalar("-i"), RationalScalar(0, -1));
  EXPECT_EQ(parse_scalar("1/2+3/4i"), RationalScalar(mpq_class(1, 2), mpq_class(3, 4)));
  EXPECT_EQ(parse_scalar("1-i"), RationalScalar(1, -1));
  EXPECT_EQ(parse_scalar("1e2-0.5i"), RationalScalar(100, mpq_class(-1, 2)));
  for (const char* bad : {"", "abc", "1/0", "1//2", "--1", "1+", "3j", "1e", "+i+i"})
    EXPECT_THROW(parse_scalar(bad), DomainError) << bad;
}

TEST(Csv, ParsesRowsCommentsAndBlanks) {
  const RationalMatrix m = parse_matrix("# header\n1, 2/3\n\n-1i, 0.5\n", MatrixFormat::kCsv);
  EXPECT_EQ(m, RationalMatrix::from_rows({{1, q(2, 3)}, {RationalScalar(0, -1), q(1, 2)}}));
}

TEST(Csv, ErrorsCarryPosition) {
  ParseError e = parse_error_of("1,2\n3,x\n", MatrixFormat::kCsv);
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 3u);
  e = parse_error_of("1,2\n3\n", MatrixFormat::kCsv);
  EXPECT_EQ(e.line(), 2u);
  e = parse_error_of("# only a comment\n", MatrixFormat::kCsv);
  EXPECT_GE(e.line(), 1u);
  e = parse_error_of("1,  2/0", MatrixFormat::kCsv);
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 5u);
  EXPECT_NE(std::string(e.what()).find("line 1, column 5"), std::string::npos);
}

TEST(Json, ParsesAllEntryForms) {
  const RationalMatrix m = parse_matrix(
      R"({"rows": 2, "cols": 2, "data": [[1, "2/3"], [[0, -1], ["1/2", 0.25]]], "note": "ignored"})",
      MatrixFormat::kJson);
  EXPECT_EQ(m, RationalMatrix::from_rows({{1, q(2, 3)}, {RationalScalar(0, -1), RationalScalar(mpq_class(1, 2),
                                                                                               mpq_class(1, 4))}}));
}

TEST(Json, Errors) {
  ParseError e = parse_error_of("{\"rows\": 1,\n \"cols\": }", MatrixFormat::kJson);
  EXPECT_EQ(e.line(), 2u);
  EXPECT_GT(e.column(), 0u);
  e = parse_error_of(R"({"rows": 1, "cols": 2, "data": [[1]]})", MatrixFormat::kJson);
  EXPECT_EQ(e.line(), 0u);
  EXPECT_THROW(parse_matrix(R"({"rows": 1, "cols": 1})", MatrixFormat::kJson), ParseError);
  EXPECT_THROW(parse_matrix(R"([1, 2])", MatrixFormat::kJson), ParseError);
  EXPECT_THROW(parse_matrix(R"({"rows": 1, "cols": 1, "data": [[true]]})", MatrixFormat::kJson), ParseError);
  EXPECT_THROW(parse_matrix(R"({"rows": 1, "cols": 1, "data": [["x"]]})", MatrixFormat::kJson), ParseError);
}

TEST(Format, FromPath) {
  EXPECT_EQ(format_from_path("a.json"), MatrixFormat::kJson);
  EXPECT_EQ(format_from_path("A.JSON"), MatrixFormat::kJson);
  EXPECT_EQ(format_from_path("a.csv"), MatrixFormat::kCsv);
  EXPECT_EQ(format_from_path("json"), MatrixFormat::kCsv);
  EXPECT_THROW(read_matrix_file("/nonexistent/geninv.csv"), ParseError);
}

TEST(RoundTrip, FloatsAreBitExact) {
  std::mt19937_64 rng(151);
  ComplexMatrix a = random_matrix(3, 4, rng);
  a = a + ComplexMatrix::from_rows({{1e-300, 0, 0, 0}, {0, 1e300, 0, 0}, {0, 0, Complex(0, -0.1), 0}});
  for (MatrixFormat f : {MatrixFormat::kCsv, MatrixFormat::kJson}) {
    const std::string text = format_matrix(a, f);
    const ComplexMatrix back = float_of(parse_matrix(text, f));
    EXPECT_EQ(back.dense(), a.dense());
    // print(parse(print(x))) is identical text.
    EXPECT_EQ(format_matrix(back, f), text);
  }
}

TEST(RoundTrip, ExactFractions) {
  const RationalMatrix m = RationalMatrix::from_rows(
      {{q(3, 5), RationalScalar(mpq_class(1, 2), -1)}, {RationalScalar(0, mpq_class(-7, 3)), 0}});
  for (MatrixFormat f : {MatrixFormat::kCsv, MatrixFormat::kJson}) {
    const std::string text = format_matrix(m, f);
    EXPECT_EQ(parse_matrix(text, f), m) << text;
    EXPECT_EQ(format_matrix(parse_matrix(text, f), f), text);
  }
  EXPECT_NE(format_matrix(m, MatrixFormat::kCsv).find("3/5"), std::string::npos);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
