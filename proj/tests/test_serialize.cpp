#include <gtest/gtest.h>

#include "nto1/serialize.hpp"

using namespace nto1;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(FieldSpec, InlineAndJsonRoundTrip) {
  const Field F = parse_field("p=3, m=3");
  EXPECT_EQ(F.order(), 27u);
  const Field G = parse_field(field_to_json(F).dump());
  EXPECT_EQ(F, G);
  EXPECT_EQ(G.beta(), F.beta());
  const Field H = parse_field("p=3,m=6,modulus=2:2:1:0:2:0:1");
  EXPECT_EQ(H.modulus(), (std::vector<std::uint32_t>{2, 2, 1, 0, 2, 0, 1}));
}

TEST(FieldSpec, Errors) {
  EXPECT_EQ(kind_of([] { parse_field("p=3"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_field("p=3,m=x"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_field("p=3,m=2,q=9"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_field("{\"p\":3"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_field("{\"p\":3,\"m\":2,\"beta\":1}"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_field("p=4,m=1"); }), ErrorKind::NotPrime);
}

TEST(Elements, Specs) {
  const Field F = Field::make(3, 2);
  EXPECT_EQ(parse_element(F, "5"), F.from_code(5));
  EXPECT_EQ(parse_element(F, "b^3"), F.pow(F.beta(), 3));
  EXPECT_EQ(parse_element(F, "b"), F.beta());
  EXPECT_EQ(parse_element(F, "[2,1]"), F.from_code(2 + 3));
  EXPECT_EQ(element_to_json(F, F.from_code(5)).dump(), "[2,1]");
  EXPECT_THROW(parse_element(F, "9"), Error);
  EXPECT_EQ(kind_of([&] { parse_element(F, "b3"); }), ErrorKind::ParseError);
}

TEST(Polys, TextForms) {
  const Field F = Field::make(7, 1);
  EXPECT_EQ(parse_poly(F, "x^3"), PolyMap::monomial(F, F.one(), 3));
  EXPECT_EQ(parse_poly(F, "6*x^4 + 2*x"), PolyMap::from_terms(F, {{4, F.from_int(6)}, {1, F.from_int(2)}}));
  EXPECT_EQ(parse_poly(F, "-x^2 - 1"), PolyMap::from_terms(F, {{2, F.from_int(-1)}, {0, F.from_int(-1)}}));
  EXPECT_EQ(parse_poly(F, "x*x + 8"), PolyMap::from_terms(F, {{2, F.one()}, {0, F.one()}}));
  const Field G = Field::make(3, 2);
  EXPECT_EQ(parse_poly(G, "b^2*x^3 + b*x"), PolyMap::from_terms(G, {{3, G.pow(G.beta(), 2)}, {1, G.beta()}}));
  for (const char* bad : {"", "x^", "x + ", "2y", "x ^ 3 3"})
    EXPECT_EQ(kind_of([&] { parse_poly(F, bad); }), ErrorKind::ParseError) << bad;
}

TEST(Polys, JsonRoundTrip) {
  const Field F = Field::make(3, 3);
  const PolyMap f = PolyMap::from_terms(F, {{5, F.beta()}, {1, F.from_int(2)}, {0, F.one()}});
  const Json j = poly_to_json(f);
  EXPECT_EQ(parse_poly(F, j.dump()), f);
  EXPECT_EQ(kind_of([&] { parse_poly(F, "[[1]]"); }), ErrorKind::ParseError);
}

TEST(Reports, CubesOverGf7) {
  const Field F = Field::make(7, 1);
  const auto r = classify(PolyMap::monomial(F, F.one(), 3));
  EXPECT_EQ(report_to_json(F, r).dump(), R"({"n":3,"exception":[[0],1],"domain_size":7,"irregular":false})");
  const auto perm = classify(PolyMap::identity(F));
  EXPECT_EQ(report_to_json(F, perm).dump(), R"({"n":1,"exception":null,"domain_size":7,"irregular":false})");
}

TEST(Csv, SchemaLineAndWidth) {
  CsvTable t{"demo/1", {"a", "b"}, {}};
  t.add({"1", csv_bool(true)});
  EXPECT_EQ(t.str(), "#schema=demo/1\na,b\n1,true\n");
  EXPECT_THROW(t.add({"1"}), Error);
}
