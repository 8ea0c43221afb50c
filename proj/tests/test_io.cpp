#include <gtest/gtest.h>

#include <random>

#include "catalysis/catalysis.hpp"
#include "catalysis/io/json.hpp"
#include "test_util.hpp"

using namespace catalysis;
using io::Json;

TEST(Json, MatrixRoundTrip) {
  std::mt19937_64 rng(1);
  const auto rho = testkit::random_density(rng, 3);
  const Json j = Json::parse(io::to_json(rho.matrix()).dump());
  EXPECT_EQ(io::matrix(j, "x"), rho.matrix());
  EXPECT_EQ(io::density(j, "x").matrix(), rho.matrix());
}

TEST(Json, ImaginaryPartOptionalAndArraysAreDiagonal) {
  const Json j = Json::parse(R"({"re": [[0.25, 0], [0, 0.75]]})");
  EXPECT_EQ(io::density(j, "x").matrix(), DensityMatrix::diagonal(ProbabilityVector({0.25, 0.75})).matrix());
  EXPECT_EQ(io::density(Json::parse("[0.25, 0.75]"), "x").matrix(), io::density(j, "x").matrix());
}

TEST(Json, LayoutRoundTrip) {
  const SubsystemLayout l({2, 3, 4}, {"S", "A", "R"});
  const auto back = io::layout(Json::parse(io::to_json(l).dump()), "layout");
  EXPECT_EQ(back.dims(), l.dims());
  EXPECT_EQ(back.labels(), l.labels());
}

TEST(Json, SchemaErrorsNamePath) {
  const auto message = [](auto&& f) {
    try {
      f();
    } catch (const io::SchemaError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message([] { io::probability(Json::parse(R"([0.5, "a"])"), "in.p"); }), "in.p[1]: expected a number");
  EXPECT_EQ(message([] { io::field(Json::parse("{}"), "rho", "in"); }), "in.rho: missing field");
  EXPECT_EQ(message([] { io::matrix(Json::parse(R"({"re": [[1, 0], [0]]})"), "in.u"); }), "in.u.re[1]: row length differs from row 0");
  EXPECT_NE(message([] { io::probability(Json::parse("[0.5, 0.6]"), "in.p"); }).find("in.p: "), std::string::npos);
  EXPECT_NE(message([] { io::layout(Json::parse(R"({"dims": [2, 2], "labels": ["S", "S"]})"), "in.l"); }).find("duplicate"),
            std::string::npos);
}

TEST(Json, ReportIsStable) {
  auto [cat, perm] = build_classical_catalyst(ProbabilityVector({0.9, 0.1}), ProbabilityVector({0.7, 0.3}), [] {
    ClassicalOptions o;
    o.forced_n = 4;
    return o;
  }());
  const auto rep = apply_protocol(ProbabilityVector({0.9, 0.1}), cat, perm).second;
  const auto a = io::to_json(rep, false).dump(2);
  const auto b = io::to_json(apply_protocol(ProbabilityVector({0.9, 0.1}), cat, perm).second, false).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("timings"), std::string::npos);
  EXPECT_NE(io::to_json(rep, true).dump().find("timings"), std::string::npos);
  EXPECT_TRUE(io::real(std::numeric_limits<double>::infinity()).is_null());
}
