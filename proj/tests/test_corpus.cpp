#include <gtest/gtest.h>

#include "ultrashift/corpus.hpp"

using namespace ultrashift;
using namespace ultrashift::corpus;

namespace {

void expect_all_matched(const std::string& name) {
  auto r = run_fixture(name);
  ASSERT_FALSE(r.rows.empty());
  for (const auto& row : r.rows)
    EXPECT_TRUE(row.matched()) << name << ": " << row.check << " expected " << to_string(row.expected) << " got "
                               << row.actual.to_json().dump();
  EXPECT_TRUE(r.all_matched());
}

}  // namespace

TEST(Fixture, A) { expect_all_matched("a"); }
TEST(Fixture, B) { expect_all_matched("b"); }
TEST(Fixture, C) { expect_all_matched("c"); }
TEST(Fixture, D) { expect_all_matched("d"); }

TEST(Fixture, UnknownNameIsAnError) { EXPECT_THROW(build_fixture("e"), Error); }

TEST(Fixture, ReportJson) {
  auto j = run_fixture("c").to_json();
  EXPECT_EQ(j["fixture"], "c");
  EXPECT_TRUE(j["all_matched"].get<bool>());
  for (const auto& row : j["rows"]) {
    EXPECT_TRUE(row.contains("verdict"));
    EXPECT_TRUE(row["verdict"].contains("qualifier"));
  }
}

TEST(Fixture, ClassOracleAgreesWithSymbolAt) {
  auto m = example_a_map();
  const Symbol b = Symbol::emitter_symbol(emitter_named(m.target, "B"));
  auto o = class_oracle(m, b);
  EXPECT_TRUE(o.contains(Point::zero(0)));
  EXPECT_TRUE(o.contains(Point::periodic({}, {EdgeRef{0, 0}})));
  EXPECT_FALSE(o.contains(Point::periodic({EdgeRef{0, 0}}, {EdgeRef{1, 2}})));
}

TEST(Fixture, ExampleBRefutationWitnessesApproachZeros) {
  auto m = example_b_map();
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.target, "A"));
  auto v = refute(m, a, Point::periodic({}, {EdgeRef{0, 0}}), 4);
  EXPECT_EQ(v.status, Status::Fails);
}
