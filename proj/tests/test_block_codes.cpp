#include <gtest/gtest.h>

#include "ultrashift/checks.hpp"
#include "ultrashift/corpus_maps.hpp"

using namespace ultrashift;
using namespace ultrashift::corpus;

namespace {

EdgeRef d() { return {0, 0}; }
EdgeRef f(Index j) { return {1, j}; }
EdgeRef e(Index j) { return {0, j}; }
Symbol S(EdgeRef x) { return Symbol::of(x); }

// Example b by hand: integers are edges, -1 is the tail A.
std::vector<int> example_b_by_hand(const std::vector<int>& x, std::size_t n) {
  auto at = [&](std::size_t i) { return i < x.size() ? x[i] : -1; };
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i) != 0) {
      out.push_back(at(i));
      continue;
    }
    std::size_t k = 0;
    while (at(i + k + 1) == 0) ++k;
    out.push_back(static_cast<int>(k));
  }
  return out;
}

}  // namespace

TEST(SymbolAt, ExampleA) {
  auto m = example_a_map();
  EXPECT_EQ(symbol_at(m, Point::zero(0)), Symbol::emitter_symbol(0));
  EXPECT_EQ(symbol_at(m, Point::periodic({d(), d()}, {f(3)})), S(e(3)));
  EXPECT_EQ(symbol_at(m, Point::periodic({}, {d()})), Symbol::emitter_symbol(0));
  EXPECT_EQ(symbol_at(m, Point::finite({d(), d()}, 0)), Symbol::emitter_symbol(0));
}

TEST(SymbolAt, ExampleD) {
  auto m = example_d_map();
  EXPECT_EQ(symbol_at(m, Point::periodic({e(0), e(0)}, {e(2)})), S(EdgeRef{0, -2}));
  EXPECT_EQ(symbol_at(m, Point::periodic({}, {e(0)})), Symbol::emitter_symbol(emitter_named(m.target, "P")));
}

TEST(SymbolAt, OverlapReportsEveryClass) {
  auto m = constant_map();
  m.classes.push_back({ClassTarget::fixed(S(e(2))), IndexSet::all(), {schema({Atom::literal(d())})}});
  try {
    symbol_at(m, Point::periodic({}, {d()}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::PartitionViolation);
    EXPECT_NE(std::string(err.what()).find("e[1]"), std::string::npos);
    EXPECT_NE(std::string(err.what()).find("e[2]"), std::string::npos);
  }
  m.classes.clear();
  EXPECT_THROW(
      {
        try {
          symbol_at(m, Point::zero(0));
        } catch (const Error& err) {
          EXPECT_EQ(err.kind(), ErrorKind::NoClass);
          throw;
        }
      },
      Error);
}

TEST(EvalMap, ExampleBAgainstHandComputation) {
  auto m = example_b_map();
  auto n = [](Index k) { return EdgeRef{0, k}; };
  auto y = eval_map(m, Point::finite({n(0), n(0), n(2), n(1)}, 0));
  ASSERT_TRUE(y.point);
  EXPECT_EQ(*y.point, Point::finite({n(1), n(0), n(2), n(1)}, 0));
  auto hand = example_b_by_hand({0, 0, 2, 1}, 4);
  for (std::size_t i = 0; i < hand.size(); ++i) EXPECT_EQ(y.prefix[i], S(n(hand[i])));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> x;
    std::vector<EdgeRef> path;
    int len = std::uniform_int_distribution<int>(0, 7)(rng);
    for (int i = 0; i < len; ++i) {
      int v = std::uniform_int_distribution<int>(0, 2)(rng) ? 0 : std::uniform_int_distribution<int>(1, 4)(rng);
      x.push_back(v);
      path.push_back(n(v));
    }
    auto img = eval_map(m, Point::finite(path, 0), len + 2);
    auto ref = example_b_by_hand(x, len + 2);
    for (int i = 0; i < len + 2; ++i) {
      Symbol want = ref[i] < 0 ? Symbol::emitter_symbol(0) : S(n(ref[i]));
      EXPECT_EQ(img.prefix[i], want) << "t=" << t << " i=" << i;
    }
  }
  EXPECT_EQ(*eval_map(m, Point::periodic({}, {n(0)})).point, Point::zero(0));
}

TEST(EvalMap, ExampleD) {
  auto m = example_d_map();
  auto g = [](Index k) { return EdgeRef{0, k}; };
  EXPECT_EQ(*eval_map(m, Point::periodic({e(0), e(0)}, {e(2)})).point, Point::periodic({g(-2), g(-1)}, {g(2)}));
  EXPECT_EQ(*eval_map(m, Point::zero(0)).point, Point::zero(emitter_named(m.target, "Q")));
  EXPECT_EQ(*eval_map(m, Point::finite({e(0), e(0)}, 0)).point,
            Point::finite({g(-2), g(-1)}, emitter_named(m.target, "Q")));
}

TEST(EvalMap, GeneratorInputIsLazy) {
  auto m = example_a_map();
  Point x = Point::generated("f-ramp", [](std::size_t k) { return f(static_cast<Index>(k)); }, 20);
  auto y = eval_map(m, x, 5);
  EXPECT_FALSE(y.exact);
  EXPECT_EQ(y.prefix[4], S(e(5)));
  EXPECT_EQ(y.point->coordinate(9), S(e(9)));
}

TEST(EvalMap, InvalidOutputIsReported) {
  // B followed by e_1 is not a point.
  auto m = constant_map();
  m.classes[0].items = {schema({Atom::literal(d())}), schema({Atom::literal(f(1))})};
  m.classes.push_back({ClassTarget::fixed(Symbol::emitter_symbol(0)), IndexSet::all(),
                       {schema({Atom::literal(Symbol::emitter_symbol(0))}),
                        schema({Atom::of_family(1)}, IndexSet::at_least(2))}});
  EXPECT_THROW(eval_map(m, Point::periodic({f(2)}, {f(1)})), Error);
  EXPECT_NO_THROW(eval_map(m, Point::periodic({f(1)}, {d()})));
}

TEST(ValidateMap, FixtureMapsArePartitions) {
  for (const auto& m : {example_a_map(), example_b_map(), example_c1_map(), example_c2_map(), example_d_map(),
                        example_d_inverse(), constant_map(), identity_map()}) {
    auto v = validate_map(m);
    EXPECT_TRUE(v.holds()) << m.name << " " << v.to_json().dump();
  }
}

TEST(ValidateMap, EmitterClassMustBeShiftInvariant) {
  // C_B = [A] ∪ [d]: σ(d f_1 ...) leaves C_B.
  auto m = example_a_map();
  m.classes[0].items = {schema({Atom::literal(Symbol::emitter_symbol(0))}), schema({Atom::literal(d())})};
  m.classes[1].items = {schema({Atom::of_family(1)}, IndexSet::at_least(1))};
  auto v = validate_map(m);
  EXPECT_TRUE(v.fails());
}

TEST(Commuting, PartitionMapsCommute) {
  SampleOptions o;
  for (const auto& m : {example_a_map(), example_b_map(), example_d_map(), example_d_inverse(), example_c2_map()}) {
    auto v = check_commuting(m.source, m.target, as_point_map(m), sample_points(m.source, o), 16);
    EXPECT_TRUE(v.holds()) << m.name << " " << v.to_json().dump();
  }
}

TEST(Commuting, PrependingAnEdgeFails) {
  ShiftSpace sp(example_a_source());
  PointMap prepend = [](const Point& x) {
    if (x.is_finite()) {
      auto p = x.as_finite().path;
      p.insert(p.begin(), d());
      return Point::finite(p, x.as_finite().tail);
    }
    auto p = x.as_periodic().preamble;
    p.insert(p.begin(), d());
    return Point::periodic(p, x.as_periodic().cycle);
  };
  auto v = check_commuting(sp, sp, prepend, sample_points(sp), 12);
  EXPECT_TRUE(v.fails());
  EXPECT_TRUE(v.witness.contains("point"));
}

TEST(Properties, LeftShiftAndFiniteImageBound) {
  for (const auto& m : {example_a_map(), example_b_map(), example_d_map(), example_d_inverse(), example_c1_map()}) {
    for (const auto& x : sample_points(m.source)) {
      auto y = eval_map(m, x, 10);
      auto ys = eval_map(m, x.shifted(), 10);
      for (std::size_t i = 1; i < 10; ++i) ASSERT_EQ(y.prefix[i], ys.prefix[i - 1]) << m.name << " " << x.to_string(m.source);
      if (x.is_finite() && symbol_at(m, Point::zero(x.as_finite().tail)).is_emitter())
        EXPECT_LE(*y.point->length(), *x.length());
    }
  }
}

TEST(Period, ImagesKeepThePeriod) {
  auto a = example_a_map();
  auto v = check_period_preservation(a, Point::periodic({}, {d()}));
  EXPECT_TRUE(v.holds());
  EXPECT_EQ(v.witness["image"], "fin: | B");
  auto dm = example_d_map();
  auto w = check_period_preservation(dm, Point::periodic({}, {e(2)}));
  EXPECT_TRUE(w.holds());
  EXPECT_EQ(w.witness["image"], "inf: (f[2])*");
  EXPECT_TRUE(check_period_preservation(dm, Point::zero(0)).holds());
  EXPECT_THROW(check_period_preservation(a, Point::periodic({f(1)}, {d()})), Error);
}

namespace {

Symbol B() { return Symbol::emitter_symbol(0); }

// Target with an infinite emitter {v} (loops e_j) and a vertex u with a
// single loop h; every f_j-start maps to h.
MapPresentation escaping_map() {
  Ultragraph h;
  h.name = "H2";
  int v = h.add_vertex_family("v", IndexSet::range(0, 1));
  EdgeFamily e;
  e.name = "e";
  e.domain = IndexSet::at_least(1);
  e.source.push_back({e.domain, v, AffineIndexMap::constant(0)});
  e.range.push_back({e.domain, VertexSet::of(VertexRef{v, 0}), {}});
  h.add_edge_family(e);
  EdgeFamily loop;
  loop.name = "h";
  loop.domain = IndexSet::point(0);
  loop.source.push_back({loop.domain, v, AffineIndexMap::constant(1)});
  loop.range.push_back({loop.domain, VertexSet::of(VertexRef{v, 1}), {}});
  h.add_edge_family(loop);
  MapPresentation m{"Esc", ShiftSpace(example_a_source()), ShiftSpace(h), {}};
  m.classes.push_back({ClassTarget::fixed(B()), IndexSet::all(), {schema({Atom::literal(B())})}});
  m.classes.push_back({ClassTarget::fixed(S(EdgeRef{0, 1})), IndexSet::all(), {schema({Atom::literal(d())})}});
  m.classes.push_back({ClassTarget::fixed(S(EdgeRef{1, 0})), IndexSet::all(), {schema({Atom::of_family(1)}, IndexSet::at_least(1))}});
  return m;
}

MapPresentation constant_b_map() {
  MapPresentation m{"ConstB", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}};
  m.classes.push_back({ClassTarget::fixed(B()), IndexSet::all(), {schema({Atom::any()})}});
  return m;
}

std::string edges_of(const Verdict& v, const char* key) { return v.witness[key].get<std::string>(); }

}  // namespace

TEST(ItemI, EdgeOnlySchemasAreOpen) {
  EXPECT_TRUE(check_csc_item_i(example_a_map()).holds());
  EXPECT_TRUE(check_csc_item_i(example_c1_map()).holds());
  auto m = example_c1_map();
  m.classes[2].items[0] = Pattern{2, {Atom::of_family(1)}, IndexSet::at_least(1)};
  m.classes[1].items.push_back(schema({Atom::literal(S(f(1)))}));
  m.classes[1].items.push_back(schema({Atom::literal(f(1)), Atom::literal(d())}));
  // classes are no longer a partition, but anchored edge blocks stay open
  EXPECT_TRUE(check_csc_item_i(m).holds());
}

TEST(ItemI, EmitterPointNeedsCofiniteNeighbourhood) {
  // C_{e_1} = [A] ∪ [d] ∪ [f_j, j >= 2] contains D_{A,{f_1}}
  auto ok = check_csc_item_i(example_c2_map());
  EXPECT_TRUE(ok.holds()) << ok.to_json().dump();
  // C_{e_1} = [A] ∪ [d] with every f_j elsewhere is not open at A
  auto m = example_c2_map();
  m.classes[0].items.pop_back();
  m.classes[1].items = {schema({Atom::of_family(1)}, IndexSet::at_least(1))};
  auto v = check_csc_item_i(m);
  ASSERT_TRUE(v.fails()) << v.to_json().dump();
  EXPECT_EQ(v.witness["point"], "fin: | A");
  EXPECT_TRUE(v.witness["escaping"]["infinite"].get<bool>());
}

TEST(ItemI, OracleEdgeClassIsUnknown) {
  EXPECT_EQ(check_csc_item_i(example_b_map()).status, Status::Unknown);
  EXPECT_TRUE(check_csc_item_i(MapPresentation{"Empty", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}}).holds());
}

TEST(ItemII, ExampleAAtTheEmitter) {
  auto m = example_a_map();
  auto v = check_csc_item_ii(m, Point::zero(0));
  ASSERT_TRUE(v.holds()) << v.to_json().dump();
  EXPECT_EQ(edges_of(v, "F_prime"), "{}");
  // the bad extensions for F = {e_1} are exactly d and f_1
  auto w = check_csc_item_ii(m, Point::zero(0), EdgeSet::of(e(1)));
  ASSERT_TRUE(w.holds()) << w.to_json().dump();
  EXPECT_EQ(edges_of(w, "F_prime"), m.source.graph().format(EdgeSet::of(std::vector<EdgeRef>{d(), f(1)})));
}

TEST(ItemII, ConstantAndInfiniteImages) {
  auto c = constant_b_map();
  for (const auto& x : {Point::zero(0), Point::finite({d(), f(2)}, 0)}) {
    auto v = check_csc_item_ii(c, x, EdgeSet::of(e(3)));
    EXPECT_TRUE(v.holds());
    EXPECT_EQ(edges_of(v, "F_prime"), "{}");
  }
  EXPECT_EQ(check_csc_item_ii(example_c2_map(), Point::zero(0)).status, Status::NotApplicable);
  EXPECT_THROW(check_csc_item_ii(c, Point::periodic({}, {d()})), Error);
}

TEST(ItemII, TruncatedPrefixAfterImageLength) {
  // Φ(f_2 A) = (e_2 B), so l = 1 and γ is empty
  auto v = check_csc_item_ii(example_a_map(), Point::finite({f(2)}, 0), EdgeSet::of(e(5)));
  ASSERT_TRUE(v.holds());
  EXPECT_EQ(v.witness["l"], 1);
  EXPECT_EQ(edges_of(v, "F_prime"), example_a_map().source.graph().format(EdgeSet::of(std::vector<EdgeRef>{d(), f(5)})));
}

TEST(GenChl, TwoAFindsTheLeastF) {
  auto v = check_genchl_iia(example_a_map(), Point::zero(0));
  ASSERT_TRUE(v.holds());
  EXPECT_EQ(edges_of(v, "F"), "{}");
  auto w = check_genchl_iia(escaping_map(), Point::zero(0));
  ASSERT_TRUE(w.fails()) << w.to_json().dump();
  EXPECT_TRUE(w.witness["escaping"]["infinite"].get<bool>());
  EXPECT_THROW(check_genchl_iia(example_c2_map(), Point::zero(0)), Error);
}

TEST(GenChl, AxOfExampleA) {
  auto m = example_a_map();
  auto g = m.source.graph();
  auto ax = compute_A_x(m, Point::zero(0), Point::periodic({}, {f(3)}));
  EXPECT_TRUE(ax.finite());
  EXPECT_EQ(ax.symbol, S(e(3)));
  EXPECT_EQ(ax.set.edges, EdgeSet::of(std::vector<EdgeRef>{d(), f(3)}));
  auto ax2 = compute_A_x(m, Point::zero(0), Point::periodic({d()}, {f(3)}));
  EXPECT_EQ(ax2.set.edges, ax.set.edges);
  auto c1 = example_c1_map();
  c1.classes[1].items = {schema({Atom::literal(f(7))})};
  c1.classes[2].param = IndexSet::at_least(1).minus(IndexSet::point(7));
  c1.classes[2].items = {schema({Atom::of_family(1)}, c1.classes[2].param)};
  c1.classes[2].items.push_back(schema({Atom::literal(d())}));
  auto one = compute_A_x(c1, Point::zero(0), Point::periodic({}, {f(7)}));
  EXPECT_EQ(one.set.edges, EdgeSet::of(f(7)));
  EXPECT_THROW(compute_A_x(m, Point::zero(0), Point::zero(0)), Error);
}

TEST(ItemIII, ConstantInfiniteImage) {
  auto v = check_csc_item_iii(constant_map(), 0, 5);
  ASSERT_TRUE(v.holds()) << v.to_json().dump();
  EXPECT_EQ(edges_of(v, "F"), "{}");
  EXPECT_EQ(check_csc_item_iii(example_d_map(), 0, 3).status, Status::NotApplicable);
  auto w = check_csc_item_iii(example_c2_map(), 0, 1);
  ASSERT_TRUE(w.fails()) << w.to_json().dump();
  EXPECT_EQ(w.witness["i"], 1);
  auto u = check_csc_item_iii(example_c2_map(), 0, 0);
  ASSERT_TRUE(u.holds());
  EXPECT_EQ(edges_of(u, "F"), "f[1]");
}

TEST(LengthPreserving, Corpus) {
  auto id = check_length_preserving(identity_map());
  EXPECT_TRUE(id.holds()) << id.to_json().dump(1);
  auto b = check_length_preserving(example_b_map());
  ASSERT_TRUE(b.fails());
  EXPECT_EQ(b.witness["first_failure"]["check"], "length-preserving-ii");
  EXPECT_EQ(b.witness["first_failure"]["witness"]["point"], "inf: (n[0])*");
  auto dd = check_length_preserving(example_d_map());
  ASSERT_TRUE(dd.fails());
  EXPECT_EQ(dd.witness["first_failure"]["witness"]["point"], "inf: (e[0])*");
  EXPECT_EQ(dd.witness["first_failure"]["witness"]["class"], "P");
  EXPECT_TRUE(check_length_preserving(example_a_map()).fails());
}

TEST(Probe, ExampleADiscontinuousAtD) {
  auto m = example_a_map();
  auto v = probe_continuity(m, Point::periodic({}, {d()}));
  ASSERT_TRUE(v.fails()) << v.to_json().dump(1);
  EXPECT_EQ(v.witness["image"], "fin: | B");
  for (const auto& y : v.witness["images"]) {
    auto text = y.get<std::string>().substr(5);
    if (text[0] == '(') text = text.substr(1);
    EXPECT_EQ(text.rfind("e[1]", 0), 0u) << y;
  }
  EXPECT_TRUE(probe_continuity(m, Point::zero(0)).holds());
}

TEST(Probe, ExampleBContinuousAtZero) {
  auto m = example_b_map();
  auto v = probe_continuity(m, Point::periodic({}, {EdgeRef{0, 0}}));
  EXPECT_TRUE(v.holds()) << v.to_json().dump(1);
  for (const auto& x : sample_points(m.source, {2, 2, 20, 5, 60}))
    if (x.is_periodic()) EXPECT_TRUE(probe_continuity(m, x).holds()) << x.to_string(m.source);
}

TEST(Composite, CscVerdicts) {
  auto c1 = check_csc(example_c1_map());
  EXPECT_TRUE(c1.holds()) << c1.to_json().dump(1);
  auto c2 = check_csc(example_c2_map());
  EXPECT_TRUE(c2.fails());
  auto a = check_csc(example_a_map());
  ASSERT_TRUE(a.fails());
  EXPECT_EQ(a.witness["first_failure"]["check"], "continuity-on-infinite-preimage");
  auto g = check_genchl(example_c1_map());
  EXPECT_TRUE(g.holds()) << g.to_json().dump(1);
  EXPECT_TRUE(check_genchl(example_c2_map()).fails());
}
