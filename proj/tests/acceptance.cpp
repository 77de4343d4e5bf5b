// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Tolerances are exact (set equality, zero counterexamples)
// and every criterion carries a wall-clock budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ultrashift/checks.hpp"
#include "ultrashift/corpus.hpp"
#include "ultrashift/cylinder.hpp"
#include "ultrashift/definable.hpp"
#include "ultrashift/dsl_print.hpp"
#include "ultrashift/g0.hpp"

using namespace ultrashift;
using namespace ultrashift::corpus;

namespace {

struct Result {
  bool pass = true;
  std::vector<std::string> failures;
  std::string summary;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Result()> run;
};

std::vector<ShiftSpace> fixture_spaces() {
  return {ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), ShiftSpace(example_b_graph()),
          ShiftSpace(example_d_source()), ShiftSpace(example_d_target())};
}

std::vector<Point> pool(const ShiftSpace& sp, std::size_t n, std::uint64_t seed) {
  SampleOptions o;
  o.random = n;
  o.seed = seed;
  return sample_points(sp, o);
}

/// Random generalized cylinder D_{y,F} with the base taken from a sampled
/// point; `min_length` 1 excludes zero-length bases.
std::optional<Cylinder> random_cylinder(const ShiftSpace& sp, const std::vector<Point>& pts, std::mt19937_64& rng,
                                        std::size_t min_length) {
  const Point& p = pts[rng() % pts.size()];
  auto len = p.length();
  std::size_t avail = len ? *len : 4;
  if (avail < min_length) return std::nullopt;
  std::size_t n = min_length + rng() % (std::min<std::size_t>(avail, 4) - min_length + 1);
  auto edges = p.edge_prefix(n);
  VertexSet term;
  if (edges.empty()) {
    auto ems = sp.emitters();
    if (ems.empty() || rng() % 3 == 0) {
      auto es = sp.graph().all_edges().closest_to_zero(6);
      term = sp.range(es[rng() % es.size()]);
    } else {
      term = ems[rng() % ems.size()].set;
    }
  } else {
    term = sp.range(edges.back());
    auto ems = sp.emitters_in(term);
    if (!ems.empty() && rng() % 3 == 0) term = sp.emitter(ems[rng() % ems.size()]);
  }
  EdgeSet f;
  auto cand = sp.emitted(term).closest_to_zero(4);
  for (const auto& e : cand)
    if (rng() % 3 == 0) f = f.unite(EdgeSet::of(e));
  Cylinder c{{edges, term}, f};
  try {
    require_valid(sp, c);
  } catch (const Error&) {
    return std::nullopt;
  }
  return c;
}

/// Points y·z for sampled z; these land inside D_{y,F} unless z starts in F.
std::vector<Point> extensions(const ShiftSpace& sp, const Ultrapath& y, const std::vector<Point>& pts, std::size_t n) {
  std::vector<Point> out;
  for (const auto& z : pts) {
    if (out.size() >= n) break;
    try {
      out.push_back(concat(sp, y, z));
    } catch (const Error&) {
    }
  }
  return out;
}

std::string first_symbol_text(std::string s) {
  s = s.substr(5);
  if (!s.empty() && s[0] == '(') s = s.substr(1);
  return s;
}

// ---- 1 ------------------------------------------------------------------

Result minimal_emitters() {
  Result r;
  auto sets = [](const Ultragraph& g) {
    auto inv = minimal_infinite_emitters(g);
    std::set<VertexSet> s;
    for (const auto& m : inv.emitters) s.insert(m.set);
    return std::pair{s, inv.complete};
  };
  auto expect = [&](const std::string& what, const Ultragraph& g, std::set<VertexSet> want) {
    auto [got, complete] = sets(g);
    r.require(complete, what + ": inventory incomplete");
    std::string text;
    for (const auto& s : got) text += (text.empty() ? "" : ", ") + g.format(s);
    r.require(got == want, what + ": got {" + text + "}");
  };
  expect("d/G", example_d_source(), {VertexSet::single(0, IndexSet::at_least(0))});
  expect("d/H", example_d_target(), {VertexSet::single(0, IndexSet::at_most(-1)), VertexSet::single(0, IndexSet::at_least(1))});
  expect("a/G", example_a_source(), {VertexSet::single(0, IndexSet::point(0))});
  expect("a/H", example_a_target(), {VertexSet::single(0, IndexSet::point(0))});
  const auto dg = example_d_source();
  r.require(*dg.named_set("A") == dg.all_vertices(), "d/G: A is not the whole vertex set");
  r.summary = "d/G = {A}, d/H = {P, Q}, a/G = {{w}}";
  return r;
}

// ---- 2 ------------------------------------------------------------------

Result cylinder_decomposition() {
  Result r;
  std::mt19937_64 rng(20);
  std::size_t cylinders = 0, checks = 0, inside = 0;
  for (const auto& sp : fixture_spaces()) {
    auto pts = pool(sp, 400, 3);
    std::size_t made = 0;
    while (made < 100) {
      auto c = random_cylinder(sp, pts, rng, 0);
      if (!c) continue;
      ++made;
      FdPresentation p = decompose_cylinder(sp, *c);
      auto test = extensions(sp, c->base, pts, 100);
      for (std::size_t i = 0; test.size() < 200; ++i) test.push_back(pts[(i * 7919 + made) % pts.size()]);
      for (const auto& x : test) {
        bool in = cylinder_contains(sp, *c, x);
        inside += in;
        ++checks;
        r.require(in == matches_any(p.positive, x) && !in == matches_any(p.negative, x),
                  sp.name() + ": " + x.to_string(sp));
      }
    }
    cylinders += made;
  }
  r.summary = std::to_string(cylinders) + " cylinders, " + std::to_string(checks) + " memberships (" +
              std::to_string(inside) + " inside), 0 tolerance";
  return r;
}

// ---- 3 ------------------------------------------------------------------

Result shift_law() {
  Result r;
  std::mt19937_64 rng(30);
  std::size_t forward = 0, backward = 0, cylinders = 0;
  auto spaces = fixture_spaces();
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const auto& sp = spaces[si];
    auto pts = pool(sp, 300, 4);
    const std::size_t quota = 100 / spaces.size() + (si < 100 % spaces.size() ? 1 : 0);
    std::size_t made = 0;
    while (made < quota) {
      auto c = random_cylinder(sp, pts, rng, 1);
      if (!c) continue;
      ++made;
      Cylinder s = shift_cylinder(*c);
      const Ultrapath head{{c->base.edges.front()}, sp.range(c->base.edges.front())};
      auto left = extensions(sp, c->base, pts, 50);
      auto right = extensions(sp, s.base, pts, 50);
      for (std::size_t i = 0; left.size() < 100; ++i) left.push_back(pts[(i * 104729 + made) % pts.size()]);
      for (std::size_t i = 0; right.size() < 100; ++i) right.push_back(pts[(i * 7907 + made) % pts.size()]);
      for (const auto& x : left) {
        if (!cylinder_contains(sp, *c, x)) continue;
        ++forward;
        r.require(cylinder_contains(sp, s, x.shifted()), "σx outside D_{σy,F}: " + x.to_string(sp));
      }
      for (const auto& z : right) {
        if (!cylinder_contains(sp, s, z)) continue;
        ++backward;
        bool ok = false;
        try {
          Point pre = concat(sp, head, z);
          ok = cylinder_contains(sp, *c, pre) && pre.shifted() == z;
        } catch (const Error&) {
        }
        r.require(ok, "no preimage y_1·z in D_{y,F}: " + z.to_string(sp));
      }
    }
    cylinders += made;
  }
  r.require(forward > 0 && backward > 0, "no points inside the sampled cylinders");
  r.summary = std::to_string(cylinders) + " cylinders, " + std::to_string(forward) + " σ(D) ⊆ D' and " +
              std::to_string(backward) + " D' ⊆ σ(D) instances";
  return r;
}

// ---- 4 ------------------------------------------------------------------

Result commutation() {
  Result r;
  auto c1 = example_c1_map(), c2 = example_c2_map();
  c1.name = "c1";
  c2.name = "c2";
  std::vector<std::pair<std::string, MapPresentation>> maps = {
      {"a", example_a_map()}, {"b", example_b_map()},         {"c1", c1},
      {"c2", c2},             {"d", example_d_map()},         {"d-inverse", example_d_inverse()},
      {"constant", constant_map()}, {"identity", identity_map()}};
  for (const auto& [name, m] : maps) {
    r.require(validate_map(m).holds(), name + ": not a partition");
    Verdict v = commute_on_samples(m, 100, 16);
    r.require(v.holds(), name + ": " + v.witness.dump());
    r.require(v.bounds["samples"] == 100 && v.notes.empty(), name + ": " + v.to_json().dump());
  }
  r.summary = std::to_string(maps.size()) + " partition maps, 100 samples each at depth 16";
  return r;
}

// ---- hand rules ---------------------------------------------------------

/// Example a by hand: skip leading d; B on A or an all-d tail, e_j on f_j.
Symbol hand_a(const Point& x) {
  const std::size_t horizon = x.is_finite() ? *x.length() + 1 : x.as_periodic().preamble.size() + x.as_periodic().cycle.size();
  for (std::size_t i = 1; i <= horizon; ++i) {
    Symbol s = x.coordinate(i);
    if (s.is_emitter()) return Symbol::emitter_symbol(0);
    if (s.edge.family == 1) return Symbol::of(EdgeRef{0, s.edge.index});
  }
  return Symbol::emitter_symbol(0);
}

/// Example b by hand at coordinate n: x_n when nonzero, A on A or an
/// all-zero tail, else (length of the zero run) - 1.
Symbol hand_b(const Point& x, std::size_t n) {
  Symbol s = x.coordinate(n);
  if (s.is_emitter()) return s;
  if (s.edge.index != 0) return s;
  const std::size_t horizon =
      n + (x.is_finite() ? *x.length() + 1 : x.as_periodic().preamble.size() + x.as_periodic().cycle.size());
  for (std::size_t i = n; i <= horizon; ++i) {
    Symbol t = x.coordinate(i);
    if (!(t.is_edge() && t.edge.index == 0)) return Symbol::of(EdgeRef{0, static_cast<Index>(i - n) - 1});
  }
  return Symbol::emitter_symbol(0);
}

/// The point whose coordinates are `ys`, closed off at the first emitter.
Point point_of(const std::vector<Symbol>& ys) {
  std::vector<EdgeRef> path;
  for (const auto& y : ys) {
    if (y.is_emitter()) return Point::finite(path, y.emitter);
    path.push_back(y.edge);
  }
  throw Error(ErrorKind::Precondition, "no emitter within the prefix");
}

/// Complete table: every window 1 <= k <= l <= w has a witness that agrees
/// with x there and lies outside the class, per `outside`.
void require_complete_refutation(Result& r, const std::string& what, const ShiftSpace& sp, const Refutation& ref,
                                 const Point& x, std::size_t w, const std::function<bool(const Point&)>& outside) {
  r.require(ref.refuted(), what + ": open windows remain");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& row : ref.rows) {
    seen.insert({row.k, row.l});
    bool agrees = true;
    for (std::size_t i = row.k; i <= row.l; ++i) agrees = agrees && row.witness.coordinate(i) == x.coordinate(i);
    r.require(agrees, what + ": witness leaves x on " + std::to_string(row.k) + ".." + std::to_string(row.l));
    r.require(outside(row.witness), what + ": witness in the class: " + row.witness.to_string(sp));
  }
  r.require(seen.size() == w * (w + 1) / 2, what + ": " + std::to_string(seen.size()) + " windows covered");
}

Refutation refute_class(const MapPresentation& m, const Symbol& cls, const Point& x, std::size_t w) {
  RefuteBounds rb;
  rb.max_window = w;
  return refute_finitely_defined(m.source, class_oracle(m, cls), x, rb);
}

// ---- 5 ------------------------------------------------------------------

Result example_a() {
  Result r;
  auto m = example_a_map();
  const Point ddd = Point::periodic({}, {EdgeRef{0, 0}});
  Verdict c = commute_on_samples(m, 100, 16);
  r.require(c.holds(), "commute: " + c.to_json().dump());
  Verdict p = probe_continuity(m, ddd);
  r.require(p.fails(), "probe at (ddd...) did not fail");
  std::size_t images = 0;
  if (p.fails()) {
    r.require(p.witness["image"] == "fin: | B", "Φ(ddd...) = " + p.witness["image"].dump());
    r.require(p.witness["sequence"].size() == p.witness["images"].size() && !p.witness["images"].empty(),
              "witness sequence and images differ in size");
    for (const auto& y : p.witness["images"]) {
      ++images;
      r.require(first_symbol_text(y.get<std::string>()).rfind("e[1]", 0) == 0, "image " + y.get<std::string>());
    }
    for (const auto& s : p.witness["sequence"]) {
      Point xn = dsl::parse_point(m.source, s.get<std::string>());
      r.require(hand_a(xn) == Symbol::of(EdgeRef{0, 1}), "sequence point outside C_{e_1}: " + s.get<std::string>());
    }
  }
  const Symbol b = Symbol::emitter_symbol(0);
  auto ref = refute_class(m, b, ddd, 6);
  require_complete_refutation(r, "C_B", m.source, ref, ddd, 6, [&](const Point& y) { return hand_a(y) != b; });
  r.summary = "commute holds; probe fails with " + std::to_string(images) + " images starting e[1], target (BBB...); " +
              std::to_string(ref.rows.size()) + "-row refutation of C_B at W = 6";
  return r;
}

// ---- 6 ------------------------------------------------------------------

Result example_b() {
  Result r;
  auto m = example_b_map();
  auto n = [](Index k) { return EdgeRef{0, k}; };
  const Point x = Point::periodic({n(0), n(0), n(2), n(1)}, {n(0)});
  std::vector<Symbol> hand;
  for (std::size_t i = 1; i <= 8; ++i) hand.push_back(hand_b(x, i));
  const Point by_hand = point_of(hand);
  const Point frozen = Point::finite({n(1), n(0), n(2), n(1)}, 0);
  r.require(by_hand == frozen, "hand computation gives " + by_hand.to_string(m.source));
  Point got = *eval_map(m, x).point;
  r.require(got == frozen, "eval gives " + got.to_string(m.source));

  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    std::vector<EdgeRef> pre, cyc;
    for (int i = std::uniform_int_distribution<int>(0, 5)(rng); i > 0; --i) pre.push_back(n(rng() % 3 ? 0 : 1 + rng() % 4));
    for (int i = std::uniform_int_distribution<int>(1, 3)(rng); i > 0; --i) cyc.push_back(n(rng() % 3 ? 0 : 1 + rng() % 4));
    Point y = rng() % 2 ? Point::periodic(pre, cyc) : Point::finite(pre, 0);
    auto img = eval_map(m, y, 10);
    for (std::size_t i = 1; i <= 10; ++i)
      r.require(img.prefix[i - 1] == hand_b(y, i), "eval disagrees with hand at " + y.to_string(m.source));
  }

  const Point zeros = Point::periodic({}, {n(0)});
  Verdict p0 = probe_continuity(m, zeros);
  r.require(p0.holds(), "probe at (000...): " + p0.to_json().dump());
  Verdict many = probe_many(m, 20, 9);
  r.require(many.holds() && many.bounds["points"] == 20, "sampled probes: " + many.to_json().dump());
  const Symbol a = Symbol::emitter_symbol(0);
  auto ref = refute_class(m, a, zeros, 6);
  require_complete_refutation(r, "C_A", m.source, ref, zeros, 6, [&](const Point& y) { return hand_b(y, 1) != a; });
  r.summary = "Φ(0 0 2 1 0 0 0 ...) = " + got.to_string(m.source) + " (hand-computed); probes hold at (000...) and 20 points; " +
              std::to_string(ref.rows.size()) + "-row refutation of C_A";
  return r;
}

// ---- 7 ------------------------------------------------------------------

Result example_d() {
  Result r;
  auto m = example_d_map();
  auto inv = example_d_inverse();
  auto e = [](Index k) { return EdgeRef{0, k}; };
  const int p = emitter_named(m.target, "P"), q = emitter_named(m.target, "Q");
  Point y1 = *eval_map(m, Point::periodic({e(0), e(0)}, {e(2)})).point;
  r.require(y1 == Point::periodic({e(-2), e(-1)}, {e(2)}), "Φ(e_0 e_0 (e_2)*) = " + y1.to_string(m.target));
  Point y2 = *eval_map(m, Point::zero(0)).point;
  r.require(y2 == Point::zero(q), "Φ(AAA...) = " + y2.to_string(m.target));
  const Point e0 = Point::periodic({}, {e(0)});
  Verdict id = inverse_identity(m, inv, 50, 12, {Point::zero(0), e0});
  r.require(id.holds() && id.witness["checked"] == 50, "inverse: " + id.to_json().dump());
  const Symbol ps = Symbol::emitter_symbol(p);
  auto ref = refute_class(m, ps, e0, 6);
  require_complete_refutation(r, "C_P", m.source, ref, e0, 6, [&](const Point& y) { return symbol_at(m, y) != ps; });
  Verdict lp = check_length_preserving(m);
  r.require(lp.fails(), "length-preserving did not fail");
  if (lp.fails()) {
    const auto& w = lp.witness["first_failure"]["witness"];
    r.require(w["class"] == "P", "witness class " + w.dump());
    r.require(symbol_at(m, dsl::parse_point(m.source, w["point"].get<std::string>())) == ps, "witness point not in C_P");
  }
  r.summary = "evals match; Φ⁻¹∘Φ = id on 50 samples to depth 12; " + std::to_string(ref.rows.size()) +
              "-row refutation of C_P; length-preserving fails at " +
              (lp.fails() ? lp.witness["first_failure"]["witness"]["point"].get<std::string>() : std::string("-"));
  return r;
}

// ---- 8 ------------------------------------------------------------------

/// One or two vertex families and up to three edge families; v0 is a single
/// vertex in every range so every family graph has loops.
std::optional<Ultragraph> random_family_graph(std::mt19937_64& rng) {
  const IndexSet doms[] = {IndexSet::at_least(0), IndexSet::all(), domains::nonzero(), IndexSet::at_least(1),
                           IndexSet::range(0, 3), IndexSet::range(-2, 2)};
  auto dom = [&] { return doms[rng() % 6]; };
  Ultragraph g;
  g.name = "G";
  const int v0 = g.add_vertex_family("v", IndexSet::point(0));
  const VertexSet all0 = VertexSet::single(v0, IndexSet::point(0));
  const bool two = rng() % 2;
  int v1 = -1;
  IndexSet d1;
  if (two) {
    d1 = dom();
    v1 = g.add_vertex_family("u", d1);
  }
  const int ne = 1 + static_cast<int>(rng() % 3);
  for (int f = 0; f < std::max(ne, two ? 2 : 1); ++f) {
    EdgeFamily e;
    e.name = std::string(1, static_cast<char>('a' + f));
    const bool from_u = two && f == 0;
    e.domain = from_u ? d1 : dom();
    e.source.push_back({e.domain, from_u ? v1 : v0, from_u ? AffineIndexMap::identity() : AffineIndexMap::constant(0)});
    const int shape = two ? static_cast<int>(rng() % 3) : 0;
    if (shape == 0) e.range.push_back({e.domain, all0, {}});
    if (shape == 1) e.range.push_back({e.domain, all0.unite(VertexSet::single(v1, d1)), {}});
    if (shape == 2) {
      e.range.push_back({e.domain.intersect(IndexSet::at_most(0)), all0, {}});
      e.range.push_back({e.domain.intersect(IndexSet::at_least(1)), all0.unite(VertexSet::single(v1, d1)), {}});
    }
    e.range.erase(std::remove_if(e.range.begin(), e.range.end(), [](const RangeCase& c) { return c.guard.is_empty(); }),
                  e.range.end());
    g.add_edge_family(e);
  }
  g.named_sets.push_back({"A", all0});
  if (!g.validate().valid()) return std::nullopt;
  return g;
}

/// Classes keyed on x_1 (kind 0) or on x_2 (kind 1), each target h[±j + c]
/// with c separating the families; zero-length points map to B.
MapPresentation random_schema_map(const ShiftSpace& src, std::mt19937_64& rng) {
  MapPresentation m{"M", src, ShiftSpace(corpus::detail::bouquet("H", "w", "B", {{"h", IndexSet::all()}})), {}};
  const auto& g = src.graph();
  const Symbol b = Symbol::emitter_symbol(0);
  MapClass cb{ClassTarget::fixed(b), IndexSet::all(), {}};
  for (std::size_t id = 0; id < src.emitters().size(); ++id)
    cb.items.push_back(schema({Atom::literal(Symbol::emitter_symbol(static_cast<int>(id)))}));
  auto target = [&](int f) {
    return ClassTarget::of_family(0, {rng() % 2 ? 1 : -1, 100 * (f + 1) + static_cast<Index>(rng() % 5)});
  };
  const bool second = rng() % 2;
  for (int f = 0; f < static_cast<int>(g.edge_families.size()); ++f) {
    const IndexSet& dom = g.edge_families[f].domain;
    MapClass c{target(f), IndexSet::all(), {}};
    c.items.push_back(second ? schema({Atom::of_family(f)}, dom, 2) : schema({Atom::of_family(f)}, dom));
    m.classes.push_back(c);
    if (second)
      for (std::size_t id = 0; id < src.emitters().size(); ++id) {
        // length-one points: x_2 is the tail
        MapClass one{ClassTarget::fixed(Symbol::of(EdgeRef{0, -1 - f})), IndexSet::all(), {}};
        one.items.push_back(schema({Atom::of_family(f), Atom::literal(Symbol::emitter_symbol(static_cast<int>(id)))}, dom));
        m.classes.push_back(one);
      }
  }
  if (!cb.items.empty()) m.classes.insert(m.classes.begin(), cb);
  return m;
}

Result continuity_on_infinite_points() {
  Result r;
  std::mt19937_64 rng(80);
  std::size_t maps = 0, probes = 0, graphs_tried = 0;
  while (maps < 30) {
    ++graphs_tried;
    auto g = random_family_graph(rng);
    if (!g) continue;
    ShiftSpace src(*g);
    if (!src.emitters_complete()) continue;
    MapPresentation m = random_schema_map(src, rng);
    Verdict part = validate_map(m);
    r.require(part.holds(), "random map is not a partition: " + part.to_json().dump());
    if (!part.holds()) continue;
    ++maps;
    SampleOptions o{3, 3, 200, 80 + maps, 2000};
    std::vector<Point> pts;
    for (const auto& x : sample_points(src, o))
      if (x.is_infinite() && pts.size() < 20) pts.push_back(x);
    r.require(pts.size() == 20, "only " + std::to_string(pts.size()) + " infinite sample points");
    for (const auto& x : pts) {
      ++probes;
      Verdict v = probe_continuity(m, x);
      r.require(v.holds(), "probe " + to_string(v.status) + " at " + x.to_string(src) + ": " + v.witness.dump());
    }
  }
  r.summary = std::to_string(maps) + " maps (" + std::to_string(graphs_tried) + " graphs drawn), " + std::to_string(probes) +
              " probes at infinite points";
  return r;
}

// ---- 9 ------------------------------------------------------------------

/// Finite graph on vertices v_0..v_{nv-1} with at most six edges, every
/// vertex emitting at least one edge.
Ultragraph random_finite_graph(std::mt19937_64& rng) {
  Ultragraph g;
  g.name = "F";
  const Index nv = 1 + static_cast<Index>(rng() % 4);
  const int v = g.add_vertex_family("v", IndexSet::range(0, nv - 1));
  const Index edges = nv + static_cast<Index>(rng() % static_cast<std::uint64_t>(7 - nv));
  const Index split = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(edges));
  for (int f = 0; f < 2; ++f) {
    const Index lo = f == 0 ? 0 : split, hi = f == 0 ? split - 1 : edges - 1;
    if (hi < lo) continue;
    EdgeFamily e;
    e.name = f == 0 ? "a" : "b";
    e.domain = IndexSet::range(lo, hi);
    for (Index k = lo; k <= hi; ++k) {
      const Index src = k < nv ? k : static_cast<Index>(rng() % static_cast<std::uint64_t>(nv));
      e.source.push_back({IndexSet::point(k), v, AffineIndexMap::constant(src)});
      std::vector<Index> r;
      for (Index u = 0; u < nv; ++u)
        if (rng() % 2) r.push_back(u);
      if (r.empty()) r.push_back(static_cast<Index>(rng() % static_cast<std::uint64_t>(nv)));
      e.range.push_back({IndexSet::point(k), VertexSet::single(v, IndexSet::points(r)), {}});
    }
    g.add_edge_family(e);
  }
  return g;
}

VertexSet mask_set(unsigned mask, Index nv) {
  std::vector<Index> ks;
  for (Index u = 0; u < nv; ++u)
    if (mask >> u & 1u) ks.push_back(u);
  return VertexSet::single(0, IndexSet::points(ks));
}

/// 𝒢⁰ by closing singletons and ranges under pairwise union and intersection.
std::set<unsigned> brute_g0(const ShiftSpace& sp, Index nv) {
  std::set<unsigned> cl;
  for (Index u = 0; u < nv; ++u) cl.insert(1u << u);
  for (const auto& e : sp.graph().all_edges().elements_within(8)) {
    unsigned m = 0;
    for (Index u = 0; u < nv; ++u)
      if (sp.range(e).contains(VertexRef{0, u})) m |= 1u << u;
    cl.insert(m);
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<unsigned> cur(cl.begin(), cl.end());
    for (unsigned a : cur)
      for (unsigned b : cur) grew = cl.insert(a | b).second || grew, grew = cl.insert(a & b).second || grew;
  }
  return cl;
}

std::vector<std::vector<EdgeRef>> all_paths(const ShiftSpace& sp, std::size_t n) {
  std::vector<std::vector<EdgeRef>> out;
  for (const auto& e : sp.graph().all_edges().elements_within(8)) out.push_back({e});
  for (std::size_t len = 1; len < n; ++len) {
    std::vector<std::vector<EdgeRef>> next;
    for (const auto& p : out)
      for (const auto& e : sp.successors(p.back()).elements_within(8)) {
        next.push_back(p);
        next.back().push_back(e);
      }
    out = std::move(next);
  }
  return out;
}

/// Every path of length <= 6, completed by its self-loop tail and its
/// greedy walk; a block of length <= 4 gets two free coordinates after it.
std::vector<Point> periodic_points(const ShiftSpace& sp) {
  std::vector<Point> out;
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& p : all_paths(sp, n))
      for (auto& x : completions(sp, p))
        if (x.is_periodic()) out.push_back(std::move(x));
  return out;
}

/// Classical test: Φ(x)_1 is a function of x_1..x_{r+1} for some r <= 3.
bool brute_continuous(const MapPresentation& m, const std::vector<Point>& pts) {
  std::vector<Symbol> img;
  for (const auto& x : pts) img.push_back(symbol_at(m, x));
  for (std::size_t r = 0; r <= 3; ++r) {
    std::map<std::vector<Symbol>, Symbol> seen;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i) {
      auto [it, fresh] = seen.emplace(pts[i].prefix(r + 1), img[i]);
      ok = fresh || it->second == img[i];
    }
    if (ok) return true;
  }
  return false;
}

/// Block map of window L (kind 0) or a d^k-counting map around a loop d
/// (kind 1), into the bouquet with edges h over Z.
std::optional<MapPresentation> random_finite_map(const ShiftSpace& src, std::mt19937_64& rng) {
  MapPresentation m{"M", src, ShiftSpace(corpus::detail::bouquet("H", "w", "B", {{"h", IndexSet::all()}})), {}};
  std::map<Index, MapClass> by_target;
  auto add = [&](Index t, ClassItem it) {
    auto [pos, fresh] = by_target.try_emplace(t, MapClass{ClassTarget::fixed(Symbol::of(EdgeRef{0, t})), IndexSet::all(), {}});
    pos->second.items.push_back(std::move(it));
  };
  const auto edges = src.graph().all_edges().elements_within(8);
  if (rng() % 2 == 0) {
    const std::size_t window = 1 + rng() % 3;
    for (const auto& p : all_paths(src, window)) add(static_cast<Index>(rng() % 3), schema(ultrashift::detail::literal_atoms(p)));
  } else {
    std::vector<EdgeRef> loops;
    for (const auto& e : edges)
      if (src.follows(e, e)) loops.push_back(e);
    if (loops.empty()) return std::nullopt;
    const EdgeRef d = loops[rng() % loops.size()];
    const Index tail = static_cast<Index>(rng() % 2);
    add(tail, PointItem{Point::periodic({}, {d}), std::nullopt});
    for (const auto& gx : edges) {
      if (gx == d) continue;
      add(static_cast<Index>(rng() % 3), schema({Atom::literal(gx)}));
      const Index after = rng() % 3 ? tail : static_cast<Index>(rng() % 3);
      add(after, schema({Atom::rep(Symbol::of(d)), Atom::literal(gx)}));
    }
  }
  for (auto& [t, c] : by_target) m.classes.push_back(std::move(c));
  return m;
}

Result finite_degeneration() {
  Result r;
  std::mt19937_64 rng(90);
  std::size_t graphs = 0, subsets = 0, maps = 0, continuous = 0;
  while (graphs < 40) {
    Ultragraph g = random_finite_graph(rng);
    if (!g.validate().valid()) continue;
    ++graphs;
    ShiftSpace sp(g);
    const Index nv = g.vertex_families[0].domain.card().value_or(0);
    r.require(sp.emitters().empty() && sp.emitters_complete(), "finite graph with an infinite emitter");
    auto cl = brute_g0(sp, static_cast<Index>(nv));
    for (unsigned mask = 0; mask < (1u << nv); ++mask) {
      ++subsets;
      G0Answer a = sp.in_g0(mask_set(mask, nv)).answer;
      r.require(a == (cl.count(mask) ? G0Answer::Yes : G0Answer::No),
                "g0 disagrees on " + g.format(mask_set(mask, nv)) + ": " + to_string(a));
    }
    auto pts = periodic_points(sp);
    if (pts.empty()) continue;
    for (int t = 0; t < 3; ++t) {
      auto m = random_finite_map(sp, rng);
      if (!m) continue;
      Verdict part = validate_map(*m);
      r.require(part.holds(), "finite map is not a partition: " + part.to_json().dump());
      if (!part.holds()) continue;
      ++maps;
      const bool brute = brute_continuous(*m, pts);
      continuous += brute;
      Verdict csc = check_csc(*m);
      r.require(csc.status == (brute ? Status::Holds : Status::Fails),
                "csc " + to_string(csc.status) + " vs brute " + (brute ? "continuous" : "discontinuous") + " on " +
                    dsl::print(g) + dsl::print(*m));
      for (std::size_t i = 0; i < pts.size(); i += std::max<std::size_t>(1, pts.size() / 2)) {
        Verdict p = probe_continuity(*m, pts[i]);
        if (brute) r.require(p.holds(), "probe " + to_string(p.status) + " at " + pts[i].to_string(sp));
      }
    }
  }
  r.summary = std::to_string(graphs) + " graphs, " + std::to_string(subsets) + " subsets against closure; " +
              std::to_string(maps) + " maps (" + std::to_string(continuous) + " continuous) against window radius <= 3";
  return r;
}

// ---- 10 -----------------------------------------------------------------

Result a_x() {
  Result r;
  auto m = example_a_map();
  const EdgeRef d{0, 0};
  auto f = [](Index j) { return EdgeRef{1, j}; };
  const Symbol e3 = Symbol::of(EdgeRef{0, 3});
  std::vector<EdgeRef> alphabet{d};
  for (Index j = 1; j <= 10; ++j) alphabet.push_back(f(j));
  // every y = g z with |preamble of z| <= 2, z ending in A or a one-edge cycle
  std::vector<std::vector<EdgeRef>> words{{}};
  for (int len = 0; len < 2; ++len) {
    auto cur = words;
    for (const auto& w : cur)
      if (static_cast<int>(w.size()) == len)
        for (const auto& a : alphabet) {
          words.push_back(w);
          words.back().push_back(a);
        }
  }
  EdgeSet hand;
  std::size_t ys = 0;
  for (const auto& g : alphabet)
    for (const auto& w : words) {
      std::vector<EdgeRef> pre{g};
      pre.insert(pre.end(), w.begin(), w.end());
      std::vector<Point> tails{Point::finite(pre, 0)};
      for (const auto& c : alphabet) tails.push_back(Point::periodic(pre, {c}));
      for (const auto& y : tails) {
        ++ys;
        if (hand_a(y) == e3) hand = hand.unite(EdgeSet::of(g));
      }
    }
  const EdgeSet frozen = EdgeSet::of(std::vector<EdgeRef>{d, f(3)});
  r.require(hand == frozen, "enumeration gives " + m.source.graph().format(hand));
  auto ax = compute_A_x(m, Point::zero(0), Point::periodic({}, {f(3)}));
  r.require(ax.finite(), "A_x reported infinite");
  r.require(ax.symbol == e3, "Φ(x)_1 = " + m.target.name(ax.symbol));
  r.require(ax.set.edges == frozen, "A_x = " + m.source.graph().format(ax.set.edges));
  r.summary = "A_x = {" + m.source.graph().format(ax.set.edges) + "} finite; enumeration over " + std::to_string(ys) +
              " points with indices <= 10 agrees";
  return r;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "minimal emitters", 10, minimal_emitters},
      {2, "cylinder decomposition", 10, cylinder_decomposition},
      {3, "shift/cylinder law", 10, shift_law},
      {4, "commutation", 10, commutation},
      {5, "example a", 10, example_a},
      {6, "example b", 10, example_b},
      {7, "example d", 10, example_d},
      {8, "continuity on infinite points of random schema maps", 60, continuity_on_infinite_points},
      {9, "finite-graph degeneration", 10, finite_degeneration},
      {10, "A_x", 10, a_x},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.budget_s);
    r.require(secs <= c.budget_s, std::string("over budget: ") + timing);
    std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.title << " - " << r.summary << " ("
              << timing << ")\n";
    for (const auto& f : r.failures) std::cout << "       " << f << "\n";
    failed += !r.pass;
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed ? 1 : 0;
}
