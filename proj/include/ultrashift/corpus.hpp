// Built-in fixtures a, b, c and d: their maps and the verdicts each check is
// expected to produce.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ultrashift/checks.hpp"
#include "ultrashift/corpus_maps.hpp"
#include "ultrashift/definable.hpp"

namespace ultrashift::corpus {

struct FixtureBounds {
  std::size_t samples = 100;
  std::size_t depth = 16;
  std::size_t max_window = 6;
  std::size_t inverse_samples = 50;
  std::size_t inverse_depth = 12;
  std::size_t random_probes = 20;
};

struct FixtureCheck {
  std::string name;
  Status expected;
  std::string reason;
  std::function<Verdict()> run;
};

struct Fixture {
  std::string name;
  std::vector<MapPresentation> maps;
  std::vector<FixtureCheck> checks;
};

struct FixtureRow {
  std::string check;
  Status expected;
  Verdict actual;
  bool matched() const { return actual.status == expected; }
};

struct FixtureReport {
  std::string name;
  std::vector<FixtureRow> rows;

  bool all_matched() const {
    for (const auto& r : rows)
      if (!r.matched()) return false;
    return true;
  }
  json to_json() const {
    json rs = json::array();
    for (const auto& r : rows)
      rs.push_back({{"check", r.check}, {"expected", to_string(r.expected)}, {"matched", r.matched()},
                    {"verdict", r.actual.to_json()}});
    return {{"fixture", name}, {"all_matched", all_matched()}, {"rows", rs}};
  }
};

/// Membership in the class of `s`.
inline SetOracle class_oracle(const MapPresentation& m, const Symbol& s) {
  return {"C_" + symbol_text(m.target, s), [m, s](const Point& x) { return symbol_at(m, x) == s; }};
}

/// Commutation on `n` sampled points at the given depth.
inline Verdict commute_on_samples(const MapPresentation& m, std::size_t n, std::size_t depth, std::uint64_t seed = 11) {
  SampleOptions o;
  o.random = n;
  o.seed = seed;
  auto pts = sample_points(m.source, o);
  if (pts.size() > n) {
    // keep every zero-length point and spread the rest
    std::vector<Point> keep, rest;
    for (auto& p : pts) (p.is_zero_length() ? keep : rest).push_back(std::move(p));
    const std::size_t want = n > keep.size() ? n - keep.size() : 0;
    for (std::size_t i = 0; i < want && i < rest.size(); ++i) keep.push_back(rest[i * rest.size() / want]);
    pts = std::move(keep);
  }
  return check_commuting(m.source, m.target, as_point_map(m), pts, depth);
}

inline Verdict eval_equals(const MapPresentation& m, const Point& x, const Point& expected) {
  Verdict v = Verdict::make("eval", Status::Holds);
  v.exact = true;
  Point y = *eval_map(m, x).point;
  v.witness = {{"point", x.to_string(m.source)}, {"image", y.to_string(m.target)},
               {"expected", expected.to_string(m.target)}};
  if (y != expected) v.status = Status::Fails;
  return v;
}

inline Verdict refute(const MapPresentation& m, const Symbol& cls, const Point& x, std::size_t w) {
  RefuteBounds rb;
  rb.max_window = w;
  auto r = refute_finitely_defined(m.source, class_oracle(m, cls), x, rb);
  Verdict v = refutation_verdict(m.source, r, rb);
  v.witness["set"] = "C_" + symbol_text(m.target, cls);
  v.witness["point"] = x.to_string(m.source);
  return v;
}

/// ψ(φ(x)) = x to `depth` on sampled x.
inline Verdict inverse_identity(const MapPresentation& phi, const MapPresentation& psi, std::size_t n, std::size_t depth,
                                const std::vector<Point>& extra) {
  Verdict v = Verdict::make("inverse", Status::Holds);
  v.bounds = {{"samples", n}, {"depth", depth}};
  SampleOptions o;
  o.random = n;
  o.seed = 5;
  std::vector<Point> pts = extra;
  for (const auto& p : sample_points(phi.source, o)) {
    if (pts.size() >= n) break;
    if (p.exact()) pts.push_back(p);
  }
  for (const auto& x : pts) {
    Point y = apply_map(phi, x);
    Point z = apply_map(psi, y);
    if (!agree(x, z, depth)) {
      v.status = Status::Fails;
      v.witness = {{"point", x.to_string(phi.source)}, {"image", y.to_string(phi.target)},
                   {"back", z.to_string(psi.target)}};
      return v;
    }
  }
  v.witness = {{"checked", pts.size()}};
  return v;
}

inline Verdict probe_many(const MapPresentation& m, std::size_t count, std::uint64_t seed) {
  Verdict v = Verdict::make("continuity-probe-sampled", Status::Holds);
  SampleOptions o{3, 3, 200, seed, 2000};
  std::vector<Point> pts;
  for (const auto& p : sample_points(m.source, o))
    if (p.is_periodic() && pts.size() < count) pts.push_back(p);
  json done = json::array();
  for (const auto& x : pts) {
    Verdict p = probe_continuity(m, x);
    done.push_back(x.to_string(m.source));
    if (p.status != Status::Holds) {
      p.check = v.check;
      return p;
    }
  }
  v.bounds = {{"points", pts.size()}};
  v.witness = {{"points", done}};
  return v;
}

inline Fixture fixture_a(const FixtureBounds& fb = {}) {
  auto m = example_a_map();
  const Point ddd = Point::periodic({}, {EdgeRef{0, 0}});
  const Point a = Point::zero(0);
  const Symbol b = Symbol::emitter_symbol(emitter_named(m.target, "B"));
  Fixture f{"a", {m}, {}};
  f.checks = {
      {"map-partition", Status::Holds, "the classes partition X_G", [=] { return validate_map(m); }},
      {"commute", Status::Holds, "partition-presented maps commute with the shift",
       [=] { return commute_on_samples(m, fb.samples, fb.depth); }},
      {"continuity-probe at (ddd...)", Status::Fails, "every neighbourhood of (ddd...) meets C_{e_1}",
       [=] { return probe_continuity(m, ddd); }},
      {"refute-fd C_B", Status::Fails, "C_B is not finitely defined", [=] { return refute(m, b, ddd, fb.max_window); }},
      {"csc-ii at (A) F={}", Status::Holds, "all first extensions map into D_B",
       [=] { return check_csc_item_ii(m, a); }},
      {"csc-ii at (A) F={e_1}", Status::Holds, "F' = {d, f_1} excludes every preimage of e_1 starts",
       [=] { return check_csc_item_ii(m, a, EdgeSet::of(EdgeRef{0, 1})); }},
      {"A_x at (A), x = (f_3 ...)", Status::Holds, "A_x = {f_3, d}",
       [=] { return check_A_x(m, a, Point::periodic({}, {EdgeRef{1, 3}})); }},
      {"period at (ddd...)", Status::Holds, "Φ(ddd...) = (BBB...)",
       [=] { return check_period_preservation(m, ddd); }},
      {"csc", Status::Fails, "the map is not continuous", [=] { return check_csc(m); }},
  };
  return f;
}

inline Fixture fixture_b(const FixtureBounds& fb = {}) {
  auto m = example_b_map();
  auto n = [](Index k) { return EdgeRef{0, k}; };
  const Point zeros = Point::periodic({}, {n(0)});
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.target, "A"));
  Fixture f{"b", {m}, {}};
  f.checks = {
      {"map-partition", Status::Holds, "the rule defines a partition", [=] { return validate_map(m); }},
      {"commute", Status::Holds, "the rule is coordinate-wise in σ^{n-1}(x)",
       [=] { return commute_on_samples(m, fb.samples, fb.depth); }},
      {"eval (0 0 2 1 0 0 0 ...)", Status::Holds, "image (1 0 2 1 | A): the trailing zeros map to A",
       [=] {
         return eval_equals(m, Point::periodic({n(0), n(0), n(2), n(1)}, {n(0)}),
                            Point::finite({n(1), n(0), n(2), n(1)}, 0));
       }},
      {"eval (0 0 2 1 | A)", Status::Holds, "image (1 0 2 1 | A)",
       [=] { return eval_equals(m, Point::finite({n(0), n(0), n(2), n(1)}, 0), Point::finite({n(1), n(0), n(2), n(1)}, 0)); }},
      {"continuity-probe at (000...)", Status::Holds, "images escape every finite F",
       [=] { return probe_continuity(m, zeros); }},
      {"continuity-probe at sampled points", Status::Holds, "the map is continuous",
       [=] { return probe_many(m, fb.random_probes, 9); }},
      {"refute-fd C_A", Status::Fails, "C_A is not finitely defined", [=] { return refute(m, a, zeros, fb.max_window); }},
      {"length-preserving", Status::Fails, "(000...) is infinite but lies in C_A",
       [=] { return check_length_preserving(m); }},
  };
  return f;
}

inline Fixture fixture_c(const FixtureBounds& fb = {}) {
  auto c1 = example_c1_map();
  auto c2 = example_c2_map();
  c1.name = "Phi1";
  c2.name = "Phi2";
  Fixture f{"c", {c1, c2}, {}};
  f.checks = {
      {"c1 map-partition", Status::Holds, "classes partition X_G", [=] { return validate_map(c1); }},
      {"c1 commute", Status::Holds, "partition-presented", [=] { return commute_on_samples(c1, fb.samples, fb.depth); }},
      {"c1 csc", Status::Holds, "Φ(AAA...) = (BBB...) and every edge class is a finite union of cylinders",
       [=] { return check_csc(c1); }},
      {"c1 genchl", Status::Holds, "same conditions in the finitely defined form", [=] { return check_genchl(c1); }},
      {"c2 map-partition", Status::Holds, "classes partition X_G", [=] { return validate_map(c2); }},
      {"c2 csc-iii M=2", Status::Fails, "σ(D_{A,F}) meets C_{e_2} for every finite F",
       [=] { return check_csc_item_iii(c2, 0, 2); }},
      {"c2 continuity-probe at (A)", Status::Fails, "(g_n f_1 f_1 ...) → (A) with images (e_1 e_2 e_2 ...)",
       [=] { return probe_continuity(c2, Point::zero(0)); }},
      {"c2 csc", Status::Fails, "condition iii is violated", [=] { return check_csc(c2); }},
  };
  return f;
}

inline Fixture fixture_d(const FixtureBounds& fb = {}) {
  auto m = example_d_map();
  auto inv = example_d_inverse();
  auto e = [](Index k) { return EdgeRef{0, k}; };
  const Point e0 = Point::periodic({}, {e(0)});
  const Symbol p = Symbol::emitter_symbol(emitter_named(m.target, "P"));
  const int q = emitter_named(m.target, "Q");
  Fixture f{"d", {m, inv}, {}};
  f.checks = {
      {"map-partition", Status::Holds, "the rule defines a partition", [=] { return validate_map(m); }},
      {"commute", Status::Holds, "the rule is coordinate-wise in σ^{n-1}(x)",
       [=] { return commute_on_samples(m, fb.samples, fb.depth); }},
      {"eval (e_0 e_0 (e_2)*)", Status::Holds, "image (f_-2 f_-1 (f_2)*)",
       [=] { return eval_equals(m, Point::periodic({e(0), e(0)}, {e(2)}), Point::periodic({e(-2), e(-1)}, {e(2)})); }},
      {"eval (AAA...)", Status::Holds, "image (QQQ...)", [=] { return eval_equals(m, Point::zero(0), Point::zero(q)); }},
      {"inverse", Status::Holds, "Φ⁻¹∘Φ = id",
       [=] { return inverse_identity(m, inv, fb.inverse_samples, fb.inverse_depth, {Point::zero(0), e0}); }},
      {"inverse map-partition", Status::Holds, "Φ⁻¹ is a generalized sliding block code",
       [=] { return validate_map(inv); }},
      {"inverse commute", Status::Holds, "partition-presented",
       [=] { return commute_on_samples(inv, fb.samples, fb.depth); }},
      {"refute-fd C_P", Status::Fails, "C_P = {(e_0 e_0 ...)} is not finitely defined",
       [=] { return refute(m, p, e0, fb.max_window); }},
      {"length-preserving", Status::Fails, "(e_0 e_0 ...) is infinite but lies in C_P",
       [=] { return check_length_preserving(m); }},
      {"csc-iii", Status::NotApplicable, "Φ(AAA...) = (QQQ...) has length zero",
       [=] { return check_csc_item_iii(m, 0, 3); }},
      {"period at (e_2)*", Status::Holds, "Φ(e_2 e_2 ...) = (f_2 f_2 ...)",
       [=] { return check_period_preservation(m, Point::periodic({}, {e(2)})); }},
      {"continuity-probe at (e_0 e_0 ...)", Status::Holds, "the map is continuous",
       [=] { return probe_continuity(m, e0); }},
  };
  return f;
}

inline Fixture build_fixture(const std::string& name, const FixtureBounds& fb = {}) {
  if (name == "a") return fixture_a(fb);
  if (name == "b") return fixture_b(fb);
  if (name == "c") return fixture_c(fb);
  if (name == "d") return fixture_d(fb);
  throw Error(ErrorKind::Precondition, "unknown fixture '" + name + "' (expected a, b, c or d)");
}

inline FixtureReport run_fixture(const Fixture& f) {
  FixtureReport r{f.name, {}};
  for (const auto& c : f.checks) {
    Verdict v;
    try {
      v = c.run();
    } catch (const Error& e) {
      v = Verdict::make(c.name, Status::Unknown);
      v.notes.push_back(e.what());
    }
    v.notes.push_back("expected " + to_string(c.expected) + ": " + c.reason);
    r.rows.push_back({c.name, c.expected, v});
  }
  return r;
}

inline FixtureReport run_fixture(const std::string& name, const FixtureBounds& fb = {}) {
  return run_fixture(build_fixture(name, fb));
}

}  // namespace ultrashift::corpus
