// The algebra 𝒢⁰: schematic intersection closure of the edge ranges,
// membership in normal form, and minimal infinite emitters.
//
// A range shape is either a concrete vertex set or a one-parameter family
//   k ∈ K  ↦  C ∪ {v_{p(k)} : p ∈ params}
// normalized so that, for every k ∈ K, every parametric vertex exists, lies
// outside C, and the parametric vertices are pairwise distinct.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/family_set.hpp"
#include "ultrashift/index_set.hpp"
#include "ultrashift/ultragraph.hpp"

namespace ultrashift {

inline constexpr std::size_t kDefaultClosureCap = 1000;

struct RangeShape {
  VertexSet constant;
  std::vector<ParamVertex> params;
  IndexSet domain;
  std::string origin;

  bool concrete() const { return params.empty(); }

  VertexSet instance(const Ultragraph& g, Index k) const {
    VertexSet out = constant;
    for (const auto& p : params) {
      VertexRef v{p.vertex_family, p.map.apply(k)};
      if (g.has_vertex(v)) out = out.unite(VertexSet::of(v));
    }
    return out;
  }

  auto key() const { return std::tie(constant, params, domain); }
};

struct G0Closure {
  std::vector<RangeShape> shapes;
  bool saturated = true;
  /// False when some intersection fell outside the one-parameter class.
  bool exact = true;

  std::vector<VertexSet> concrete_sets() const {
    std::vector<VertexSet> out;
    for (const auto& s : shapes)
      if (s.concrete()) out.push_back(s.constant);
    return out;
  }
};

namespace detail {

inline constexpr std::uint64_t kExpandLimit = 4096;

inline std::string param_text(const Ultragraph& g, const std::vector<ParamVertex>& ps, const std::string& var) {
  std::string s;
  for (const auto& p : ps) {
    if (!s.empty()) s += ", ";
    s += g.vertex_families[p.vertex_family].name + "[" + p.map.to_string(var) + "]";
  }
  return s;
}

/// Splits a shape along the membership of each parametric vertex in `target`:
/// each piece has, for every param, p(k) ∈ target for all k or for none.
/// Pieces are returned with the list of params that land inside target.
inline std::vector<std::pair<RangeShape, std::vector<ParamVertex>>> split_by_membership(const RangeShape& s,
                                                                                         const VertexSet& target) {
  std::vector<std::pair<RangeShape, std::vector<ParamVertex>>> out;
  std::vector<std::pair<IndexSet, std::vector<ParamVertex>>> regions{{s.domain, {}}};
  for (const auto& p : s.params) {
    IndexSet in = p.map.preimage(target.at(p.vertex_family));
    std::vector<std::pair<IndexSet, std::vector<ParamVertex>>> next;
    for (auto& [dom, ins] : regions) {
      IndexSet a = dom.intersect(in), b = dom.minus(in);
      if (!a.is_empty()) {
        auto v = ins;
        v.push_back(p);
        next.push_back({a, std::move(v)});
      }
      if (!b.is_empty()) next.push_back({b, ins});
    }
    regions = std::move(next);
  }
  for (auto& [dom, ins] : regions) {
    RangeShape piece = s;
    piece.domain = dom;
    out.push_back({std::move(piece), std::move(ins)});
  }
  return out;
}

}  // namespace detail

/// Brings a shape into normal form; may split it into several shapes.
inline std::vector<RangeShape> normalize_shape(const Ultragraph& g, RangeShape s) {
  std::vector<RangeShape> out;
  std::vector<RangeShape> stack{std::move(s)};
  auto emit_concrete = [&](VertexSet c, const std::string& origin) {
    if (c.is_empty()) return;
    RangeShape r;
    r.constant = std::move(c);
    r.origin = origin;
    out.push_back(std::move(r));
  };
  while (!stack.empty()) {
    RangeShape cur = std::move(stack.back());
    stack.pop_back();
    cur.constant = cur.constant.intersect(g.all_vertices());
    if (cur.params.empty()) {
      emit_concrete(cur.constant, cur.origin);
      continue;
    }
    if (cur.domain.is_empty()) continue;

    std::vector<ParamVertex> ps;
    for (const auto& p : cur.params) {
      if (p.map.scale == 0) {
        VertexRef v{p.vertex_family, p.map.offset};
        if (g.has_vertex(v)) cur.constant = cur.constant.unite(VertexSet::of(v));
      } else {
        ps.push_back(p);
      }
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    cur.params = ps;
    // a param must name an existing vertex outside C
    for (const auto& p : ps) {
      IndexSet live = p.map.preimage(g.vertex_families[p.vertex_family].domain.minus(cur.constant.at(p.vertex_family)));
      if (!cur.domain.subset_of(live)) {
        RangeShape a = cur, b = cur;
        a.domain = cur.domain.intersect(live);
        b.domain = cur.domain.minus(live);
        std::erase(b.params, p);
        if (!a.domain.is_empty()) stack.push_back(std::move(a));
        if (!b.domain.is_empty()) stack.push_back(std::move(b));
        goto next_shape;
      }
    }
    // isolated coincidences between params of opposite scale
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const auto& p = ps[i];
        const auto& q = ps[j];
        if (p.vertex_family != q.vertex_family || p.map.scale == q.map.scale) continue;
        Index diff = q.map.offset - p.map.offset;  // 2·s_p·k = diff
        if (diff % 2 != 0) continue;
        Index k = diff / (2 * p.map.scale);
        if (!cur.domain.contains(k)) continue;
        emit_concrete(cur.instance(g, k), cur.origin + " at k=" + std::to_string(k));
        cur.domain = cur.domain.minus(IndexSet::point(k));
        stack.push_back(std::move(cur));
        goto next_shape;
      }
    if (auto n = cur.domain.card(); n && *n <= detail::kExpandLimit) {
      for (const auto& iv : cur.domain.intervals())
        for (Index k = iv.lo; k <= iv.hi; ++k) emit_concrete(cur.instance(g, k), cur.origin + " at k=" + std::to_string(k));
      continue;
    }
    out.push_back(std::move(cur));
  next_shape:;
  }
  return out;
}

struct IntersectionResult {
  std::vector<RangeShape> shapes;
  bool exact = true;
};

/// All pairwise instance intersections S1(j) ∩ S2(k), as normalized shapes.
inline IntersectionResult intersect_shapes(const Ultragraph& g, const RangeShape& s1, const RangeShape& s2) {
  IntersectionResult res;
  std::string origin = "(" + s1.origin + ") ∩ (" + s2.origin + ")";
  if (origin.size() > 240) origin = origin.substr(0, 237) + "...";
  auto push = [&](RangeShape r) {
    r.origin = origin;
    for (auto& n : normalize_shape(g, std::move(r))) res.shapes.push_back(std::move(n));
  };
  VertexSet base = s1.constant.intersect(s2.constant);

  if (s1.concrete() && s2.concrete()) {
    push(RangeShape{base, {}, {}, {}});
    return res;
  }
  if (s1.concrete() || s2.concrete()) {
    const RangeShape& p = s1.concrete() ? s2 : s1;
    const RangeShape& c = s1.concrete() ? s1 : s2;
    for (auto& [piece, ins] : detail::split_by_membership(p, c.constant)) push(RangeShape{base, ins, piece.domain, {}});
    return res;
  }

  for (auto& [r1, pin] : detail::split_by_membership(s1, s2.constant)) {
    for (auto& [r2, qin] : detail::split_by_membership(s2, s1.constant)) {
      std::vector<ParamVertex> pout, qout;
      for (const auto& p : s1.params)
        if (std::find(pin.begin(), pin.end(), p) == pin.end()) pout.push_back(p);
      for (const auto& q : s2.params)
        if (std::find(qin.begin(), qin.end(), q) == qin.end()) qout.push_back(q);

      // coincidence curves k = h(j), grouped by h
      std::map<AffineIndexMap, std::vector<ParamVertex>> curves;
      for (const auto& p : pout)
        for (const auto& q : qout)
          if (p.vertex_family == q.vertex_family) curves[q.map.inverse().compose(p.map)].push_back(p);

      auto on_curve = [&](Index j, Index k) {
        for (const auto& [h, _] : curves)
          if (h.apply(j) == k) return true;
        return false;
      };
      bool generic_exists = !r1.domain.is_finite() || !r2.domain.is_finite();
      if (!generic_exists) {
        for (Index j : r1.domain.closest_to_zero(64)) {
          for (Index k : r2.domain.closest_to_zero(64))
            if (!on_curve(j, k)) { generic_exists = true; break; }
          if (generic_exists) break;
        }
      }
      if (generic_exists) {
        if (!pin.empty() && !qin.empty()) {
          // two independent parameters: keep the common core only
          res.exact = false;
          push(RangeShape{base, {}, {}, {}});
        } else if (!pin.empty()) {
          push(RangeShape{base, pin, r1.domain, {}});
        } else if (!qin.empty()) {
          push(RangeShape{base, qin, r2.domain, {}});
        } else {
          push(RangeShape{base, {}, {}, {}});
        }
      }

      for (const auto& [h, coinciding] : curves) {
        IndexSet dom = r1.domain.intersect(h.preimage(r2.domain));
        // points where a second curve crosses this one are computed directly
        for (const auto& [h2, _] : curves) {
          if (h2 == h || h2.scale == h.scale) continue;
          Index diff = h2.offset - h.offset;  // h.scale·j + h.off = -h.scale·j + h2.off
          if (diff % 2 != 0) continue;
          Index j = diff / (2 * h.scale);
          if (!dom.contains(j)) continue;
          dom = dom.minus(IndexSet::point(j));
          VertexSet inst = s1.instance(g, j).intersect(s2.instance(g, h.apply(j)));
          push(RangeShape{inst, {}, {}, {}});
        }
        if (dom.is_empty()) continue;
        std::vector<ParamVertex> ps = pin;
        for (const auto& q : qin) ps.push_back({q.vertex_family, q.map.compose(h)});
        for (const auto& p : coinciding) ps.push_back(p);
        push(RangeShape{base, ps, dom, {}});
      }
    }
  }
  return res;
}

inline G0Closure range_intersection_closure(const Ultragraph& g, std::size_t cap = kDefaultClosureCap) {
  if (cap < 1) throw Error(ErrorKind::Precondition, "closure cap must be at least 1");
  G0Closure cl;
  std::set<std::tuple<VertexSet, std::vector<ParamVertex>, IndexSet>> seen;
  auto add = [&](RangeShape s) {
    if (s.concrete()) s.domain = IndexSet{};
    auto k = std::make_tuple(s.constant, s.params, s.domain);
    if (seen.count(k)) return;
    seen.insert(k);
    cl.shapes.push_back(std::move(s));
  };
  for (std::size_t f = 0; f < g.edge_families.size(); ++f) {
    const auto& ef = g.edge_families[f];
    for (const auto& c : ef.range) {
      IndexSet dom = c.guard.intersect(ef.domain);
      if (dom.is_empty()) continue;
      RangeShape s{c.constant, c.parametric, dom, {}};
      if (c.parametric.empty()) {
        s.origin = "r(" + ef.name + (ef.domain.card() == std::optional<std::uint64_t>(1) ? "" : "[k]") +
                   "), k in " + dom.to_string();
      } else {
        s.origin = "r(" + ef.name + "[k]) = " + g.format(c.constant) + (c.constant.is_empty() ? "" : " + ") +
                   detail::param_text(g, c.parametric, "k") + ", k in " + dom.to_string();
      }
      for (auto& n : normalize_shape(g, std::move(s))) add(std::move(n));
    }
  }
  for (std::size_t i = 0; i < cl.shapes.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      auto r = intersect_shapes(g, cl.shapes[i], cl.shapes[j]);
      if (!r.exact) cl.exact = false;
      for (auto& s : r.shapes) add(std::move(s));
      if (cl.shapes.size() > cap) {
        cl.saturated = false;
        return cl;
      }
    }
  }
  // unexpanded finite parameter domains hide instances from the analysis
  for (const auto& s : cl.shapes)
    if (!s.concrete() && s.domain.is_finite()) cl.exact = false;
  return cl;
}

enum class G0Answer { Yes, No, Unknown };

inline std::string to_string(G0Answer a) {
  switch (a) {
    case G0Answer::Yes: return "yes";
    case G0Answer::No: return "no";
    case G0Answer::Unknown: return "unknown";
  }
  return "?";
}

struct G0Membership {
  G0Answer answer = G0Answer::Unknown;
  std::string witness;
};

/// Decides A ∈ 𝒢⁰ via the normal form "finite union of finite intersections
/// of ranges, plus a finite vertex set".
inline G0Membership is_in_g0(const Ultragraph& g, const VertexSet& a, std::size_t cap = kDefaultClosureCap) {
  g.check(a);
  if (a.is_empty()) {
    auto n = g.all_vertices().card();
    if (n.infinite || n.count >= 2) return {G0Answer::Yes, "intersection of two distinct singletons"};
    return {G0Answer::No, "fewer than two vertices, no empty intersection"};
  }
  if (a.is_finite()) return {G0Answer::Yes, "finite union of singletons " + g.format(a)};

  G0Closure cl = range_intersection_closure(g, cap);
  VertexSet covered;
  std::vector<std::string> used;
  for (const auto& s : cl.shapes) {
    if (!s.constant.subset_of(a)) continue;
    if (s.concrete()) {
      if (s.constant.is_finite()) continue;
      covered = covered.unite(s.constant);
      used.push_back(s.origin);
      continue;
    }
    IndexSet ok = s.domain;
    for (const auto& p : s.params) ok = ok.intersect(p.map.preimage(a.at(p.vertex_family)));
    if (ok.is_empty()) continue;
    Index k = ok.closest_to_zero(1).front();
    VertexSet inst = s.instance(g, k);
    if (inst.is_finite()) continue;
    covered = covered.unite(inst);
    used.push_back(s.origin + " [k=" + std::to_string(k) + "]");
  }
  VertexSet rest = a.minus(covered);
  if (rest.is_finite()) {
    std::string w = "union of:";
    for (const auto& u : used) w += " {" + u + "}";
    if (!rest.is_empty()) w += " plus finite set " + g.format(rest);
    return {G0Answer::Yes, w};
  }
  if (cl.saturated && cl.exact)
    return {G0Answer::No, "infinite remainder " + g.format(rest) + " not covered by any range intersection inside A"};
  return {G0Answer::Unknown, std::string("closure ") + (cl.saturated ? "inexact" : "not saturated") +
                                 "; uncovered remainder " + g.format(rest)};
}

struct MinimalEmitter {
  VertexSet set;
  std::string certificate;
  friend bool operator==(const MinimalEmitter& a, const MinimalEmitter& b) { return a.set == b.set; }
};

struct EmitterInventory {
  std::vector<MinimalEmitter> emitters;
  bool complete = true;
};

inline EmitterInventory minimal_infinite_emitters(const Ultragraph& g, std::size_t cap = kDefaultClosureCap) {
  G0Closure cl = range_intersection_closure(g, cap);
  std::vector<MinimalEmitter> cand;
  auto add = [&](VertexSet s, std::string cert) {
    for (const auto& c : cand)
      if (c.set == s) return;
    cand.push_back({std::move(s), std::move(cert)});
  };
  VertexSet singles = g.infinite_emitter_vertices();
  for (const auto& v : singles.closest_to_zero(static_cast<std::size_t>(singles.card().count)))
    add(VertexSet::of(v), "vertex " + g.vertex_name(v) + " emits infinitely many edges");
  for (const auto& s : cl.shapes) {
    if (!s.concrete()) continue;
    if (g.emitted_edges(s.constant).card().infinite) add(s.constant, "range intersection " + s.origin);
  }
  EmitterInventory inv;
  for (const auto& m : cand) {
    bool minimal = true;
    for (const auto& o : cand)
      if (o.set != m.set && o.set.subset_of(m.set)) { minimal = false; break; }
    if (minimal) inv.emitters.push_back(m);
  }
  std::sort(inv.emitters.begin(), inv.emitters.end(),
            [](const MinimalEmitter& a, const MinimalEmitter& b) { return a.set < b.set; });
  inv.complete = cl.saturated && cl.exact;
  return inv;
}

}  // namespace ultrashift
