// Ultragraphs over indexed vertex and edge families. Sources are piecewise
// affine, ranges are piecewise "constant set plus affine singletons".
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/family_set.hpp"
#include "ultrashift/index_set.hpp"

namespace ultrashift {

/// Index domains used by the fixtures.
namespace domains {
inline IndexSet naturals() { return IndexSet::at_least(0); }
inline IndexSet integers() { return IndexSet::all(); }
inline IndexSet nonzero() { return IndexSet::at_most(-1).unite(IndexSet::at_least(1)); }
}  // namespace domains

struct VertexFamily {
  std::string name;
  IndexSet domain;
  friend bool operator==(const VertexFamily&, const VertexFamily&) = default;
};

struct SourceCase {
  IndexSet guard;
  int vertex_family = 0;
  AffineIndexMap map;
  friend bool operator==(const SourceCase&, const SourceCase&) = default;
};

/// The singleton {v_{map(k)}} of a parametric range.
struct ParamVertex {
  int vertex_family = 0;
  AffineIndexMap map;
  friend bool operator==(const ParamVertex&, const ParamVertex&) = default;
  friend auto operator<=>(const ParamVertex&, const ParamVertex&) = default;
};

struct RangeCase {
  IndexSet guard;
  VertexSet constant;
  std::vector<ParamVertex> parametric;
  friend bool operator==(const RangeCase&, const RangeCase&) = default;
};

struct EdgeFamily {
  std::string name;
  IndexSet domain;
  std::vector<SourceCase> source;
  std::vector<RangeCase> range;
  friend bool operator==(const EdgeFamily&, const EdgeFamily&) = default;
};

struct ValidationReport {
  VertexSet sinks;
  EdgeSet empty_ranges;
  EdgeSet missing_source;
  std::vector<std::string> issues;
  bool valid() const {
    return sinks.is_empty() && empty_ranges.is_empty() && missing_source.is_empty() && issues.empty();
  }
};

class Ultragraph {
 public:
  std::string name;
  std::vector<VertexFamily> vertex_families;
  std::vector<EdgeFamily> edge_families;
  /// Named vertex sets (used as emitter names in literals).
  std::vector<std::pair<std::string, VertexSet>> named_sets;

  friend bool operator==(const Ultragraph&, const Ultragraph&) = default;

  int add_vertex_family(std::string fam_name, IndexSet domain) {
    vertex_families.push_back({std::move(fam_name), std::move(domain)});
    return static_cast<int>(vertex_families.size()) - 1;
  }
  int add_edge_family(EdgeFamily f) {
    edge_families.push_back(std::move(f));
    return static_cast<int>(edge_families.size()) - 1;
  }

  std::optional<int> vertex_family(const std::string& n) const {
    for (std::size_t i = 0; i < vertex_families.size(); ++i)
      if (vertex_families[i].name == n) return static_cast<int>(i);
    return std::nullopt;
  }
  std::optional<int> edge_family(const std::string& n) const {
    for (std::size_t i = 0; i < edge_families.size(); ++i)
      if (edge_families[i].name == n) return static_cast<int>(i);
    return std::nullopt;
  }
  std::optional<VertexSet> named_set(const std::string& n) const {
    for (const auto& [k, v] : named_sets)
      if (k == n) return v;
    return std::nullopt;
  }

  VertexSet all_vertices() const {
    VertexSet s;
    for (std::size_t i = 0; i < vertex_families.size(); ++i) s.set(static_cast<int>(i), vertex_families[i].domain);
    return s;
  }
  EdgeSet all_edges() const {
    EdgeSet s;
    for (std::size_t i = 0; i < edge_families.size(); ++i) s.set(static_cast<int>(i), edge_families[i].domain);
    return s;
  }

  bool has_edge(const EdgeRef& e) const {
    return e.family >= 0 && e.family < static_cast<int>(edge_families.size()) &&
           edge_families[e.family].domain.contains(e.index);
  }
  bool has_vertex(const VertexRef& v) const {
    return v.family >= 0 && v.family < static_cast<int>(vertex_families.size()) &&
           vertex_families[v.family].domain.contains(v.index);
  }

  /// Throws FamilyMismatch unless every element of `s` belongs to this graph.
  void check(const VertexSet& s) const {
    if (!s.subset_of(all_vertices())) throw Error(ErrorKind::FamilyMismatch, "vertex set not over this graph's families");
  }
  void check(const EdgeSet& s) const {
    if (!s.subset_of(all_edges())) throw Error(ErrorKind::FamilyMismatch, "edge set not over this graph's families");
  }

  std::optional<VertexRef> source(const EdgeRef& e) const {
    if (!has_edge(e)) return std::nullopt;
    for (const auto& c : edge_families[e.family].source)
      if (c.guard.contains(e.index)) {
        VertexRef v{c.vertex_family, c.map.apply(e.index)};
        if (has_vertex(v)) return v;
        return std::nullopt;
      }
    return std::nullopt;
  }

  VertexSet range(const EdgeRef& e) const {
    if (!has_edge(e)) throw Error(ErrorKind::FamilyMismatch, "edge not in graph");
    for (const auto& c : edge_families[e.family].range)
      if (c.guard.contains(e.index)) return instantiate(c, e.index);
    return {};
  }

  VertexSet instantiate(const RangeCase& c, Index k) const {
    VertexSet out = c.constant.intersect(all_vertices());
    for (const auto& p : c.parametric) {
      VertexRef v{p.vertex_family, p.map.apply(k)};
      if (has_vertex(v)) out = out.unite(VertexSet::of(v));
    }
    return out;
  }

  /// ε(A): edges whose source lies in A.
  EdgeSet emitted_edges(const VertexSet& a) const {
    EdgeSet out;
    for (std::size_t f = 0; f < edge_families.size(); ++f) {
      IndexSet acc;
      for (const auto& c : edge_families[f].source) {
        IndexSet ks = c.guard.intersect(edge_families[f].domain).intersect(c.map.preimage(a.at(c.vertex_family)));
        acc = acc.unite(ks);
      }
      out.set(static_cast<int>(f), acc);
    }
    return out;
  }

  /// Vertices emitting infinitely many edges (only constant source maps can
  /// produce them).
  VertexSet infinite_emitter_vertices() const {
    VertexSet out;
    for (const auto& ef : edge_families)
      for (const auto& c : ef.source)
        if (c.map.scale == 0) {
          VertexRef v{c.vertex_family, c.map.offset};
          if (has_vertex(v) && !c.guard.intersect(ef.domain).is_finite()) out = out.unite(VertexSet::of(v));
        }
    return out;
  }

  ValidationReport validate() const {
    ValidationReport rep;
    VertexSet covered;
    for (std::size_t f = 0; f < edge_families.size(); ++f) {
      const auto& ef = edge_families[f];
      IndexSet src_seen, rng_seen;
      for (const auto& c : ef.source) {
        if (c.vertex_family < 0 || c.vertex_family >= static_cast<int>(vertex_families.size())) {
          rep.issues.push_back("edge family " + ef.name + ": source refers to unknown vertex family");
          continue;
        }
        IndexSet g = c.guard.intersect(ef.domain);
        if (g.intersects(src_seen)) rep.issues.push_back("edge family " + ef.name + ": overlapping source guards");
        src_seen = src_seen.unite(g);
        IndexSet dom = vertex_families[c.vertex_family].domain;
        // indices whose source falls outside the vertex domain
        IndexSet bad = g.minus(c.map.preimage(dom));
        if (!bad.is_empty()) rep.missing_source = rep.missing_source.unite(EdgeSet::single(static_cast<int>(f), bad));
        covered = covered.unite(VertexSet::single(c.vertex_family, c.map.image(g.minus(bad)).intersect(dom)));
      }
      IndexSet no_src = ef.domain.minus(src_seen);
      if (!no_src.is_empty()) rep.missing_source = rep.missing_source.unite(EdgeSet::single(static_cast<int>(f), no_src));

      for (const auto& c : ef.range) {
        IndexSet g = c.guard.intersect(ef.domain);
        if (g.intersects(rng_seen)) rep.issues.push_back("edge family " + ef.name + ": overlapping range guards");
        rng_seen = rng_seen.unite(g);
        if (!c.constant.intersect(all_vertices()).is_empty()) continue;
        IndexSet nonempty;
        for (const auto& p : c.parametric) {
          if (p.vertex_family < 0 || p.vertex_family >= static_cast<int>(vertex_families.size())) continue;
          nonempty = nonempty.unite(p.map.preimage(vertex_families[p.vertex_family].domain));
        }
        IndexSet empty = g.minus(nonempty);
        if (!empty.is_empty()) rep.empty_ranges = rep.empty_ranges.unite(EdgeSet::single(static_cast<int>(f), empty));
      }
      IndexSet no_rng = ef.domain.minus(rng_seen);
      if (!no_rng.is_empty()) rep.empty_ranges = rep.empty_ranges.unite(EdgeSet::single(static_cast<int>(f), no_rng));
    }
    rep.sinks = all_vertices().minus(covered);
    return rep;
  }

  // ---- printing -------------------------------------------------------

  std::string vertex_name(const VertexRef& v) const { return family_text(vertex_families[v.family].name, vertex_families[v.family].domain, v.index); }
  std::string edge_name(const EdgeRef& e) const { return family_text(edge_families[e.family].name, edge_families[e.family].domain, e.index); }

  /// DSL text for a vertex set, e.g. `w[>=1]`, `v[0], v[3]`, `all(v)`.
  std::string format(const VertexSet& s) const {
    if (auto n = name_of(s)) return *n;
    return format_parts(s.parts(), [&](int f) -> const std::string& { return vertex_families[f].name; },
                         [&](int f) -> const IndexSet& { return vertex_families[f].domain; });
  }
  std::string format(const EdgeSet& s) const {
    return format_parts(s.parts(), [&](int f) -> const std::string& { return edge_families[f].name; },
                        [&](int f) -> const IndexSet& { return edge_families[f].domain; });
  }
  std::optional<std::string> name_of(const VertexSet& s) const {
    for (const auto& [k, v] : named_sets)
      if (v == s) return k;
    return std::nullopt;
  }

 private:
  static std::string family_text(const std::string& fam, const IndexSet& dom, Index k) {
    if (dom.card() == std::optional<std::uint64_t>(1)) return fam;
    return fam + "[" + std::to_string(k) + "]";
  }

  template <class NameF, class DomF>
  static std::string format_parts(const std::map<int, IndexSet>& parts, NameF name, DomF dom) {
    if (parts.empty()) return "{}";
    std::ostringstream os;
    bool first = true;
    auto sep = [&] { if (!first) os << ", "; first = false; };
    for (const auto& [f, s] : parts) {
      const std::string& n = name(f);
      if (s == dom(f)) { sep(); os << "all(" << n << ")"; continue; }
      for (const auto& iv : s.intervals()) {
        sep();
        if (iv.lo == iv.hi) {
          os << family_text(n, dom(f), iv.lo);
        } else if (iv.lo == kNegInf) {
          os << n << "[<=" << iv.hi << "]";
        } else if (iv.hi == kPosInf) {
          os << n << "[>=" << iv.lo << "]";
        } else {
          for (Index k = iv.lo; k <= iv.hi; ++k) {
            if (k != iv.lo) os << ", ";
            os << n << "[" << k << "]";
          }
        }
      }
    }
    return os.str();
  }
};

}  // namespace ultrashift
