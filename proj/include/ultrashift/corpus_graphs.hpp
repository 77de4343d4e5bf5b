// Ultragraphs of the built-in fixtures.
#pragma once

#include "ultrashift/ultragraph.hpp"

namespace ultrashift::corpus {

namespace detail {

inline EdgeFamily loop_family(std::string name, IndexSet domain, int vertex_family, const VertexSet& target) {
  EdgeFamily f;
  f.name = std::move(name);
  f.domain = domain;
  f.source.push_back({domain, vertex_family, AffineIndexMap::constant(0)});
  f.range.push_back({domain, target, {}});
  return f;
}

/// One vertex `vname`, loop families given by (name, domain).
inline Ultragraph bouquet(std::string gname, const std::string& vname, const std::string& emitter,
                          const std::vector<std::pair<std::string, IndexSet>>& loops) {
  Ultragraph g;
  g.name = std::move(gname);
  int v = g.add_vertex_family(vname, IndexSet::point(0));
  VertexSet all = VertexSet::single(v, IndexSet::point(0));
  for (const auto& [n, dom] : loops) g.add_edge_family(loop_family(n, dom, v, all));
  g.named_sets.push_back({emitter, all});
  return g;
}

}  // namespace detail

/// One vertex w, loops d and f_j (j >= 1).
inline Ultragraph example_a_source() {
  return detail::bouquet("G", "w", "A", {{"d", IndexSet::point(0)}, {"f", IndexSet::at_least(1)}});
}

/// One vertex v, loops e_j (j >= 1).
inline Ultragraph example_a_target() { return detail::bouquet("H", "v", "B", {{"e", IndexSet::at_least(1)}}); }

/// One vertex w, loops n_k for k >= 0 (the edge set {0} ∪ ℕ).
inline Ultragraph example_b_graph() { return detail::bouquet("G", "w", "A", {{"n", IndexSet::at_least(0)}}); }

/// Vertices v_k, edges e_k (k >= 0); r(e_0) = G⁰, r(e_k) = {v_0, v_k}.
inline Ultragraph example_d_source() {
  Ultragraph g;
  g.name = "G";
  int v = g.add_vertex_family("v", domains::naturals());
  EdgeFamily e;
  e.name = "e";
  e.domain = domains::naturals();
  e.source.push_back({domains::naturals(), v, AffineIndexMap::identity()});
  e.range.push_back({IndexSet::point(0), VertexSet::single(v, domains::naturals()), {}});
  e.range.push_back({IndexSet::at_least(1), VertexSet::single(v, IndexSet::point(0)), {{v, AffineIndexMap::identity()}}});
  g.add_edge_family(std::move(e));
  g.named_sets.push_back({"A", VertexSet::single(v, domains::naturals())});
  return g;
}

/// Vertices w_k, edges f_k (k ∈ ℤ*); r(f_k) = {w_{k+1}} (k <= -2),
/// {w_l : l >= 1} (k = -1), {w_k} ∪ {w_l : l <= -1} (k >= 1).
inline Ultragraph example_d_target() {
  Ultragraph g;
  g.name = "H";
  int w = g.add_vertex_family("w", domains::nonzero());
  EdgeFamily f;
  f.name = "f";
  f.domain = domains::nonzero();
  f.source.push_back({domains::nonzero(), w, AffineIndexMap::identity()});
  f.range.push_back({IndexSet::at_most(-2), {}, {{w, AffineIndexMap::shift(1)}}});
  f.range.push_back({IndexSet::point(-1), VertexSet::single(w, IndexSet::at_least(1)), {}});
  f.range.push_back({IndexSet::at_least(1), VertexSet::single(w, IndexSet::at_most(-1)), {{w, AffineIndexMap::identity()}}});
  g.add_edge_family(std::move(f));
  g.named_sets.push_back({"P", VertexSet::single(w, IndexSet::at_most(-1))});
  g.named_sets.push_back({"Q", VertexSet::single(w, IndexSet::at_least(1))});
  return g;
}

}  // namespace ultrashift::corpus
