// Alphabet of X_𝒢 (edges plus minimal infinite emitters) and the graph data
// every point-level algorithm consults.
#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/family_set.hpp"
#include "ultrashift/g0.hpp"
#include "ultrashift/ultragraph.hpp"

namespace ultrashift {

struct Symbol {
  enum class Kind { Edge, Emitter };
  Kind kind = Kind::Edge;
  EdgeRef edge{};
  int emitter = -1;

  static Symbol of(const EdgeRef& e) { return {Kind::Edge, e, -1}; }
  static Symbol emitter_symbol(int id) { return {Kind::Emitter, {}, id}; }
  bool is_edge() const { return kind == Kind::Edge; }
  bool is_emitter() const { return kind == Kind::Emitter; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

class ShiftSpace {
 public:
  explicit ShiftSpace(Ultragraph g, std::size_t cap = kDefaultClosureCap) : impl_(std::make_shared<Impl>()) {
    impl_->graph = std::move(g);
    impl_->cap = cap;
    impl_->closure = range_intersection_closure(impl_->graph, cap);
    EmitterInventory inv = minimal_infinite_emitters(impl_->graph, cap);
    impl_->emitters = std::move(inv.emitters);
    impl_->complete = inv.complete;
  }

  const Ultragraph& graph() const { return impl_->graph; }
  const std::string& name() const { return impl_->graph.name; }
  const std::vector<MinimalEmitter>& emitters() const { return impl_->emitters; }
  bool emitters_complete() const { return impl_->complete; }
  const G0Closure& closure() const { return impl_->closure; }
  std::size_t cap() const { return impl_->cap; }

  const VertexSet& emitter(int id) const {
    if (id < 0 || id >= static_cast<int>(impl_->emitters.size()))
      throw Error(ErrorKind::FamilyMismatch, "unknown emitter id " + std::to_string(id));
    return impl_->emitters[id].set;
  }
  std::optional<int> emitter_id(const VertexSet& s) const {
    for (std::size_t i = 0; i < impl_->emitters.size(); ++i)
      if (impl_->emitters[i].set == s) return static_cast<int>(i);
    return std::nullopt;
  }
  /// Minimal emitters contained in `r` (M_α when r = r(α_last)).
  std::vector<int> emitters_in(const VertexSet& r) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < impl_->emitters.size(); ++i)
      if (impl_->emitters[i].set.subset_of(r)) out.push_back(static_cast<int>(i));
    return out;
  }

  bool has_edge(const EdgeRef& e) const { return impl_->graph.has_edge(e); }
  bool has_symbol(const Symbol& s) const {
    return s.is_edge() ? has_edge(s.edge) : (s.emitter >= 0 && s.emitter < static_cast<int>(impl_->emitters.size()));
  }

  std::optional<VertexRef> source(const EdgeRef& e) const { return impl_->graph.source(e); }

  VertexSet range(const EdgeRef& e) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->ranges.find(e);
    if (it != impl_->ranges.end()) return it->second;
    if (impl_->ranges.size() > 200000) impl_->ranges.clear();
    return impl_->ranges.emplace(e, impl_->graph.range(e)).first->second;
  }
  EdgeSet emitted(const VertexSet& a) const { return impl_->graph.emitted_edges(a); }
  EdgeSet successors(const EdgeRef& e) const { return emitted(range(e)); }

  /// s(b) ∈ r(a)
  bool follows(const EdgeRef& a, const EdgeRef& b) const {
    auto s = source(b);
    return s && range(a).contains(*s);
  }
  /// Adjacency of consecutive coordinates of a point.
  bool follows(const Symbol& a, const Symbol& b) const {
    if (a.is_emitter()) return b == a;
    if (b.is_edge()) return follows(a.edge, b.edge);
    return emitter(b.emitter).subset_of(range(a.edge));
  }

  G0Membership in_g0(const VertexSet& a) const { return is_in_g0(impl_->graph, a, impl_->cap); }

  std::string edge_name(const EdgeRef& e) const { return impl_->graph.edge_name(e); }
  std::string emitter_name(int id) const {
    const VertexSet& s = emitter(id);
    if (auto n = impl_->graph.name_of(s)) return *n;
    return "{" + impl_->graph.format(s) + "}";
  }
  std::string name(const Symbol& s) const { return s.is_edge() ? edge_name(s.edge) : emitter_name(s.emitter); }
  std::string vertex_set_name(const VertexSet& s) const {
    if (auto n = impl_->graph.name_of(s)) return *n;
    return "{" + impl_->graph.format(s) + "}";
  }

  friend bool operator==(const ShiftSpace& a, const ShiftSpace& b) { return a.impl_ == b.impl_ || a.graph() == b.graph(); }

 private:
  struct Impl {
    Ultragraph graph;
    std::size_t cap = kDefaultClosureCap;
    G0Closure closure;
    std::vector<MinimalEmitter> emitters;
    bool complete = true;
    mutable std::mutex mu;
    mutable std::map<EdgeRef, VertexSet> ranges;
  };
  std::shared_ptr<Impl> impl_;
};

/// Minimal emitters inside r(α_last) for a valid path α.
inline std::vector<MinimalEmitter> minimal_emitters_in_range(const ShiftSpace& sp, const std::vector<EdgeRef>& alpha) {
  if (alpha.empty()) throw Error(ErrorKind::InvalidPath, "empty path has no range");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!sp.has_edge(alpha[i])) throw Error(ErrorKind::InvalidPath, "edge not in graph at position " + std::to_string(i + 1));
    if (i > 0 && !sp.follows(alpha[i - 1], alpha[i]))
      throw Error(ErrorKind::InvalidPath, "s(α_" + std::to_string(i + 1) + ") not in r(α_" + std::to_string(i) + ")");
  }
  std::vector<MinimalEmitter> out;
  for (int id : sp.emitters_in(sp.range(alpha.back()))) out.push_back(sp.emitters()[id]);
  return out;
}

}  // namespace ultrashift
