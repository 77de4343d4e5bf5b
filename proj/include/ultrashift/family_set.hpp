// Sets of vertices or edges drawn from indexed families: one IndexSet per
// family id, empty entries dropped so structural equality is set equality.
#pragma once

#include <cstdint>
#include <algorithm>
#include <map>
#include <tuple>
#include <optional>
#include <vector>

#include "ultrashift/index_set.hpp"

namespace ultrashift {

/// Cardinality class of a symbolic set.
struct Cardinality {
  bool infinite = false;
  std::uint64_t count = 0;

  static Cardinality finite(std::uint64_t n) { return {false, n}; }
  static Cardinality infinity() { return {true, 0}; }
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

template <class Tag>
struct ElementRef {
  int family = 0;
  Index index = 0;
  friend bool operator==(const ElementRef&, const ElementRef&) = default;
  friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};

struct VertexTag {};
struct EdgeTag {};
using VertexRef = ElementRef<VertexTag>;
using EdgeRef = ElementRef<EdgeTag>;

template <class Tag>
class FamilySet {
 public:
  using Ref = ElementRef<Tag>;

  FamilySet() = default;

  static FamilySet single(int family, IndexSet s) {
    FamilySet f;
    f.set(family, std::move(s));
    return f;
  }
  static FamilySet of(const Ref& r) { return single(r.family, IndexSet::point(r.index)); }
  static FamilySet of(const std::vector<Ref>& rs) {
    FamilySet f;
    for (const auto& r : rs) f = f.unite(of(r));
    return f;
  }

  const std::map<int, IndexSet>& parts() const { return parts_; }

  const IndexSet& at(int family) const {
    static const IndexSet kEmpty;
    auto it = parts_.find(family);
    return it == parts_.end() ? kEmpty : it->second;
  }
  void set(int family, IndexSet s) {
    if (s.is_empty()) parts_.erase(family);
    else parts_[family] = std::move(s);
  }

  bool is_empty() const { return parts_.empty(); }
  bool contains(const Ref& r) const { return at(r.family).contains(r.index); }
  bool contains(int family, Index k) const { return at(family).contains(k); }

  Cardinality card() const {
    std::uint64_t n = 0;
    for (const auto& [fam, s] : parts_) {
      auto c = s.card();
      if (!c) return Cardinality::infinity();
      n += *c;
    }
    return Cardinality::finite(n);
  }
  bool is_finite() const { return !card().infinite; }

  FamilySet unite(const FamilySet& o) const { return combine(o, [](const IndexSet& a, const IndexSet& b) { return a.unite(b); }); }
  FamilySet intersect(const FamilySet& o) const {
    FamilySet out;
    for (const auto& [fam, s] : parts_) out.set(fam, s.intersect(o.at(fam)));
    return out;
  }
  FamilySet minus(const FamilySet& o) const {
    FamilySet out;
    for (const auto& [fam, s] : parts_) out.set(fam, s.minus(o.at(fam)));
    return out;
  }
  bool subset_of(const FamilySet& o) const { return minus(o).is_empty(); }
  bool intersects(const FamilySet& o) const { return !intersect(o).is_empty(); }

  /// Elements ordered by (|index|, family), at most n of them.
  std::vector<Ref> closest_to_zero(std::size_t n) const {
    std::vector<Ref> out;
    for (const auto& [fam, s] : parts_)
      for (Index k : s.closest_to_zero(n)) out.push_back({fam, k});
    sort_by_magnitude(out);
    if (out.size() > n) out.resize(n);
    return out;
  }
  /// Up to n elements per family with |index| >= t.
  std::vector<Ref> beyond(Index t, std::size_t n) const {
    std::vector<Ref> out;
    for (const auto& [fam, s] : parts_)
      for (Index k : s.beyond(t, n)) out.push_back({fam, k});
    sort_by_magnitude(out);
    return out;
  }
  /// All elements with |index| <= bound.
  std::vector<Ref> elements_within(Index bound) const {
    std::vector<Ref> out;
    for (const auto& [fam, s] : parts_)
      for (Index k : s.elements_within(-bound, bound)) out.push_back({fam, k});
    sort_by_magnitude(out);
    return out;
  }

  friend bool operator==(const FamilySet&, const FamilySet&) = default;
  friend auto operator<=>(const FamilySet& a, const FamilySet& b) { return a.parts_ <=> b.parts_; }

 private:
  static void sort_by_magnitude(std::vector<Ref>& v) {
    std::sort(v.begin(), v.end(), [](const Ref& a, const Ref& b) {
      auto ka = a.index < 0 ? -a.index : a.index;
      auto kb = b.index < 0 ? -b.index : b.index;
      return std::tuple(ka, a.index, a.family) < std::tuple(kb, b.index, b.family);
    });
  }
  template <class F>
  FamilySet combine(const FamilySet& o, F f) const {
    FamilySet out = *this;
    for (const auto& [fam, s] : o.parts_) out.set(fam, f(out.at(fam), s));
    return out;
  }

  std::map<int, IndexSet> parts_;
};

using VertexSet = FamilySet<VertexTag>;
using EdgeSet = FamilySet<EdgeTag>;

}  // namespace ultrashift
