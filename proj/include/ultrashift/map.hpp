// Shift-commuting maps presented by a partition {C_a} of the source space:
// Φ(x)_n is the symbol whose class contains σ^{n-1}(x).
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ultrashift/completion.hpp"
#include "ultrashift/error.hpp"
#include "ultrashift/pattern.hpp"
#include "ultrashift/verdict.hpp"

namespace ultrashift {

/// Target symbol of a class: a fixed symbol, or family[map(j)] with j
/// supplied by the matching item.
struct ClassTarget {
  enum class Kind { Fixed, Family };
  Kind kind = Kind::Fixed;
  Symbol symbol{};
  int family = -1;
  AffineIndexMap map{};

  static ClassTarget fixed(Symbol s) { return {Kind::Fixed, s, -1, {}}; }
  static ClassTarget of_family(int fam, AffineIndexMap m = AffineIndexMap::identity()) { return {Kind::Family, {}, fam, m}; }
  bool is_emitter() const { return kind == Kind::Fixed && symbol.is_emitter(); }
};

/// A single point belonging to the class, with its parameter value.
struct PointItem {
  Point point;
  std::optional<Index> param;
};

/// Pure rule x ↦ Φ(x)_1 shared by all classes that reference it.
using RuleFn = std::function<Symbol(const Point&)>;

struct OracleItem {
  std::string name;
  std::shared_ptr<const RuleFn> rule;
  /// Coordinates the rule may inspect.
  std::size_t depth = kDefaultGeneratorDepth;
};

using ClassItem = std::variant<Pattern, PointItem, OracleItem>;

struct MapClass {
  ClassTarget target;
  /// Admissible j for family targets.
  IndexSet param = IndexSet::all();
  std::vector<ClassItem> items;

  bool has_oracle() const {
    for (const auto& it : items)
      if (std::holds_alternative<OracleItem>(it)) return true;
    return false;
  }

  /// The target symbol for j, when j is admissible.
  std::optional<Symbol> symbol_for(std::optional<Index> j) const {
    if (target.kind == ClassTarget::Kind::Fixed) return target.symbol;
    if (!j || !param.contains(*j)) return std::nullopt;
    return Symbol::of(EdgeRef{target.family, target.map.apply(*j)});
  }
  /// Inverse of symbol_for.
  std::optional<Index> param_of(const Symbol& s) const {
    if (target.kind == ClassTarget::Kind::Fixed) return std::nullopt;
    if (!s.is_edge() || s.edge.family != target.family || target.map.scale == 0) return std::nullopt;
    Index j = target.map.scale * (s.edge.index - target.map.offset);
    if (!param.contains(j)) return std::nullopt;
    return j;
  }
  bool owns(const Symbol& s) const {
    if (target.kind == ClassTarget::Kind::Fixed) return s == target.symbol;
    return param_of(s).has_value();
  }
};

struct MapPresentation {
  std::string name;
  ShiftSpace source;
  ShiftSpace target;
  std::vector<MapClass> classes;

  bool has_oracle() const {
    for (const auto& c : classes)
      if (c.has_oracle()) return true;
    return false;
  }
};

struct ClassHit {
  std::size_t cls = 0;
  std::size_t item = 0;
  Symbol symbol;
};

/// Every (class, item) containing x.
inline std::vector<ClassHit> class_hits(const MapPresentation& m, const Point& x) {
  std::vector<ClassHit> out;
  std::map<const RuleFn*, Symbol> rule_cache;
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    const MapClass& cls = m.classes[c];
    for (std::size_t i = 0; i < cls.items.size(); ++i) {
      const ClassItem& item = cls.items[i];
      std::optional<Symbol> s;
      if (const auto* p = std::get_if<Pattern>(&item)) {
        if (auto mt = match(*p, x)) s = cls.symbol_for(mt->param);
      } else if (const auto* pi = std::get_if<PointItem>(&item)) {
        if (same_point(pi->point, x)) s = cls.symbol_for(pi->param);
      } else {
        const auto& o = std::get<OracleItem>(item);
        auto it = rule_cache.find(o.rule.get());
        if (it == rule_cache.end()) it = rule_cache.emplace(o.rule.get(), (*o.rule)(x)).first;
        if (cls.owns(it->second)) s = it->second;
      }
      if (s) out.push_back({c, i, *s});
    }
  }
  return out;
}

inline std::string symbol_text(const ShiftSpace& sp, const Symbol& s) {
  try {
    return sp.name(s);
  } catch (const Error&) {
    return s.is_edge() ? "edge(" + std::to_string(s.edge.family) + "," + std::to_string(s.edge.index) + ")" : "emitter?";
  }
}

/// Φ(x)_1.
inline Symbol symbol_at(const MapPresentation& m, const Point& x) {
  auto hits = class_hits(m, x);
  if (hits.empty()) throw Error(ErrorKind::NoClass, "no class contains " + x.to_string(m.source));
  for (const auto& h : hits)
    if (h.symbol != hits.front().symbol) {
      std::string all;
      for (const auto& k : hits) all += (all.empty() ? "" : ", ") + symbol_text(m.target, k.symbol);
      throw Error(ErrorKind::PartitionViolation, x.to_string(m.source) + " lies in the classes of " + all);
    }
  return hits.front().symbol;
}

struct MapOutput {
  std::vector<Symbol> prefix;
  std::optional<Point> point;
  /// False when the input is a generator stream.
  bool exact = true;
};

namespace detail {

/// Resolves output symbols y_1..y_n where y_{n+1}, y_{n+2}, ... repeat the
/// cycle y_{p+1..n}.
inline Point resolve_output(const ShiftSpace& tgt, const std::vector<Symbol>& ys, std::size_t p) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!ys[i].is_emitter()) continue;
    for (std::size_t k = i; k < ys.size(); ++k)
      if (ys[k] != ys[i])
        throw Error(ErrorKind::InvalidOutput, "output coordinate " + std::to_string(i + 1) + " is the emitter " +
                                                  symbol_text(tgt, ys[i]) + " but coordinate " + std::to_string(k + 1) +
                                                  " is " + symbol_text(tgt, ys[k]));
    std::vector<EdgeRef> beta;
    for (std::size_t k = 0; k < i; ++k) beta.push_back(ys[k].edge);
    return Point::finite(std::move(beta), ys[i].emitter);
  }
  std::vector<EdgeRef> pre, cyc;
  for (std::size_t i = 0; i < ys.size(); ++i) (i < p ? pre : cyc).push_back(ys[i].edge);
  return Point::periodic(std::move(pre), std::move(cyc));
}

}  // namespace detail

/// Φ(x) to depth n, resolved to an exact point for finite and eventually
/// periodic x.
inline MapOutput eval_map(const MapPresentation& m, const Point& x, std::size_t n = 12) {
  MapOutput out;
  if (x.exact()) {
    // σ^i(x) repeats from i = stable_from()-1 with period()
    std::size_t p = *x.stable_from() - 1;
    std::size_t c = x.period();
    std::vector<Symbol> ys;
    for (std::size_t i = 0; i < p + c; ++i) ys.push_back(symbol_at(m, x.shifted(i)));
    Point y = detail::resolve_output(m.target, ys, p);
    auto issues = point_issues(m.target, y);
    if (!issues.empty()) throw Error(ErrorKind::InvalidOutput, y.to_string(m.target) + ": " + issues.front());
    if (x.is_finite() && y.is_finite() && *y.length() > *x.length())
      throw Error(ErrorKind::InvalidOutput, "finite input of length " + std::to_string(*x.length()) +
                                                " has a longer finite image " + y.to_string(m.target));
    for (std::size_t i = 1; i <= n; ++i) out.prefix.push_back(y.coordinate(i));
    out.point = y;
    return out;
  }
  out.exact = false;
  for (std::size_t i = 0; i < n; ++i) out.prefix.push_back(symbol_at(m, x.shifted(i)));
  for (std::size_t i = 0; i < out.prefix.size(); ++i) {
    if (!out.prefix[i].is_emitter()) continue;
    out.point = detail::resolve_output(m.target, out.prefix, out.prefix.size());
    return out;
  }
  auto edges = std::make_shared<std::vector<EdgeRef>>();
  for (const auto& s : out.prefix) edges->push_back(s.edge);
  MapPresentation mc = m;
  Point xc = x;
  out.point = Point::generated(
      "image", [edges, mc, xc](std::size_t k) {
        if (k <= edges->size()) return (*edges)[k - 1];
        Symbol s = symbol_at(mc, xc.shifted(k - 1));
        if (!s.is_edge()) throw Error(ErrorKind::InvalidOutput, "emitter beyond the evaluated prefix");
        return s.edge;
      },
      x.depth());
  return out;
}

inline Point apply_map(const MapPresentation& m, const Point& x) { return *eval_map(m, x, 1).point; }

/// Partition and emitter-class shift invariance on sampled points.
inline Verdict validate_map(const MapPresentation& m, const SampleOptions& o = {}, std::size_t shift_depth = 6) {
  Verdict v = Verdict::make("map-partition", Status::Holds);
  v.bounds = {{"depth", o.depth}, {"index_bound", o.index_bound}, {"samples", o.random}, {"shift_depth", shift_depth}};
  std::size_t checked = 0;
  for (const auto& x : sample_points(m.source, o)) {
    try {
      Symbol s = symbol_at(m, x);
      if (s.is_emitter())
        for (std::size_t i = 1; i <= shift_depth; ++i) {
          Symbol t = symbol_at(m, x.shifted(i));
          if (t != s) {
            v.status = Status::Fails;
            v.witness = {{"point", x.to_string(m.source)}, {"shift", i}, {"class", symbol_text(m.target, s)},
                         {"shifted_class", symbol_text(m.target, t)}};
            v.notes.push_back("emitter class is not shift invariant");
            return v;
          }
        }
      ++checked;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DepthExceeded) continue;
      v.status = Status::Fails;
      v.witness = {{"point", x.to_string(m.source)}, {"error", e.what()}};
      return v;
    }
  }
  v.witness = {{"checked", checked}};
  return v;
}

using PointMap = std::function<Point(const Point&)>;

inline PointMap as_point_map(const MapPresentation& m) {
  return [m](const Point& x) { return apply_map(m, x); };
}

/// Φ(σx) and σ(Φx) agree to `depth` on every sample.
inline Verdict check_commuting(const ShiftSpace& src, const ShiftSpace& tgt, const PointMap& phi,
                               const std::vector<Point>& samples, std::size_t depth = 12) {
  Verdict v = Verdict::make("commute", Status::Holds);
  v.bounds = {{"samples", samples.size()}, {"depth", depth}};
  std::size_t unknown = 0;
  for (const auto& x : samples) {
    try {
      Point a = phi(x.shifted());
      Point b = phi(x).shifted();
      for (std::size_t i = 1; i <= depth; ++i)
        if (a.coordinate(i) != b.coordinate(i)) {
          v.status = Status::Fails;
          v.witness = {{"point", x.to_string(src)}, {"coordinate", i}, {"phi_sigma", symbol_text(tgt, a.coordinate(i))},
                       {"sigma_phi", symbol_text(tgt, b.coordinate(i))}};
          return v;
        }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DepthExceeded) throw;
      ++unknown;
    }
  }
  if (unknown) v.notes.push_back(std::to_string(unknown) + " samples exceeded generator depth");
  return v;
}

/// σ^p(Φx) = Φx for x with σ^p x = x.
inline Verdict check_period_preservation(const MapPresentation& m, const Point& x) {
  Verdict v = Verdict::make("period", Status::Holds);
  if (!x.exact() || x.shifted(x.period()) != x)
    throw Error(ErrorKind::Precondition, "point must be exactly periodic with empty preamble");
  std::size_t p = x.is_finite() ? 1 : x.period();
  v.bounds = {{"period", p}};
  MapOutput y = eval_map(m, x, 1);
  if (!y.point || !y.point->exact()) {
    v.status = Status::Unknown;
    return v;
  }
  v.exact = true;
  v.witness = {{"point", x.to_string(m.source)}, {"image", y.point->to_string(m.target)}};
  if (y.point->shifted(p) != *y.point) v.status = Status::Fails;
  return v;
}

}  // namespace ultrashift
