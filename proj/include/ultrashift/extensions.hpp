// First-extension sets: for a prefix γ with terminal A, the symbols g at
// position |γ|+1 admitting a point y with σ^i(y) in a given union of classes.
#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ultrashift/map.hpp"
#include "ultrashift/path.hpp"

namespace ultrashift {

/// A set of target symbols, possibly given by its complement.
struct SymbolSet {
  EdgeSet edges;
  std::vector<int> emitters;
  bool complement = false;

  static SymbolSet only(const Symbol& s) {
    SymbolSet out;
    if (s.is_edge()) out.edges = EdgeSet::of(s.edge);
    else out.emitters.push_back(s.emitter);
    return out;
  }
  static SymbolSet except(const Symbol& s) {
    SymbolSet out = only(s);
    out.complement = true;
    return out;
  }

  bool contains(const Symbol& s) const {
    bool in = s.is_edge() ? edges.contains(s.edge)
                          : std::find(emitters.begin(), emitters.end(), s.emitter) != emitters.end();
    return complement ? !in : in;
  }
  /// The j in c.param whose symbol lies in this set.
  IndexSet params(const MapClass& c) const {
    IndexSet idx = c.target.map.preimage(edges.at(c.target.family));
    return complement ? c.param.minus(idx) : c.param.intersect(idx);
  }
};

struct ExtensionBounds {
  /// Branching per unconstrained position while building points.
  std::size_t width = 4;
  std::size_t reps = 3;
  std::size_t points_per_candidate = 4;
  /// Probes of an infinite candidate set: nearest indices and far ones.
  std::size_t near = 6;
  Index far_at = 40;
  std::size_t far = 4;
  std::size_t enumerate = 64;
};

struct ExtensionSet {
  /// Extensions confirmed by a witness point.
  EdgeSet edges;
  std::vector<int> emitters;
  /// Symbolic candidates behind an infinite verdict.
  EdgeSet candidates;
  bool infinite = false;
  bool exact = true;
  std::vector<std::pair<Symbol, Point>> witnesses;
  std::vector<std::string> notes;

  bool empty() const { return edges.is_empty() && emitters.empty() && !infinite; }

  void add(const Symbol& s, const Point& y) {
    if (s.is_edge()) {
      if (edges.contains(s.edge)) return;
      edges = edges.unite(EdgeSet::of(s.edge));
    } else {
      if (std::find(emitters.begin(), emitters.end(), s.emitter) != emitters.end()) return;
      emitters.push_back(s.emitter);
    }
    if (witnesses.size() < 16) witnesses.push_back({s, y});
  }
  void merge(const ExtensionSet& o) {
    for (const auto& [s, y] : o.witnesses) add(s, y);
    edges = edges.unite(o.edges);
    candidates = candidates.unite(o.candidates);
    infinite = infinite || o.infinite;
    exact = exact && o.exact;
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }

  json to_json(const ShiftSpace& sp) const {
    json w = json::array();
    for (const auto& [s, y] : witnesses) w.push_back({{"symbol", sp.name(s)}, {"point", y.to_string(sp)}});
    json ems = json::array();
    for (int e : emitters) ems.push_back(sp.emitter_name(e));
    json j{{"edges", sp.graph().format(edges)}, {"emitters", ems}, {"infinite", infinite}, {"witnesses", w}};
    if (infinite) j["candidates"] = sp.graph().format(candidates);
    return j;
  }
};

namespace detail {

/// Points matching `r` (anchored at 1) whose first coordinates are `fixed`.
inline std::vector<Point> realize(const ShiftSpace& sp, const Pattern& r, const std::vector<Symbol>& fixed,
                                  const ExtensionBounds& b) {
  std::vector<Point> out;
  std::vector<Pattern> variants;
  if (r.has_rep())
    for (std::size_t c = 1; c <= b.reps; ++c) variants.push_back(expand_rep(r, c));
  else
    variants.push_back(r);

  for (const auto& v : variants) {
    const std::size_t last = std::max(v.anchor + v.atoms.size() - 1, fixed.size());
    auto atom_at = [&](std::size_t pos) {
      if (pos < v.anchor || pos >= v.anchor + v.atoms.size()) return Atom::any();
      return v.atoms[pos - v.anchor];
    };
    std::vector<Symbol> seq;
    std::function<void(std::size_t, std::optional<Index>)> rec = [&](std::size_t pos, std::optional<Index> j) {
      if (out.size() >= b.points_per_candidate) return;
      if (pos > last) {
        if (v.uses_param() && !(j && v.param.contains(*j))) return;
        std::vector<EdgeRef> edges;
        for (const auto& s : seq) {
          if (s.is_emitter()) {
            out.push_back(Point::finite(edges, s.emitter));
            return;
          }
          edges.push_back(s.edge);
        }
        for (auto& p : completions(sp, edges)) {
          if (out.size() >= b.points_per_candidate) return;
          if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
        }
        return;
      }
      const Atom a = atom_at(pos);
      const Symbol* prev = seq.empty() ? nullptr : &seq.back();
      std::vector<Symbol> cands;
      if (pos <= fixed.size()) {
        cands.push_back(fixed[pos - 1]);
      } else if (prev && prev->is_emitter()) {
        cands.push_back(*prev);
      } else if (a.kind == Atom::Kind::Literal || a.kind == Atom::Kind::Rep) {
        cands.push_back(a.symbol);
      } else if (a.kind == Atom::Kind::Family) {
        if (j) cands.push_back(Symbol::of(EdgeRef{a.family, a.map.apply(*j)}));
        else
          for (Index k : v.param.closest_to_zero(b.width)) cands.push_back(Symbol::of(EdgeRef{a.family, a.map.apply(k)}));
      } else {
        EdgeSet next = prev ? sp.successors(prev->edge) : sp.graph().all_edges();
        for (const auto& e : next.closest_to_zero(b.width)) cands.push_back(Symbol::of(e));
        std::vector<int> ems;
        if (prev) ems = sp.emitters_in(sp.range(prev->edge));
        else
          for (std::size_t i = 0; i < sp.emitters().size(); ++i) ems.push_back(static_cast<int>(i));
        for (int e : ems) cands.push_back(Symbol::emitter_symbol(e));
      }
      for (const auto& s : cands) {
        if (!sp.has_symbol(s)) continue;
        if (prev) {
          if (prev->is_emitter() && s != *prev) continue;
          if (prev->is_edge() && !sp.follows(*prev, s)) continue;
        }
        std::optional<Index> jj = j;
        if (!detail::atom_accepts(a, s, jj)) continue;
        seq.push_back(s);
        rec(pos + 1, jj);
        seq.pop_back();
      }
    };
    rec(1, std::nullopt);
  }
  return out;
}

/// Edge paths β of length n with β_1 ∈ first and `ends(β_n)`.
inline std::vector<std::vector<EdgeRef>> bridges(const ShiftSpace& sp, const std::vector<EdgeRef>& first, std::size_t n,
                                                 const std::function<bool(const EdgeRef&)>& ends, std::size_t width,
                                                 std::size_t limit) {
  std::vector<std::vector<EdgeRef>> out;
  std::vector<EdgeRef> walk;
  std::function<void()> rec = [&] {
    if (out.size() >= limit) return;
    if (walk.size() == n) {
      if (ends(walk.back())) out.push_back(walk);
      return;
    }
    auto next = walk.empty() ? first : sp.successors(walk.back()).closest_to_zero(width);
    for (const auto& e : next) {
      walk.push_back(e);
      rec();
      walk.pop_back();
    }
  };
  if (n > 0) rec();
  return out;
}

}  // namespace detail

/// Symbols g in ε(A) ∪ {emitters ⊆ A} such that some y extending γ with
/// y_{|γ|+1} = g has Φ(σ^shift y)_1 in `bad`. Schema and point items are
/// analysed symbolically; oracle items by probing.
inline ExtensionSet first_extensions(const MapPresentation& m, const std::vector<EdgeRef>& gamma,
                                     const VertexSet& terminal, std::size_t shift, const SymbolSet& bad,
                                     const ExtensionBounds& b = {}) {
  const ShiftSpace& sp = m.source;
  const std::size_t n = gamma.size();
  const EdgeSet eps = sp.emitted(terminal);
  const std::vector<int> inside = sp.emitters_in(terminal);
  ExtensionSet out;

  auto bad_point = [&](const Point& y) {
    try {
      return bad.contains(symbol_at(m, y.shifted(shift)));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PartitionViolation || e.kind() == ErrorKind::NoClass) throw;
      return false;
    }
  };
  auto agrees = [&](const Point& y) {
    auto len = y.length();
    if (len && *len < n) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (y.coordinate(i + 1) != Symbol::of(gamma[i])) return false;
    Symbol g = y.coordinate(n + 1);
    if (g.is_edge()) return eps.contains(g.edge);
    return std::find(inside.begin(), inside.end(), g.emitter) != inside.end();
  };
  std::vector<Symbol> fixed;
  for (const auto& e : gamma) fixed.push_back(Symbol::of(e));
  auto try_symbol = [&](const Pattern& r, const Symbol& g) {
    auto f = fixed;
    f.push_back(g);
    for (const auto& y : detail::realize(sp, r, f, b))
      if (agrees(y) && bad_point(y)) {
        out.add(g, y);
        return true;
      }
    return false;
  };

  Pattern q;
  for (const auto& e : gamma) q.atoms.push_back(Atom::literal(e));
  q.atoms.push_back(Atom::any());

  for (const auto& cls : m.classes) {
    IndexSet jbad = IndexSet::all();
    if (cls.target.kind == ClassTarget::Kind::Fixed) {
      if (!bad.contains(cls.target.symbol)) continue;
    } else {
      jbad = bad.params(cls);
      if (jbad.is_empty()) continue;
    }
    for (const auto& item : cls.items) {
      if (const auto* pat = std::get_if<Pattern>(&item)) {
        Pattern p = *pat;
        if (cls.target.kind == ClassTarget::Kind::Family) {
          if (!p.uses_param()) continue;
          p.param = p.param.intersect(jbad);
          if (p.param.is_empty()) continue;
        }
        p.anchor += shift;
        std::vector<Pattern> rs;
        try {
          rs = intersect_patterns(p, q);
        } catch (const Error& e) {
          out.exact = false;
          out.notes.push_back(e.what());
          continue;
        }
        for (const auto& r : rs) {
          const Atom a = n < r.atoms.size() ? r.atoms[n] : Atom::any();
          EdgeSet cand;
          std::vector<int> ems;
          switch (a.kind) {
            case Atom::Kind::Any:
              cand = eps;
              ems = inside;
              break;
            case Atom::Kind::Family: cand = EdgeSet::single(a.family, a.map.image(r.param)).intersect(eps); break;
            default:
              if (a.symbol.is_edge()) {
                cand = EdgeSet::of(a.symbol.edge).intersect(eps);
              } else if (std::find(inside.begin(), inside.end(), a.symbol.emitter) != inside.end()) {
                ems.push_back(a.symbol.emitter);
              }
          }
          for (int e : ems) try_symbol(r, Symbol::emitter_symbol(e));
          if (cand.is_finite() && cand.card().count <= b.enumerate) {
            for (const auto& g : cand.closest_to_zero(b.enumerate)) try_symbol(r, Symbol::of(g));
            continue;
          }
          std::size_t near_hits = 0, far_hits = 0;
          for (const auto& g : cand.closest_to_zero(b.near)) near_hits += try_symbol(r, Symbol::of(g));
          for (const auto& g : cand.beyond(b.far_at, b.far)) far_hits += try_symbol(r, Symbol::of(g));
          if (far_hits) {
            out.infinite = true;
            out.candidates = out.candidates.unite(cand);
          } else if (near_hits) {
            out.exact = false;
            out.notes.push_back("an infinite candidate set had witnesses only near zero");
          }
        }
      } else if (const auto* pi = std::get_if<PointItem>(&item)) {
        auto s = cls.symbol_for(pi->param);
        if (!s || !bad.contains(*s)) continue;
        const Point& x0 = pi->point;
        auto tryp = [&](const std::vector<EdgeRef>& beta) {
          try {
            Point y = beta.empty() ? x0 : concat(sp, Ultrapath{beta, sp.range(beta.back())}, x0);
            if (agrees(y) && bad_point(y)) out.add(y.coordinate(n + 1), y);
          } catch (const Error&) {
          }
        };
        if (shift <= n) {
          tryp(std::vector<EdgeRef>(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(shift)));
          continue;
        }
        out.exact = false;
        Symbol head = x0.coordinate(1);
        auto ends = [&](const EdgeRef& e) {
          return head.is_edge() ? sp.follows(e, head.edge) : sp.emitter(head.emitter).subset_of(sp.range(e));
        };
        auto first = eps.closest_to_zero(b.width);
        for (const auto& beta : detail::bridges(sp, first, shift - n, ends, b.width, b.points_per_candidate * 4)) {
          auto full = gamma;
          full.insert(full.end(), beta.begin(), beta.end());
          tryp(full);
        }
      }
    }
  }

  if (m.has_oracle()) {
    out.exact = false;
    auto probe = [&](const EdgeRef& g) {
      auto p = gamma;
      p.push_back(g);
      std::vector<Point> ys = completions(sp, p);
      for (const auto& h : sp.successors(g).closest_to_zero(b.width)) {
        auto ph = p;
        ph.push_back(h);
        for (auto& y : completions(sp, ph)) ys.push_back(std::move(y));
      }
      for (const auto& y : ys)
        if (bad_point(y)) {
          out.add(Symbol::of(g), y);
          return true;
        }
      return false;
    };
    for (const auto& g : eps.closest_to_zero(b.near + 2)) probe(g);
    std::size_t far_hits = 0;
    for (const auto& g : eps.beyond(b.far_at, b.far)) far_hits += probe(g);
    if (far_hits) {
      out.infinite = true;
      out.candidates = out.candidates.unite(eps);
    }
    for (int e : inside) {
      Point y = Point::finite(gamma, e);
      if (bad_point(y)) out.add(Symbol::emitter_symbol(e), y);
    }
  }
  if (out.infinite) out.candidates = out.candidates.unite(out.edges);
  return out;
}

}  // namespace ultrashift
