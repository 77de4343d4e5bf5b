// Pseudo-cylinder schemas: anchored atom sequences with at most one
// repetition atom and one free integer parameter j.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/point.hpp"
#include "ultrashift/shift_space.hpp"

namespace ultrashift {

struct Atom {
  enum class Kind { Literal, Family, Rep, Any };
  Kind kind = Kind::Any;
  Symbol symbol{};
  int family = -1;
  /// Family atoms denote the edge family[map(j)].
  AffineIndexMap map{};

  static Atom literal(Symbol s) { return {Kind::Literal, s, -1, {}}; }
  static Atom literal(const EdgeRef& e) { return literal(Symbol::of(e)); }
  static Atom rep(Symbol s) { return {Kind::Rep, s, -1, {}}; }
  static Atom any() { return {}; }
  static Atom of_family(int fam, AffineIndexMap m = AffineIndexMap::identity()) {
    if (m.scale == 0) return literal(EdgeRef{fam, m.offset});
    return {Kind::Family, {}, fam, m};
  }

  bool uses_param() const { return kind == Kind::Family && map.scale != 0; }
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct PatternMatch {
  std::optional<Index> param;
  std::size_t reps = 0;
};

struct Pattern {
  std::size_t anchor = 1;
  std::vector<Atom> atoms;
  IndexSet param = IndexSet::all();

  int rep_position() const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i].kind == Atom::Kind::Rep) return static_cast<int>(i);
    return -1;
  }
  bool has_rep() const { return rep_position() >= 0; }
  bool uses_param() const {
    for (const auto& a : atoms)
      if (a.uses_param()) return true;
    return false;
  }
  /// Last constrained position, or nullopt when a repetition leaves it open.
  std::optional<std::size_t> end() const {
    if (has_rep()) return std::nullopt;
    return anchor + atoms.size() - 1;
  }
  bool edge_only() const {
    for (const auto& a : atoms)
      if ((a.kind == Atom::Kind::Literal || a.kind == Atom::Kind::Rep) && a.symbol.is_emitter()) return false;
    return true;
  }
  bool is_empty() const { return atoms.empty() || (uses_param() && param.is_empty()); }

  friend bool operator==(const Pattern&, const Pattern&) = default;

  std::string to_string(const ShiftSpace& sp) const {
    std::string s = "pc " + std::to_string(anchor) + "..";
    s += has_rep() ? "*" : std::to_string(anchor + atoms.size() - 1);
    s += " :";
    for (const auto& a : atoms) {
      s += ' ';
      switch (a.kind) {
        case Atom::Kind::Literal: s += sp.name(a.symbol); break;
        case Atom::Kind::Rep: s += "rep(" + sp.name(a.symbol) + ")"; break;
        case Atom::Kind::Any: s += "*"; break;
        case Atom::Kind::Family: s += sp.graph().edge_families[a.family].name + "[" + a.map.to_string("j") + "]"; break;
      }
    }
    if (uses_param()) s += " ; j in " + param.to_string();
    return s;
  }
};

namespace detail {

inline bool atom_accepts(const Atom& a, const Symbol& s, std::optional<Index>& j) {
  switch (a.kind) {
    case Atom::Kind::Any: return true;
    case Atom::Kind::Literal:
    case Atom::Kind::Rep: return s == a.symbol;
    case Atom::Kind::Family: {
      if (!s.is_edge() || s.edge.family != a.family) return false;
      Index v = a.map.scale * (s.edge.index - a.map.offset);
      if (j && *j != v) return false;
      j = v;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// First match of `p` in x, trying repetition counts in increasing order.
inline std::optional<PatternMatch> match(const Pattern& p, const Point& x) {
  if (p.atoms.empty()) return std::nullopt;
  auto attempt = [&](std::size_t reps) -> std::optional<PatternMatch> {
    std::optional<Index> j;
    std::size_t pos = p.anchor;
    for (const auto& a : p.atoms) {
      std::size_t count = a.kind == Atom::Kind::Rep ? reps : 1;
      for (std::size_t c = 0; c < count; ++c)
        if (!detail::atom_accepts(a, x.coordinate(pos++), j)) return std::nullopt;
    }
    if (p.uses_param() && !(j && p.param.contains(*j))) return std::nullopt;
    return PatternMatch{j, reps};
  };
  int r = p.rep_position();
  if (r < 0) return attempt(0);
  const Symbol s = p.atoms[r].symbol;
  const std::size_t start = p.anchor + static_cast<std::size_t>(r);
  auto run = x.run_length(start, [&](const Symbol& y) { return y == s; });
  // past the horizon an infinite run looks the same for every count
  std::size_t max_reps = run ? *run : *x.horizon() + x.period() + p.atoms.size() + start;
  for (std::size_t c = 1; c <= max_reps; ++c)
    if (auto m = attempt(c)) return m;
  return std::nullopt;
}

inline bool matches(const Pattern& p, const Point& x) { return match(p, x).has_value(); }

inline bool matches_any(const std::vector<Pattern>& ps, const Point& x) {
  for (const auto& p : ps)
    if (matches(p, x)) return true;
  return false;
}

/// The pattern with its repetition replaced by exactly `c` copies, or by
/// `c` copies followed by the repetition when `keep_rep`.
inline Pattern expand_rep(const Pattern& p, std::size_t c, bool keep_rep = false) {
  int r = p.rep_position();
  if (r < 0) return p;
  Pattern out = p;
  out.atoms.clear();
  for (int i = 0; i < static_cast<int>(p.atoms.size()); ++i) {
    if (i != r) {
      out.atoms.push_back(p.atoms[i]);
      continue;
    }
    for (std::size_t k = 0; k < c; ++k) out.atoms.push_back(Atom::literal(p.atoms[i].symbol));
    if (keep_rep) out.atoms.push_back(p.atoms[i]);
  }
  return out;
}

namespace detail {

/// Symbolic value var ↦ map(var); var -1 is a constant.
struct Term {
  int var = -1;
  AffineIndexMap map{};
};

class ParamSolver {
 public:
  std::optional<Index> val[2];
  bool empty = false;
  std::optional<AffineIndexMap> link;  // var1 = link(var0)

  void require_value(Term t, Index c) { consts_.push_back({t, c}); }
  void require_equal(Term a, Term b) { eqs_.push_back({a, b}); }

  void solve() {
    bool changed = true;
    while (changed && !empty) {
      changed = false;
      for (auto& [t, c] : consts_) changed |= pin(rewrite(t), c);
      for (auto& [a0, b0] : eqs_) {
        if (empty) return;
        Term a = rewrite(a0), b = rewrite(b0);
        auto va = value(a), vb = value(b);
        if (va && vb) {
          if (*va != *vb) empty = true;
        } else if (va) {
          changed |= pin(b, *va);
        } else if (vb) {
          changed |= pin(a, *vb);
        } else if (a.var == b.var) {
          if (a.map == b.map) continue;
          if (a.map.scale == b.map.scale) { empty = true; continue; }
          Index diff = b.map.offset - a.map.offset;  // a.scale*v - b.scale*v = diff
          Index coef = a.map.scale - b.map.scale;
          if (diff % coef != 0) { empty = true; continue; }
          changed |= set(a.var, diff / coef);
        } else if (!link) {
          if (a.var == 1) std::swap(a, b);
          // b.map(v1) = a.map(v0)  =>  v1 = b.map⁻¹(a.map(v0))
          link = b.map.inverse().compose(a.map);
          changed = true;
        }
      }
    }
  }

  Term rewrite(Term t) const {
    if (t.var == 1 && link) return {0, t.map.compose(*link)};
    return t;
  }

 private:
  std::optional<Index> value(const Term& t) const {
    if (t.var < 0 || t.map.scale == 0) return t.map.offset;
    if (val[t.var]) return t.map.apply(*val[t.var]);
    return std::nullopt;
  }
  bool pin(const Term& t, Index c) {
    if (t.var < 0 || t.map.scale == 0) {
      if (t.map.offset != c) empty = true;
      return false;
    }
    return set(t.var, t.map.scale * (c - t.map.offset));
  }
  bool set(int var, Index v) {
    if (val[var]) {
      if (*val[var] != v) empty = true;
      return false;
    }
    val[var] = v;
    if (link) {
      int other = 1 - var;
      Index ov = var == 0 ? link->apply(v) : link->inverse().apply(v);
      if (val[other] && *val[other] != ov) empty = true;
      val[other] = ov;
    }
    return true;
  }

  std::vector<std::pair<Term, Index>> consts_;
  std::vector<std::pair<Term, Term>> eqs_;
};

/// Positional intersection; any repetition must start after the other
/// pattern's window ends.
inline std::optional<Pattern> intersect_aligned(const Pattern& a, const Pattern& b) {
  const Pattern* ps[2] = {&a, &b};
  auto fixed_len = [](const Pattern& p) {
    int r = p.rep_position();
    return r < 0 ? p.atoms.size() : static_cast<std::size_t>(r);
  };
  const std::size_t start = std::min(a.anchor, b.anchor);
  const std::size_t stop = std::max(a.anchor + fixed_len(a), b.anchor + fixed_len(b));  // exclusive
  int tail_owner = a.has_rep() ? 0 : (b.has_rep() ? 1 : -1);
  if (tail_owner >= 0) {
    const Pattern& t = *ps[tail_owner];
    const Pattern& o = *ps[1 - tail_owner];
    if (o.anchor + o.atoms.size() > t.anchor + fixed_len(t))
      throw Error(ErrorKind::Precondition, "repetition overlaps the other window");
  }
  auto at = [&](int which, std::size_t pos) {
    const Pattern& p = *ps[which];
    if (pos < p.anchor || pos >= p.anchor + fixed_len(p)) return Atom::any();
    return p.atoms[pos - p.anchor];
  };

  ParamSolver solver;
  for (std::size_t pos = start; pos < stop; ++pos) {
    Atom x = at(0, pos), y = at(1, pos);
    if (x.kind == Atom::Kind::Any || y.kind == Atom::Kind::Any) continue;
    bool fx = x.kind == Atom::Kind::Family, fy = y.kind == Atom::Kind::Family;
    if (!fx && !fy) {
      if (x.symbol != y.symbol) return std::nullopt;
    } else if (fx && fy) {
      if (x.family != y.family) return std::nullopt;
      solver.require_equal({0, x.map}, {1, y.map});
    } else {
      const Atom& f = fx ? x : y;
      const Atom& l = fx ? y : x;
      if (!l.symbol.is_edge() || l.symbol.edge.family != f.family) return std::nullopt;
      solver.require_value({fx ? 0 : 1, f.map}, l.symbol.edge.index);
    }
  }
  solver.solve();
  if (solver.empty) return std::nullopt;

  bool used[2] = {a.uses_param(), b.uses_param()};
  for (int v = 0; v < 2; ++v)
    if (used[v] && solver.val[v] && !ps[v]->param.contains(*solver.val[v])) return std::nullopt;
  bool free0 = used[0] && !solver.val[0];
  bool free1 = used[1] && !solver.val[1];
  if (free0 && free1 && !solver.link)
    throw Error(ErrorKind::Unsupported, "intersection would need two free parameters");

  IndexSet domain = IndexSet::all();
  if (free0) domain = a.param;
  if (free1) domain = solver.link ? domain.intersect(solver.link->preimage(b.param)) : b.param;
  if ((free0 || free1) && domain.is_empty()) return std::nullopt;

  auto resolve = [&](int which, Atom x) {
    if (x.kind != Atom::Kind::Family) return x;
    Term t = solver.rewrite({which, x.map});
    int v = t.var;
    if (solver.val[v]) return Atom::literal(EdgeRef{x.family, t.map.apply(*solver.val[v])});
    x.map = t.map;
    return x;
  };

  Pattern out;
  out.anchor = start;
  out.param = domain;
  for (std::size_t pos = start; pos < stop; ++pos) {
    Atom x = resolve(0, at(0, pos)), y = resolve(1, at(1, pos));
    out.atoms.push_back(x.kind == Atom::Kind::Any ? y : x);
  }
  if (tail_owner >= 0) {
    const Pattern& t = *ps[tail_owner];
    for (std::size_t i = fixed_len(t); i < t.atoms.size(); ++i) out.atoms.push_back(resolve(tail_owner, t.atoms[i]));
  }
  if (!out.uses_param()) out.param = IndexSet::all();
  return out;
}

}  // namespace detail

/// Patterns whose union is the intersection of the two sets.
inline std::vector<Pattern> intersect_patterns(const Pattern& p, const Pattern& q) {
  if (p.has_rep() && q.has_rep()) throw Error(ErrorKind::Unsupported, "intersection of two repetition schemas");
  std::vector<Pattern> out;
  auto push = [&](std::optional<Pattern> r) {
    if (r && !r->is_empty()) out.push_back(std::move(*r));
  };
  if (!p.has_rep() && !q.has_rep()) {
    push(detail::intersect_aligned(p, q));
    return out;
  }
  const Pattern& r = p.has_rep() ? p : q;
  const Pattern& f = p.has_rep() ? q : p;
  const std::size_t rep_start = r.anchor + static_cast<std::size_t>(r.rep_position());
  const std::size_t fend = *f.end();
  if (fend < rep_start) {
    push(detail::intersect_aligned(r, f));
    return out;
  }
  const std::size_t c0 = fend - rep_start + 1;
  for (std::size_t c = 1; c <= c0; ++c) push(detail::intersect_aligned(expand_rep(r, c), f));
  push(detail::intersect_aligned(expand_rep(r, c0, true), f));
  return out;
}

}  // namespace ultrashift
