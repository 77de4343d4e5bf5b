// Checkers for the continuity conditions on partition-presented maps, and
// direct probing of continuity along convergent sequences.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultrashift/cylinder.hpp"
#include "ultrashift/extensions.hpp"

namespace ultrashift {

struct CheckBounds {
  ExtensionBounds ext;
  /// Finite base points for the item ii and 2a/2b conditions.
  SampleOptions samples{2, 2, 20, 7, 400};
  std::size_t max_m = 4;
  /// Prefix lengths tried when an infinite point item must be interior.
  std::size_t point_depth = 8;
  /// Infinite points with finite image probed by the csc composite.
  std::size_t probes = 6;
  std::size_t excluded_singletons = 2;
  ConvergenceBounds convergence;

  json to_json() const {
    return {{"width", ext.width}, {"reps", ext.reps}, {"far_probe_at", ext.far_at}, {"sample_depth", samples.depth},
            {"sample_index_bound", samples.index_bound}, {"max_m", max_m}, {"point_depth", point_depth},
            {"probes", probes}, {"convergence", bounds_json(convergence)}};
  }
};

inline std::string class_name(const MapPresentation& m, const MapClass& c) {
  if (c.target.kind == ClassTarget::Kind::Fixed) return symbol_text(m.target, c.target.symbol);
  return m.target.graph().edge_families[c.target.family].name + "[" + c.target.map.to_string("j") + "] for j in " +
         c.param.to_string();
}

namespace detail {

/// Sample of the symbols of class c lying in `within`.
inline std::vector<Symbol> class_symbols(const MapClass& c, const EdgeSet& within, std::size_t near = 4) {
  std::vector<Symbol> out;
  if (c.target.kind == ClassTarget::Kind::Fixed) {
    if (c.target.symbol.is_edge() && within.contains(c.target.symbol.edge)) out.push_back(c.target.symbol);
    return out;
  }
  IndexSet js = c.param.intersect(c.target.map.preimage(within.at(c.target.family)));
  auto add = [&](Index j) {
    Symbol s = *c.symbol_for(j);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (Index j : js.closest_to_zero(near)) add(j);
  for (Index j : js.beyond(40, 2)) add(j);
  return out;
}

inline std::vector<Point> zero_length_points(const ShiftSpace& sp) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < sp.emitters().size(); ++i) out.push_back(Point::zero(static_cast<int>(i)));
  return out;
}

/// Folds sub-verdicts into a composite, keeping the first failure.
struct Composite {
  Verdict v;
  json parts = json::array();
  bool failure_recorded = false;

  explicit Composite(std::string check) : v(Verdict::make(std::move(check), Status::NotApplicable)) { v.exact = true; }

  void add(const Verdict& sub) {
    v.status = worst(v.status, sub.status);
    v.exact = v.exact && sub.exact;
    parts.push_back(sub.to_json());
    if (sub.fails() && !failure_recorded) {
      failure_recorded = true;
      v.witness["first_failure"] = {{"check", sub.check}, {"witness", sub.witness}};
    }
  }
  Verdict done() {
    v.witness["parts"] = parts;
    return v;
  }
};

inline ExtensionBounds wider(ExtensionBounds b) {
  b.points_per_candidate = std::max<std::size_t>(b.points_per_candidate, 8);
  return b;
}

}  // namespace detail

/// Every edge class is open: each of its points has a cylinder neighbourhood
/// inside the class.
inline Verdict check_csc_item_i(const MapPresentation& m, const CheckBounds& b = {}) {
  Verdict v = Verdict::make("csc-i", Status::Holds);
  v.exact = true;
  v.bounds = b.to_json();
  const ShiftSpace& sp = m.source;
  std::size_t schemas = 0, finite_points = 0;

  // at a finite point y = (α, A): only finitely many first extensions leave the class
  auto finite_ok = [&](const MapClass& c, const Point& y, const json& where) {
    Symbol a = symbol_at(m, y);
    if (!c.owns(a)) return true;
    ++finite_points;
    const auto& f = y.as_finite();
    auto fe = first_extensions(m, f.path, sp.emitter(f.tail), 0, SymbolSet::except(a), b.ext);
    v.exact = v.exact && fe.exact;
    if (!fe.infinite) return true;
    v.status = Status::Fails;
    v.witness = where;
    v.witness["point"] = y.to_string(sp);
    v.witness["escaping"] = fe.to_json(sp);
    v.notes.push_back("every cylinder D_{(α,A),F} around the point meets other classes");
    return false;
  };

  for (const auto& c : m.classes) {
    if (c.target.is_emitter()) continue;
    if (c.has_oracle()) {
      v.status = worst(v.status, Status::Unknown);
      v.exact = false;
      v.notes.push_back("class " + class_name(m, c) + " is oracle-presented");
      continue;
    }
    for (const auto& item : c.items) {
      if (const auto* p = std::get_if<Pattern>(&item)) {
        ++schemas;
        if (p->edge_only()) continue;
        v.exact = false;
        json where{{"class", class_name(m, c)}, {"schema", p->to_string(sp)}};
        for (const auto& y : detail::realize(sp, *p, {}, detail::wider(b.ext)))
          if (y.is_finite() && matches(*p, y) && !finite_ok(c, y, where)) return v;
      } else if (const auto* pi = std::get_if<PointItem>(&item)) {
        const Point& y = pi->point;
        json where{{"class", class_name(m, c)}};
        if (y.is_finite()) {
          if (!finite_ok(c, y, where)) return v;
          continue;
        }
        Symbol a = symbol_at(m, y);
        bool interior = false;
        ExtensionSet last;
        for (std::size_t n = 1; n <= b.point_depth && !interior; ++n) {
          auto pre = y.edge_prefix(n);
          last = first_extensions(m, pre, sp.range(pre.back()), 0, SymbolSet::except(a), b.ext);
          interior = last.empty();
        }
        if (!interior) {
          v.status = Status::Fails;
          v.witness = where;
          v.witness["point"] = y.to_string(sp);
          v.witness["depth"] = b.point_depth;
          v.witness["escaping"] = last.to_json(sp);
          v.notes.push_back("no cylinder around the point within the depth bound lies inside the class");
          return v;
        }
      }
    }
  }
  if (v.status == Status::Holds) v.witness = {{"schemas", schemas}, {"finite_points_checked", finite_points}};
  return v;
}

namespace detail {

inline Verdict item_ii(const std::string& check, const MapPresentation& m, const Point& xbar, const EdgeSet& f,
                       const CheckBounds& b) {
  Verdict v = Verdict::make(check, Status::Holds);
  v.bounds = b.to_json();
  if (!xbar.is_finite()) throw Error(ErrorKind::Precondition, "base point must be finite");
  Point y;
  try {
    y = *eval_map(m, xbar, 1).point;
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.notes.push_back(std::string("image unresolved: ") + e.what());
    return v;
  }
  v.witness = {{"point", xbar.to_string(m.source)}, {"image", y.to_string(m.target)}, {"F", m.target.graph().format(f)}};
  if (!y.is_finite()) {
    v.status = Status::NotApplicable;
    v.notes.push_back("image is infinite");
    return v;
  }
  const auto& xf = xbar.as_finite();
  const auto& yf = y.as_finite();
  const std::size_t l = yf.path.size();
  std::vector<EdgeRef> gamma(xf.path.begin() + static_cast<std::ptrdiff_t>(std::min(l, xf.path.size())), xf.path.end());
  const VertexSet& bset = m.target.emitter(yf.tail);
  SymbolSet bad;
  bad.edges = m.target.emitted(bset).minus(f);
  bad.emitters = m.target.emitters_in(bset);
  bad.complement = true;
  auto fe = first_extensions(m, gamma, m.source.emitter(xf.tail), 0, bad, b.ext);
  v.exact = fe.exact;
  v.witness["l"] = l;
  if (!fe.emitters.empty() || fe.infinite) {
    v.status = Status::Fails;
    v.witness["escaping"] = fe.to_json(m.source);
    v.notes.push_back(fe.infinite ? "infinitely many first extensions have images outside D_{B,F}"
                                  : "an emitter extension has its image outside D_{B,F}");
    return v;
  }
  v.witness["F_prime"] = m.source.graph().format(fe.edges);
  json w = json::array();
  for (const auto& [s, p] : fe.witnesses) w.push_back({{"edge", m.source.name(s)}, {"point", p.to_string(m.source)}});
  v.witness["excluded_because"] = w;
  return v;
}

}  // namespace detail

/// For x̄ = (α, A) with Φ(x̄) = (β, B), the least F′ with
/// Φ(D_{(σ^l α, A), F′}) ⊆ D_{B,F}.
inline Verdict check_csc_item_ii(const MapPresentation& m, const Point& xbar, const EdgeSet& f = {},
                                 const CheckBounds& b = {}) {
  return detail::item_ii("csc-ii", m, xbar, f, b);
}

/// The least F ⊆ ε(A) outside of which one-edge extensions of x̄ map into
/// D_B, for x̄ with zero-length image.
inline Verdict check_genchl_iia(const MapPresentation& m, const Point& xbar, const CheckBounds& b = {}) {
  if (!xbar.is_finite()) throw Error(ErrorKind::Precondition, "base point must be finite");
  auto y = eval_map(m, xbar, 1).point;
  if (!y || !y->is_zero_length()) throw Error(ErrorKind::Precondition, "image of the base point is not of length zero");
  Verdict v = detail::item_ii("genchl-2a", m, xbar, {}, b);
  if (v.witness.contains("F_prime")) {
    v.witness["F"] = v.witness["F_prime"];
    v.witness.erase("F_prime");
  }
  return v;
}

struct AxResult {
  Symbol symbol;
  ExtensionSet set;
  bool finite() const { return !set.infinite; }
};

/// A_x: first extensions g of x̄ admitting y with Φ(y)_1 = Φ(x)_1.
inline AxResult compute_A_x(const MapPresentation& m, const Point& xbar, const Point& x, const CheckBounds& b = {}) {
  const ShiftSpace& sp = m.source;
  if (!xbar.is_finite()) throw Error(ErrorKind::Precondition, "base point must be finite");
  const auto& xf = xbar.as_finite();
  const VertexSet& a = sp.emitter(xf.tail);
  for (std::size_t i = 0; i < xf.path.size(); ++i)
    if (x.coordinate(i + 1) != Symbol::of(xf.path[i])) throw Error(ErrorKind::Precondition, "x does not extend x̄");
  Symbol g = x.coordinate(xf.path.size() + 1);
  if (!g.is_edge() || !sp.emitted(a).contains(g.edge)) throw Error(ErrorKind::Precondition, "x does not continue into ε(A)");
  auto y = eval_map(m, xbar, 1).point;
  if (!y || !y->is_zero_length()) throw Error(ErrorKind::Precondition, "image of the base point is not of length zero");
  Symbol s = symbol_at(m, x);
  if (!s.is_edge() || !m.target.emitted(m.target.emitter(y->as_finite().tail)).contains(s.edge))
    throw Error(ErrorKind::Precondition, "Φ(x)_1 is not in ε(B)");
  return {s, first_extensions(m, xf.path, a, 0, SymbolSet::only(s), b.ext)};
}

inline Verdict check_A_x(const MapPresentation& m, const Point& xbar, const Point& x, const CheckBounds& b = {}) {
  AxResult r = compute_A_x(m, xbar, x, b);
  Verdict v = Verdict::make("A_x", r.finite() ? Status::Holds : Status::Fails);
  v.bounds = b.to_json();
  v.exact = r.set.exact;
  v.witness = {{"base", xbar.to_string(m.source)}, {"point", x.to_string(m.source)},
               {"symbol", m.target.name(r.symbol)}, {"A_x", r.set.to_json(m.source)}, {"finite", r.finite()}};
  return v;
}

/// For Φ(AA...) = (ddd...), the least F with σ^i(D_{A,F}) ⊆ C_d, i <= M.
inline Verdict check_csc_item_iii(const MapPresentation& m, int emitter, std::size_t max_m, const CheckBounds& b = {}) {
  Verdict v = Verdict::make("csc-iii", Status::Holds);
  v.bounds = b.to_json();
  v.bounds["M"] = max_m;
  Point z = Point::zero(emitter);
  Point y;
  try {
    y = *eval_map(m, z, 1).point;
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.notes.push_back(std::string("image unresolved: ") + e.what());
    return v;
  }
  v.witness = {{"point", z.to_string(m.source)}, {"image", y.to_string(m.target)}};
  if (y.is_finite()) {
    v.status = Status::NotApplicable;
    v.notes.push_back("image has length zero");
    return v;
  }
  Symbol d = y.coordinate(1);
  ExtensionSet all;
  for (std::size_t i = 0; i <= max_m; ++i) {
    auto fe = first_extensions(m, {}, m.source.emitter(emitter), i, SymbolSet::except(d), b.ext);
    all.merge(fe);
    if (fe.infinite) {
      v.status = Status::Fails;
      v.exact = false;
      v.witness["i"] = i;
      v.witness["escaping"] = fe.to_json(m.source);
      v.notes.push_back("σ^i(D_{A,F}) leaves C_d for every finite F");
      return v;
    }
  }
  v.exact = all.exact;
  v.witness["F"] = m.source.graph().format(all.edges);
  return v;
}

namespace detail {

/// The emitter classes are exactly the zero-length points.
inline Verdict emitter_classes_zero_length(const MapPresentation& m, const CheckBounds& b) {
  Verdict v = Verdict::make("length-preserving-ii", Status::Holds);
  v.exact = true;
  const ShiftSpace& sp = m.source;
  auto fail = [&](const Point& x, const std::string& why, const std::string& cls) {
    v.status = Status::Fails;
    v.witness = {{"point", x.to_string(sp)}, {"class", cls}};
    v.notes.push_back(why);
  };
  for (const auto& z : zero_length_points(sp)) {
    Symbol s = symbol_at(m, z);
    if (!s.is_emitter()) {
      fail(z, "a zero-length point lies in an edge class", symbol_text(m.target, s));
      return v;
    }
  }
  for (const auto& c : m.classes) {
    if (!c.target.is_emitter()) continue;
    const std::string cname = class_name(m, c);
    for (const auto& item : c.items) {
      if (const auto* p = std::get_if<Pattern>(&item)) {
        const Atom& first = p->atoms.front();
        if (p->anchor == 1 && first.kind == Atom::Kind::Literal && first.symbol.is_emitter()) continue;
        bool found = false;
        for (const auto& y : realize(sp, *p, {}, wider(b.ext)))
          if (!y.is_zero_length() && matches(*p, y)) {
            fail(y, "class contains a point of positive length", cname);
            v.witness["schema"] = p->to_string(sp);
            return v;
          }
        if (!found) {
          v.status = worst(v.status, Status::Unknown);
          v.exact = false;
          v.notes.push_back("no positive-length point found for " + p->to_string(sp));
        }
      } else if (const auto* pi = std::get_if<PointItem>(&item)) {
        if (!pi->point.is_zero_length()) {
          fail(pi->point, "class contains a point of positive length", cname);
          return v;
        }
      }
    }
    if (c.has_oracle()) {
      v.exact = false;
      SampleOptions o = b.samples;
      o.depth = std::max<std::size_t>(o.depth, 3);
      for (const auto& y : sample_points(sp, o)) {
        if (y.is_zero_length()) continue;
        try {
          if (symbol_at(m, y) == c.target.symbol) {
            fail(y, "class contains a point of positive length", cname);
            return v;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DepthExceeded) throw;
        }
      }
    }
  }
  return v;
}

/// A_x finiteness for every x with x̄ as base and Φ(x)_1 in ε(B).
inline Verdict ax_condition(const std::string& check, const MapPresentation& m, const Point& xbar, const CheckBounds& b) {
  Verdict v = Verdict::make(check, Status::Holds);
  v.exact = true;
  const auto& xf = xbar.as_finite();
  Point y = *eval_map(m, xbar, 1).point;
  const EdgeSet eb = m.target.emitted(m.target.emitter(y.as_finite().tail));
  json sizes = json::array();
  for (const auto& c : m.classes) {
    if (c.target.is_emitter()) continue;
    for (const auto& s : class_symbols(c, eb)) {
      auto fe = first_extensions(m, xf.path, m.source.emitter(xf.tail), 0, SymbolSet::only(s), b.ext);
      v.exact = v.exact && fe.exact;
      if (fe.infinite) {
        v.status = Status::Fails;
        v.witness = {{"point", xbar.to_string(m.source)}, {"symbol", m.target.name(s)}, {"A_x", fe.to_json(m.source)}};
        v.notes.push_back("A_x is infinite");
        return v;
      }
      sizes.push_back({{"symbol", m.target.name(s)}, {"A_x", m.source.graph().format(fe.edges)}});
    }
  }
  v.exact = false;
  v.witness = {{"point", xbar.to_string(m.source)}, {"A_x", sizes}};
  return v;
}

inline std::vector<Point> finite_bases(const MapPresentation& m, const CheckBounds& b, bool zero_image_only) {
  std::vector<Point> out;
  for (const auto& x : sample_points(m.source, b.samples)) {
    if (!x.is_finite()) continue;
    if (zero_image_only) {
      try {
        auto y = eval_map(m, x, 1).point;
        if (!y || !y->is_zero_length()) continue;
      } catch (const Error&) {
        continue;
      }
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

struct ProbeOptions {
  ConvergenceBounds convergence;
  /// Empty selects every applicable strategy.
  std::vector<std::string> strategies;
};

namespace detail {

struct NamedSequence {
  std::string name;
  std::vector<Point> points;
};

/// Sequences converging to x: escapes after growing prefixes for infinite
/// x, growing first extensions for finite x.
inline std::vector<NamedSequence> approach(const ShiftSpace& sp, const Point& x, std::size_t count) {
  std::vector<NamedSequence> out;
  auto tails = [&](const std::vector<EdgeRef>& p) {
    std::vector<std::pair<std::string, std::optional<Point>>> t;
    const EdgeRef& h = p.back();
    auto ems = sp.emitters_in(sp.range(h));
    t.push_back({"emitter", ems.empty() ? std::nullopt : std::optional<Point>(Point::finite(p, ems.front()))});
    t.push_back({"loop", sp.follows(h, h) ? std::optional<Point>(Point::periodic(p, {h})) : std::nullopt});
    t.push_back({"greedy", greedy_completion(sp, p)});
    auto succ = sp.successors(h).closest_to_zero(3);
    for (std::size_t k = 0; k < 3; ++k) {
      std::optional<Point> q;
      if (k < succ.size()) {
        auto ph = p;
        ph.push_back(succ[k]);
        q = sp.follows(succ[k], succ[k]) ? std::optional<Point>(Point::periodic(ph, {succ[k]})) : greedy_completion(sp, ph);
      }
      t.push_back({"then-" + std::to_string(k + 1), q});
    }
    return t;
  };

  const std::vector<std::string> kinds{"emitter", "loop", "greedy", "then-1", "then-2", "then-3"};
  std::vector<std::pair<std::string, std::vector<Point>>> seqs;
  auto put = [&](std::size_t slot, const std::string& name, const Point& p) {
    if (slot >= seqs.size()) seqs.resize(slot + 1);
    seqs[slot].first = name;
    seqs[slot].second.push_back(p);
  };

  if (x.is_infinite()) {
    std::size_t n_max = std::min(count, x.depth() > 1 ? x.depth() - 1 : 0);
    for (std::size_t n = 1; n <= n_max; ++n) {
      auto pre = x.edge_prefix(n);
      EdgeRef next = x.edge_at(n + 1);
      std::optional<EdgeRef> h;
      for (const auto& e : sp.successors(pre.back()).closest_to_zero(3))
        if (e != next) {
          h = e;
          break;
        }
      auto ems = sp.emitters_in(sp.range(pre.back()));
      put(0, "truncate", ems.empty() ? x : Point::finite(pre, ems.front()));
      std::vector<std::pair<std::string, std::optional<Point>>> ts;
      if (h) {
        auto p = pre;
        p.push_back(*h);
        ts = tails(p);
      }
      for (std::size_t s = 0; s < kinds.size(); ++s)
        put(s + 1, "escape-" + kinds[s], s < ts.size() && ts[s].second ? *ts[s].second : x);
    }
  } else {
    const auto& f = x.as_finite();
    auto gs = sp.emitted(sp.emitter(f.tail)).closest_to_zero(count);
    if (gs.size() == count)
      for (std::size_t n = 1; n <= count; ++n) {
        auto p = f.path;
        p.push_back(gs[n - 1]);
        auto ts = tails(p);
        for (std::size_t s = 0; s < kinds.size(); ++s)
          put(s, "spread-" + kinds[s], ts[s].second ? *ts[s].second : x);
      }
  }
  for (auto& [name, pts] : seqs)
    if (pts.size() == count) out.push_back({name, std::move(pts)});
  out.push_back({"constant", std::vector<Point>(std::max<std::size_t>(count, 1), x)});
  return out;
}

}  // namespace detail

/// Runs the convergence check on Φ(x^n) → Φ(x) for each approach x^n → x.
inline Verdict probe_continuity(const MapPresentation& m, const Point& x, const ProbeOptions& o = {}) {
  Verdict v = Verdict::make("continuity-probe", Status::Holds);
  v.bounds = bounds_json(o.convergence);
  const std::size_t n = o.convergence.max_index;
  Point target;
  try {
    target = apply_map(m, x);
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.notes.push_back(std::string("image unresolved: ") + e.what());
    return v;
  }
  json tried = json::array();
  for (const auto& seq : detail::approach(m.source, x, n)) {
    if (!o.strategies.empty() && std::find(o.strategies.begin(), o.strategies.end(), seq.name) == o.strategies.end())
      continue;
    if (seq.points.size() < n) continue;
    std::vector<Point> images;
    try {
      for (const auto& p : seq.points) images.push_back(apply_map(m, p));
    } catch (const Error& e) {
      v.status = worst(v.status, Status::Unknown);
      v.notes.push_back(seq.name + ": " + e.what());
      continue;
    }
    ConvergenceBounds cb = o.convergence;
    if (target.is_finite() && cb.excluded_sets.empty()) {
      const std::size_t k = target.as_finite().path.size();
      EdgeSet all;
      cb.excluded_sets.push_back({});
      for (std::size_t i = 0; i < std::min<std::size_t>(3, images.size()); ++i) {
        auto len = images[i].length();
        if (len && *len <= k) continue;
        Symbol s = images[i].coordinate(k + 1);
        cb.excluded_sets.push_back(EdgeSet::of(s.edge));
        all = all.unite(EdgeSet::of(s.edge));
      }
      cb.excluded_sets.push_back(all);
    }
    Verdict c = check_convergence(m.target, [&](std::size_t i) { return images.at(i - 1); }, target, cb);
    tried.push_back({{"strategy", seq.name}, {"status", to_string(c.status)}});
    if (c.fails()) {
      v.status = Status::Fails;
      json xs = json::array(), ys = json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(5, seq.points.size()); ++i) {
        xs.push_back(seq.points[i].to_string(m.source));
        ys.push_back(images[i].to_string(m.target));
      }
      v.witness = {{"point", x.to_string(m.source)}, {"image", target.to_string(m.target)}, {"strategy", seq.name},
                   {"sequence", xs}, {"images", ys}, {"convergence", c.witness}};
      v.notes.push_back("x^n converges to x but Φ(x^n) does not converge to Φ(x)");
      return v;
    }
    v.status = worst(v.status, c.status);
    for (const auto& note : c.notes) v.notes.push_back(seq.name + ": " + note);
  }
  v.witness = {{"point", x.to_string(m.source)}, {"image", target.to_string(m.target)}, {"strategies", tried}};
  return v;
}

/// Conditions i, ii and iii, plus probe evidence for continuity on infinite
/// points with finite image (needed for the converse).
inline Verdict check_csc(const MapPresentation& m, const CheckBounds& b = {}) {
  detail::Composite out("csc");
  out.v.bounds = b.to_json();
  out.add(check_csc_item_i(m, b));

  Verdict ii = Verdict::make("csc-ii", Status::NotApplicable);
  ii.exact = true;
  std::size_t checked = 0;
  for (const auto& x : detail::finite_bases(m, b, false)) {
    Point y;
    try {
      y = *eval_map(m, x, 1).point;
    } catch (const Error&) {
      continue;
    }
    if (!y.is_finite()) continue;
    std::vector<EdgeSet> fs{{}};
    for (const auto& e : m.target.emitted(m.target.emitter(y.as_finite().tail)).closest_to_zero(b.excluded_singletons))
      fs.push_back(EdgeSet::of(e));
    for (const auto& f : fs) {
      Verdict s = check_csc_item_ii(m, x, f, b);
      ++checked;
      ii.exact = ii.exact && s.exact;
      if (s.status != Status::Holds && s.status != Status::NotApplicable) {
        ii.status = s.status;
        ii.witness = s.witness;
        ii.notes = s.notes;
        break;
      }
      ii.status = worst(ii.status, s.status);
    }
    if (ii.fails()) break;
  }
  if (!ii.fails() && !ii.witness.is_object()) ii.witness = {{"base_points_checked", checked}};
  out.add(ii);

  for (const auto& z : detail::zero_length_points(m.source)) out.add(check_csc_item_iii(m, z.as_finite().tail, b.max_m, b));

  Verdict hyp = Verdict::make("continuity-on-infinite-preimage", Status::NotApplicable);
  std::size_t probed = 0;
  json probes = json::array();
  for (const auto& x : sample_points(m.source, b.samples)) {
    if (!x.is_periodic() || probed >= b.probes) continue;
    try {
      if (!apply_map(m, x).is_finite()) continue;
    } catch (const Error&) {
      continue;
    }
    ++probed;
    ProbeOptions po;
    po.convergence = b.convergence;
    Verdict p = probe_continuity(m, x, po);
    probes.push_back({{"point", x.to_string(m.source)}, {"status", to_string(p.status)}});
    if (p.fails()) {
      hyp = p;
      hyp.check = "continuity-on-infinite-preimage";
      break;
    }
    hyp.status = worst(hyp.status, p.status);
  }
  if (!hyp.fails()) hyp.witness = {{"probes", probes}};
  out.add(hyp);
  Verdict v = out.done();
  if (probed && !v.fails()) {
    v.witness["conditional"] = true;
    v.notes.push_back("the converse rests on probe evidence for continuity on infinite points with finite image");
  }
  return v;
}

/// Conditions 1, 2a, 2b and 3 for maps whose emitter classes are finitely
/// defined.
inline Verdict check_genchl(const MapPresentation& m, const CheckBounds& b = {}) {
  detail::Composite out("genchl");
  out.v.bounds = b.to_json();
  out.add(check_csc_item_i(m, b));
  Verdict a = Verdict::make("genchl-2a", Status::NotApplicable);
  Verdict ax = Verdict::make("genchl-2b", Status::NotApplicable);
  a.exact = ax.exact = true;
  for (const auto& x : detail::finite_bases(m, b, true)) {
    Verdict s = check_genchl_iia(m, x, b);
    a.exact = a.exact && s.exact;
    if (s.status != Status::Holds) {
      a.status = worst(a.status, s.status);
      a.witness = s.witness;
      a.notes = s.notes;
      if (s.fails()) break;
    } else {
      a.status = worst(a.status, Status::Holds);
    }
    Verdict t = detail::ax_condition("genchl-2b", m, x, b);
    ax.exact = false;
    if (t.status != Status::Holds) {
      ax.status = worst(ax.status, t.status);
      ax.witness = t.witness;
      ax.notes = t.notes;
      if (t.fails()) break;
    } else {
      ax.status = worst(ax.status, Status::Holds);
    }
  }
  out.add(a);
  out.add(ax);
  for (const auto& z : detail::zero_length_points(m.source)) out.add(check_csc_item_iii(m, z.as_finite().tail, b.max_m, b));
  Verdict v = out.done();
  v.notes.push_back("assumes every emitter class is finitely defined");
  return v;
}

/// Emitter classes are the zero-length points, edge classes are open, and
/// conditions 3a/3b hold at every zero-length point.
inline Verdict check_length_preserving(const MapPresentation& m, const CheckBounds& b = {}) {
  detail::Composite out("length-preserving");
  out.v.bounds = b.to_json();
  Verdict ii = detail::emitter_classes_zero_length(m, b);
  out.add(ii);
  out.add(check_csc_item_i(m, b));
  if (!ii.fails()) {
    for (const auto& z : detail::zero_length_points(m.source)) {
      Verdict a = check_genchl_iia(m, z, b);
      a.check = "length-preserving-3a";
      out.add(a);
      out.add(detail::ax_condition("length-preserving-3b", m, z, b));
    }
  }
  return out.done();
}

}  // namespace ultrashift
