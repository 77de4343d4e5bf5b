// The .ug document format: ultragraphs, maps, points, point sequences and
// check directives.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ultrashift/corpus_maps.hpp"
#include "ultrashift/cylinder.hpp"
#include "ultrashift/dsl_cursor.hpp"
#include "ultrashift/map.hpp"

namespace ultrashift::dsl {

struct PointDecl {
  std::string name;
  std::string graph;
  Point point;
};

/// family[map(n)]
struct TemplateEdge {
  int family = 0;
  AffineIndexMap map;
  friend bool operator==(const TemplateEdge&, const TemplateEdge&) = default;
};

/// A block of edges repeated power(n) times, or once when power is unset.
struct TemplatePart {
  std::vector<TemplateEdge> edges;
  std::optional<AffineIndexMap> power;
  friend bool operator==(const TemplatePart&, const TemplatePart&) = default;
};

/// x^n given by a point literal whose indices and repetition counts are
/// affine in n.
struct SequenceDecl {
  std::string name;
  std::string graph;
  bool finite = true;
  std::vector<TemplatePart> parts;
  std::vector<TemplateEdge> cycle;
  int tail = 0;

  friend bool operator==(const SequenceDecl&, const SequenceDecl&) = default;

  Point at(std::size_t n) const {
    const auto k = static_cast<Index>(n);
    auto inst = [k](const TemplateEdge& t) { return EdgeRef{t.family, t.map.apply(k)}; };
    std::vector<EdgeRef> path;
    for (const auto& p : parts) {
      Index reps = p.power ? p.power->apply(k) : 1;
      for (Index r = 0; r < reps; ++r)
        for (const auto& e : p.edges) path.push_back(inst(e));
    }
    if (finite) return Point::finite(std::move(path), tail);
    std::vector<EdgeRef> cyc;
    for (const auto& e : cycle) cyc.push_back(inst(e));
    return Point::periodic(std::move(path), std::move(cyc));
  }
  PointSequence sequence() const {
    return [s = *this](std::size_t n) { return s.at(n); };
  }
};

struct CheckDirective {
  std::string check;
  std::string map;
  friend bool operator==(const CheckDirective&, const CheckDirective&) = default;
};

inline const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> k{"commute", "csc", "genchl", "length-preserving"};
  return k;
}

struct Document {
  std::vector<ShiftSpace> graphs;
  std::vector<MapPresentation> maps;
  std::vector<PointDecl> points;
  std::vector<SequenceDecl> sequences;
  std::vector<CheckDirective> checks;

  bool empty() const { return graphs.empty() && maps.empty() && points.empty() && sequences.empty() && checks.empty(); }

  const ShiftSpace* graph(const std::string& n) const {
    for (const auto& g : graphs)
      if (g.name() == n) return &g;
    return nullptr;
  }
  const MapPresentation* map(const std::string& n) const {
    for (const auto& m : maps)
      if (m.name == n) return &m;
    return nullptr;
  }
  const PointDecl* point(const std::string& n) const {
    for (const auto& p : points)
      if (p.name == n) return &p;
    return nullptr;
  }
  const SequenceDecl* sequence(const std::string& n) const {
    for (const auto& s : sequences)
      if (s.name == n) return &s;
    return nullptr;
  }
};

// ---- registries -------------------------------------------------------

using OracleFactory = std::function<RuleFn(const MapPresentation&)>;

inline const std::map<std::string, OracleFactory>& oracle_registry() {
  static const std::map<std::string, OracleFactory> r{
      {"example-b",
       [](const MapPresentation& m) -> RuleFn {
         int a = corpus::emitter_named(m.target, "A");
         return [a](const Point& x) { return corpus::example_b_rule(x, a); };
       }},
      {"example-d",
       [](const MapPresentation& m) -> RuleFn {
         int p = corpus::emitter_named(m.target, "P"), q = corpus::emitter_named(m.target, "Q");
         return [p, q](const Point& x) { return corpus::example_d_rule(x, p, q); };
       }},
  };
  return r;
}

namespace detail {

inline EdgeRef pick(const EdgeSet& s, Index at_least_magnitude) {
  auto far = s.beyond(at_least_magnitude, 1);
  if (!far.empty()) return far.front();
  auto near = s.closest_to_zero(1);
  if (near.empty()) throw Error(ErrorKind::InvalidPath, "generator reached an edge with no successor");
  return near.front();
}

}  // namespace detail

/// `escape`: x_n is the successor of x_{n-1} closest to zero with |index| >= n.
/// `smallest`: x_n is the successor of x_{n-1} closest to zero.
inline std::optional<Point> builtin_generator(const ShiftSpace& sp, const std::string& name) {
  bool escape = name == "escape";
  if (!escape && name != "smallest") return std::nullopt;
  auto fn = [sp, escape](std::size_t n) {
    EdgeRef e = detail::pick(sp.graph().all_edges(), escape ? 1 : 0);
    for (std::size_t i = 2; i <= n; ++i) e = detail::pick(sp.successors(e), escape ? static_cast<Index>(i) : 0);
    return e;
  };
  return Point::generated(name, fn);
}

// ---- parser -----------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : c_(text) {}

  Document document() {
    Document d;
    while (!c_.eof()) {
      if (c_.at("ultragraph")) d.graphs.emplace_back(graph(d));
      else if (c_.at("map")) d.maps.push_back(map(d));
      else if (c_.at("point")) d.points.push_back(point_decl(d));
      else if (c_.at("sequence")) d.sequences.push_back(sequence(d));
      else if (c_.at("check")) d.checks.push_back(directive(d));
      else c_.fail("expected a declaration" + c_.found(), "declarations start with ultragraph, map, point, sequence or check");
    }
    return d;
  }

  /// A single point literal over `sp`.
  Point point_only(const ShiftSpace& sp) {
    Point p = point_literal(sp);
    if (!c_.eof()) c_.fail("unexpected text after point" + c_.found());
    return p;
  }

  /// A single edge or emitter name over `sp`.
  Symbol symbol_only(const ShiftSpace& sp) {
    Symbol s = *symbol(sp, nullptr).symbol;
    if (!c_.eof()) c_.fail("unexpected text after symbol" + c_.found());
    return s;
  }

 private:
  // ---- graphs ----

  std::string fresh_name(const std::string& what, bool taken) {
    std::size_t at = (c_.ws(), c_.pos());
    std::string n = c_.ident(what + " name");
    if (taken) c_.fail_at(at, ErrorKind::Semantic, "duplicate " + what + " '" + n + "'");
    return n;
  }

  Ultragraph graph(const Document& d) {
    c_.expect("ultragraph");
    std::size_t at = (c_.ws(), c_.pos());
    Ultragraph g;
    g.name = c_.ident("graph name");
    if (d.graph(g.name)) c_.fail_at(at, ErrorKind::Semantic, "duplicate graph '" + g.name + "'");
    c_.expect("{");
    while (!c_.accept("}")) {
      if (c_.accept("vertices")) {
        at = (c_.ws(), c_.pos());
        std::string n = c_.ident("vertex family name");
        if (g.vertex_family(n)) c_.fail_at(at, ErrorKind::Semantic, "duplicate vertex family '" + n + "'");
        c_.expect("over", "vertices NAME over DOMAIN");
        IndexSet dom = c_.index_set();
        if (dom.is_empty()) c_.fail_at(at, ErrorKind::Semantic, "empty vertex domain");
        g.add_vertex_family(n, dom);
      } else if (c_.at("edges")) {
        edge_family(g);
      } else if (c_.accept("set")) {
        at = (c_.ws(), c_.pos());
        std::string n = c_.ident("set name");
        if (g.named_set(n) || g.edge_family(n))
          c_.fail_at(at, ErrorKind::Semantic, "name '" + n + "' is already used", "set names must differ from edge families");
        c_.expect("=");
        auto [s, ps] = vertex_set(g, false);
        g.named_sets.push_back({n, s});
      } else {
        c_.fail("expected vertices, edges, set or '}'" + c_.found());
      }
    }
    return g;
  }

  void edge_family(Ultragraph& g) {
    c_.expect("edges");
    std::size_t at = (c_.ws(), c_.pos());
    EdgeFamily f;
    f.name = c_.ident("edge family name");
    if (g.edge_family(f.name) || g.named_set(f.name))
      c_.fail_at(at, ErrorKind::Semantic, "duplicate edge family '" + f.name + "'");
    c_.expect("over", "edges NAME over DOMAIN { ... }");
    f.domain = c_.index_set();
    std::size_t sources = 0, ranges = 0;
    c_.expect("{");
    while (!c_.accept("}")) {
      if (c_.accept("source")) {
        std::size_t vat = (c_.ws(), c_.pos());
        std::string vn = c_.ident("vertex family");
        auto vf = g.vertex_family(vn);
        if (!vf) unknown_vertex_family(g, vat, vn);
        AffineIndexMap m = AffineIndexMap::constant(0);
        if (c_.accept("[")) {
          m = c_.affine("k");
          c_.expect("]");
        } else if (g.vertex_families[*vf].domain.card() != std::optional<std::uint64_t>(1)) {
          c_.fail_at(vat, ErrorKind::Semantic, "vertex family '" + vn + "' needs an index", vn + "[k]");
        } else {
          m = AffineIndexMap::constant(g.vertex_families[*vf].domain.intervals().front().lo);
        }
        if (*vf >= 0 && m.scale == 0 && !g.vertex_families[*vf].domain.contains(m.offset))
          c_.fail_at(vat, ErrorKind::Semantic, "index out of domain for '" + vn + "'",
                     "domain is " + g.vertex_families[*vf].domain.to_string());
        IndexSet w = guard(f.domain);
        ++sources;
        if (!w.is_empty()) f.source.push_back({w, *vf, m});
      } else if (c_.accept("range")) {
        auto [s, ps] = vertex_set(g, true);
        IndexSet w = guard(f.domain);
        ++ranges;
        if (!w.is_empty()) f.range.push_back({w, s, ps});
      } else {
        c_.fail("expected source, range or '}'" + c_.found());
      }
    }
    if (!sources) c_.fail_at(at, ErrorKind::Semantic, "edge family '" + f.name + "' has no source clause");
    if (!ranges) c_.fail_at(at, ErrorKind::Semantic, "edge family '" + f.name + "' has no range clause");
    g.add_edge_family(std::move(f));
  }

  /// Optional `when k == c and k >= c ...`, intersected with the domain.
  IndexSet guard(const IndexSet& domain) {
    if (!c_.accept("when")) return domain;
    IndexSet g = IndexSet::all();
    do {
      std::size_t at = (c_.ws(), c_.pos());
      std::string v = c_.ident("guard variable");
      if (v != "k") c_.fail_at(at, ErrorKind::Semantic, "guards compare the edge index k", "when k >= 1");
      if (c_.accept("==")) g = g.intersect(IndexSet::point(c_.integer()));
      else if (c_.accept(">=")) g = g.intersect(IndexSet::at_least(c_.integer()));
      else if (c_.accept("<=")) g = g.intersect(IndexSet::at_most(c_.integer()));
      else c_.fail("expected ==, >= or <=" + c_.found());
    } while (c_.accept("and") || c_.accept("&&"));
    return g.intersect(domain);
  }

  [[noreturn]] void unknown_vertex_family(const Ultragraph& g, std::size_t at, const std::string& n) {
    std::string known;
    for (const auto& v : g.vertex_families) known += (known.empty() ? "" : ", ") + v.name;
    c_.fail_at(at, ErrorKind::Semantic, "unknown vertex family '" + n + "'",
               known.empty() ? "declare vertices first" : "known families: " + known);
  }

  std::pair<VertexSet, std::vector<ParamVertex>> vertex_set(const Ultragraph& g, bool allow_param) {
    VertexSet s;
    std::vector<ParamVertex> ps;
    if (c_.accept("{}")) return {s, ps};
    do {
      std::size_t at = (c_.ws(), c_.pos());
      if (c_.accept("all")) {
        c_.expect("(");
        std::size_t fat = (c_.ws(), c_.pos());
        std::string n = c_.ident("vertex family");
        auto vf = g.vertex_family(n);
        if (!vf) unknown_vertex_family(g, fat, n);
        c_.expect(")");
        s = s.unite(VertexSet::single(*vf, g.vertex_families[*vf].domain));
        continue;
      }
      std::string n = c_.ident("vertex family or set name");
      auto vf = g.vertex_family(n);
      if (!vf) {
        if (auto named = g.named_set(n)) {
          s = s.unite(*named);
          continue;
        }
        unknown_vertex_family(g, at, n);
      }
      const IndexSet& dom = g.vertex_families[*vf].domain;
      if (!c_.accept("[")) {
        if (dom.card() != std::optional<std::uint64_t>(1))
          c_.fail_at(at, ErrorKind::Semantic, "vertex family '" + n + "' needs an index", n + "[0], " + n + "[>=1] or all(" + n + ")");
        s = s.unite(VertexSet::single(*vf, dom));
        continue;
      }
      IndexSet part;
      if (c_.accept(">=")) {
        part = IndexSet::at_least(c_.integer());
      } else if (c_.accept("<=")) {
        part = IndexSet::at_most(c_.integer());
      } else {
        std::size_t iat = (c_.ws(), c_.pos());
        AffineIndexMap m = c_.affine(allow_param ? "k" : "");
        if (m.scale != 0) {
          if (!allow_param) c_.fail_at(iat, ErrorKind::Semantic, "parametric vertex outside an edge family", "use a fixed index");
          ps.push_back({*vf, m});
          c_.expect("]");
          continue;
        }
        if (c_.accept("..")) {
          Index b = c_.integer();
          part = IndexSet::range(m.offset, b);
        } else {
          part = IndexSet::point(m.offset);
          if (!dom.contains(m.offset)) c_.fail_at(iat, ErrorKind::Semantic, "index out of domain for '" + n + "'", "domain is " + dom.to_string());
        }
      }
      c_.expect("]");
      s = s.unite(VertexSet::single(*vf, part.intersect(dom)));
    } while (c_.accept(","));
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return {s, ps};
  }

  const ShiftSpace& space(const Document& d, std::size_t* at_out = nullptr) {
    std::size_t at = (c_.ws(), c_.pos());
    std::string n = c_.ident("graph name");
    const ShiftSpace* sp = d.graph(n);
    if (!sp) c_.fail_at(at, ErrorKind::Semantic, "unknown graph '" + n + "'", "declare it with ultragraph " + n + " { ... }");
    if (at_out) *at_out = at;
    return *sp;
  }

  // ---- symbols and points ----

  int emitter(const ShiftSpace& sp) {
    std::size_t at = (c_.ws(), c_.pos());
    VertexSet s;
    std::string shown;
    if (c_.accept("{")) {
      s = vertex_set(sp.graph(), false).first;
      c_.expect("}");
      shown = "{" + sp.graph().format(s) + "}";
    } else {
      shown = c_.ident("emitter name");
      auto named = sp.graph().named_set(shown);
      if (!named) c_.fail_at(at, ErrorKind::Semantic, "unknown set '" + shown + "' in " + sp.name(), "declare it with set " + shown + " = ...");
      s = *named;
    }
    auto id = sp.emitter_id(s);
    if (!id) c_.fail_at(at, ErrorKind::Semantic, shown + " is not a minimal infinite emitter of " + sp.name());
    return *id;
  }

  struct SymbolRef {
    std::optional<Symbol> symbol;
    int family = -1;
    AffineIndexMap map;
  };

  /// An edge, an emitter, or (when `var` is non-null) family[affine(var)].
  SymbolRef symbol(const ShiftSpace& sp, std::string* var) {
    std::size_t at = (c_.ws(), c_.pos());
    if (c_.peek() == '{') return {Symbol::emitter_symbol(emitter(sp)), -1, {}};
    std::string n = c_.ident("symbol");
    const Ultragraph& g = sp.graph();
    auto ef = g.edge_family(n);
    if (!ef) {
      c_.reset(at);
      return {Symbol::emitter_symbol(emitter(sp)), -1, {}};
    }
    const IndexSet& dom = g.edge_families[*ef].domain;
    if (!c_.accept("[")) {
      if (dom.card() != std::optional<std::uint64_t>(1))
        c_.fail_at(at, ErrorKind::Semantic, "edge family '" + n + "' needs an index", n + "[1]");
      return {Symbol::of(EdgeRef{*ef, dom.intervals().front().lo}), -1, {}};
    }
    std::size_t iat = (c_.ws(), c_.pos());
    AffineIndexMap m = var ? c_.affine("", var) : c_.affine("");
    c_.expect("]");
    if (m.scale == 0) {
      if (!dom.contains(m.offset)) c_.fail_at(iat, ErrorKind::Semantic, "index out of domain for '" + n + "'", "domain is " + dom.to_string());
      return {Symbol::of(EdgeRef{*ef, m.offset}), -1, {}};
    }
    if (!var) c_.fail_at(iat, ErrorKind::Semantic, "free index not allowed here", "use a fixed index such as " + n + "[1]");
    return {std::nullopt, *ef, m};
  }

  EdgeRef edge(const ShiftSpace& sp) {
    std::size_t at = (c_.ws(), c_.pos());
    SymbolRef r = symbol(sp, nullptr);
    if (!r.symbol->is_edge()) c_.fail_at(at, ErrorKind::Semantic, "expected an edge, found an emitter");
    return r.symbol->edge;
  }

  bool at_edge(const ShiftSpace& sp) {
    if (!c_.at_ident()) return false;
    std::size_t p = c_.pos();
    std::string n = c_.ident("edge");
    c_.reset(p);
    return sp.graph().edge_family(n).has_value();
  }

  Point point_literal(const ShiftSpace& sp) {
    std::size_t at = (c_.ws(), c_.pos());
    Point x;
    if (c_.accept("fin:")) {
      std::vector<EdgeRef> path;
      while (!c_.at("|")) path.push_back(edge(sp));
      c_.expect("|");
      x = Point::finite(std::move(path), emitter(sp));
    } else if (c_.accept("inf:")) {
      std::vector<EdgeRef> pre, cyc;
      while (!c_.at("(")) pre.push_back(edge(sp));
      c_.expect("(");
      while (!c_.at(")")) cyc.push_back(edge(sp));
      c_.expect(")");
      if (c_.raw() != '*') c_.fail("expected ')*' closing the cycle");
      c_.reset(c_.pos() + 1);
      if (cyc.empty()) c_.fail_at(at, ErrorKind::Semantic, "empty cycle");
      x = Point::periodic(std::move(pre), std::move(cyc));
    } else if (c_.accept("gen:")) {
      std::size_t gat = (c_.ws(), c_.pos());
      std::string n = c_.dashed("generator name");
      auto p = builtin_generator(sp, n);
      if (!p) c_.fail_at(gat, ErrorKind::Semantic, "unknown generator '" + n + "'", "built-in generators: escape, smallest");
      x = *p;
    } else {
      c_.fail("expected a point literal" + c_.found(), "fin: e[0] | A, inf: e[0] (e[2])* or gen: NAME");
    }
    if (x.exact()) {
      auto issues = point_issues(sp, x);
      if (!issues.empty()) c_.fail_at(at, ErrorKind::Semantic, "invalid point: " + issues.front());
    }
    return x;
  }

  PointDecl point_decl(const Document& d) {
    c_.expect("point");
    std::string n = fresh_name("point", false);
    if (d.point(n)) c_.fail("duplicate point '" + n + "'");
    c_.expect("on", "point NAME on GRAPH = LITERAL");
    const ShiftSpace& sp = space(d);
    c_.expect("=");
    return {n, sp.name(), point_literal(sp)};
  }

  TemplateEdge template_edge(const ShiftSpace& sp) {
    std::size_t at = (c_.ws(), c_.pos());
    std::string n = c_.ident("edge family");
    auto ef = sp.graph().edge_family(n);
    if (!ef) c_.fail_at(at, ErrorKind::Semantic, "unknown edge family '" + n + "'");
    const IndexSet& dom = sp.graph().edge_families[*ef].domain;
    if (!c_.accept("[")) {
      if (dom.card() != std::optional<std::uint64_t>(1)) c_.fail_at(at, ErrorKind::Semantic, "edge family '" + n + "' needs an index");
      return {*ef, AffineIndexMap::constant(dom.intervals().front().lo)};
    }
    AffineIndexMap m = c_.affine("n");
    c_.expect("]");
    return {*ef, m};
  }

  SequenceDecl sequence(const Document& d) {
    c_.expect("sequence");
    SequenceDecl s;
    s.name = fresh_name("sequence", false);
    if (d.sequence(s.name)) c_.fail("duplicate sequence '" + s.name + "'");
    c_.expect("on", "sequence NAME on GRAPH = LITERAL");
    const ShiftSpace& sp = space(d);
    s.graph = sp.name();
    c_.expect("=");
    if (c_.accept("fin:")) s.finite = true;
    else if (c_.accept("inf:")) s.finite = false;
    else c_.fail("expected fin: or inf:" + c_.found());
    while (true) {
      if (s.finite && c_.accept("|")) {
        s.tail = emitter(sp);
        break;
      }
      if (c_.accept("(")) {
        TemplatePart p;
        while (!c_.at(")")) p.edges.push_back(template_edge(sp));
        c_.expect(")");
        if (p.edges.empty()) c_.fail("empty block");
        if (c_.raw() == '^') {
          c_.reset(c_.pos() + 1);
          p.power = c_.affine("n", nullptr, false);
          s.parts.push_back(std::move(p));
          continue;
        }
        if (!s.finite && c_.raw() == '*') {
          c_.reset(c_.pos() + 1);
          s.cycle = std::move(p.edges);
          break;
        }
        c_.fail("expected ')^n' or ')*' after a block");
      }
      if (c_.eof()) c_.fail("unterminated sequence literal");
      s.parts.push_back({{template_edge(sp)}, std::nullopt});
    }
    return s;
  }

  // ---- maps ----

  MapPresentation map(const Document& d) {
    c_.expect("map");
    std::size_t at = (c_.ws(), c_.pos());
    std::string n = c_.ident("map name");
    if (d.map(n)) c_.fail_at(at, ErrorKind::Semantic, "duplicate map '" + n + "'");
    c_.expect(":", "map NAME : SOURCE -> TARGET { ... }");
    const ShiftSpace& src = space(d);
    c_.expect("->");
    const ShiftSpace& tgt = space(d);
    MapPresentation m{n, src, tgt, {}};
    std::map<std::string, std::shared_ptr<const RuleFn>> rules;
    c_.expect("{");
    while (!c_.accept("}")) {
      if (!c_.at("class")) c_.fail("expected class or '}'" + c_.found());
      m.classes.push_back(map_class(m, rules));
    }
    return m;
  }

  MapClass map_class(const MapPresentation& m, std::map<std::string, std::shared_ptr<const RuleFn>>& rules) {
    c_.expect("class");
    std::size_t at = (c_.ws(), c_.pos());
    std::string var;
    SymbolRef t = symbol(m.target, &var);
    MapClass c;
    if (t.symbol) {
      c.target = ClassTarget::fixed(*t.symbol);
    } else {
      c.target = ClassTarget::of_family(t.family, t.map);
      c.param = t.map.preimage(m.target.graph().edge_families[t.family].domain);
    }
    if (c_.accept("for")) {
      std::size_t vat = (c_.ws(), c_.pos());
      std::string v = c_.ident("index variable");
      if (!t.symbol && v != var) c_.fail_at(vat, ErrorKind::Semantic, "class index is '" + var + "', not '" + v + "'");
      if (t.symbol) c_.fail_at(vat, ErrorKind::Semantic, "fixed target takes no 'for' clause");
      c_.expect("in");
      c.param = c_.index_set().intersect(c.param);
    } else if (!t.symbol) {
      c_.fail_at(at, ErrorKind::Semantic, "family target needs 'for " + var + " in ISET'");
    }
    if (var.empty()) var = "j";
    c_.expect("{");
    while (!c_.accept("}")) {
      if (c_.at("pc")) {
        c.items.push_back(pattern(m.source, var, c));
      } else if (c_.accept("point")) {
        Point x = point_literal(m.source);
        std::optional<Index> j;
        if (c_.accept("with")) {
          std::size_t vat = (c_.ws(), c_.pos());
          std::string v = c_.ident("index variable");
          if (v != var) c_.fail_at(vat, ErrorKind::Semantic, "class index is '" + var + "'");
          c_.expect("=");
          j = c_.integer();
        }
        c.items.push_back(PointItem{x, j});
      } else if (c_.accept("oracle")) {
        std::size_t oat = (c_.ws(), c_.pos());
        std::string n = c_.dashed("oracle name");
        auto it = oracle_registry().find(n);
        if (it == oracle_registry().end())
          c_.fail_at(oat, ErrorKind::Semantic, "unknown oracle '" + n + "'", "built-in oracles: example-b, example-d");
        auto& rule = rules[n];
        if (!rule) {
          try {
            rule = std::make_shared<const RuleFn>(it->second(m));
          } catch (const Error& e) {
            c_.fail_at(oat, ErrorKind::Semantic, std::string("oracle '") + n + "' does not fit this map: " + e.what());
          }
        }
        c.items.push_back(OracleItem{n, rule});
      } else {
        c_.fail("expected pc, point, oracle or '}'" + c_.found());
      }
    }
    return c;
  }

  Pattern pattern(const ShiftSpace& sp, const std::string& var, const MapClass& cls) {
    c_.expect("pc");
    std::size_t at = (c_.ws(), c_.pos());
    Pattern p;
    Index k = c_.integer();
    if (k < 1) c_.fail_at(at, ErrorKind::Semantic, "anchor must be at least 1");
    p.anchor = static_cast<std::size_t>(k);
    c_.expect("..");
    std::optional<Index> last;
    if (!c_.accept("*")) last = c_.integer();
    c_.expect(":", "pc K..L : ATOMS");
    std::string used = cls.target.kind == ClassTarget::Kind::Family ? var : "";
    while (!(c_.at(";") || c_.at("}") || c_.at("pc") || c_.at("point") || c_.at("oracle") || c_.eof())) {
      std::size_t aat = (c_.ws(), c_.pos());
      if (c_.accept("*")) {
        p.atoms.push_back(Atom::any());
      } else if (c_.accept("rep")) {
        c_.expect("(");
        SymbolRef r = symbol(sp, nullptr);
        c_.expect(")");
        if (p.has_rep()) c_.fail_at(aat, ErrorKind::Unsupported, "second rep atom", "schemas admit one repetition atom");
        p.atoms.push_back(Atom::rep(*r.symbol));
      } else {
        SymbolRef r = symbol(sp, &used);
        p.atoms.push_back(r.symbol ? Atom::literal(*r.symbol) : Atom::of_family(r.family, r.map));
      }
    }
    if (p.atoms.empty()) c_.fail_at(at, ErrorKind::Semantic, "pattern has no atoms");
    if (p.has_rep() != !last.has_value())
      c_.fail_at(at, ErrorKind::Semantic, "window end must be '*' exactly when the pattern has a rep atom");
    if (last && *last != k + static_cast<Index>(p.atoms.size()) - 1)
      c_.fail_at(at, ErrorKind::Semantic, "window " + std::to_string(k) + ".." + std::to_string(*last) + " does not match " +
                                              std::to_string(p.atoms.size()) + " atoms");
    if (c_.accept(";")) {
      std::size_t vat = (c_.ws(), c_.pos());
      std::string v = c_.ident("index variable");
      if (!used.empty() && v != used) c_.fail_at(vat, ErrorKind::Semantic, "pattern index is '" + used + "'");
      c_.expect("in");
      p.param = c_.index_set();
    } else if (cls.target.kind == ClassTarget::Kind::Family) {
      p.param = cls.param;
    }
    if (!p.uses_param()) p.param = IndexSet::all();
    return p;
  }

  CheckDirective directive(const Document& d) {
    c_.expect("check");
    std::size_t at = (c_.ws(), c_.pos());
    std::string k = c_.dashed("check kind");
    const auto& ks = check_kinds();
    if (std::find(ks.begin(), ks.end(), k) == ks.end())
      c_.fail_at(at, ErrorKind::Semantic, "unknown check '" + k + "'", "commute, csc, genchl or length-preserving");
    at = (c_.ws(), c_.pos());
    std::string m = c_.ident("map name");
    if (!d.map(m)) c_.fail_at(at, ErrorKind::Semantic, "unknown map '" + m + "'");
    return {k, m};
  }

  Cursor c_;
};

inline Document parse(std::string_view text) { return Parser(text).document(); }

/// Parses a point literal over `sp`, or looks up a declared point by name.
inline Point parse_point(const ShiftSpace& sp, std::string_view text, const Document* doc = nullptr) {
  if (doc)
    if (const PointDecl* p = doc->point(std::string(text))) {
      if (p->graph != sp.name())
        throw Error(ErrorKind::Semantic, "point '" + p->name + "' lies in " + p->graph + ", not " + sp.name());
      return p->point;
    }
  return Parser(text).point_only(sp);
}

inline Symbol parse_symbol(const ShiftSpace& sp, std::string_view text) { return Parser(text).symbol_only(sp); }

}  // namespace ultrashift::dsl
