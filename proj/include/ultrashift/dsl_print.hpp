// Canonical .ug text for documents, and structural document equality.
#pragma once

#include <sstream>
#include <string>

#include "ultrashift/dsl.hpp"

namespace ultrashift::dsl {

namespace detail {

inline std::string domain_text(const IndexSet& d) {
  if (d == IndexSet::at_least(0)) return "N";
  if (d == IndexSet::all()) return "Z";
  if (d == domains::nonzero()) return "Z*";
  if (d.intervals().size() == 1) {
    const Interval& i = d.intervals().front();
    if (i.hi == kPosInf && i.lo > 0) return "N>=" + std::to_string(i.lo);
    if (i.lo != kNegInf && i.hi != kPosInf && i.lo != i.hi) return "[" + std::to_string(i.lo) + ".." + std::to_string(i.hi) + "]";
  }
  return d.to_string();
}

inline std::string indexed(const std::string& fam, const IndexSet& dom, const AffineIndexMap& m, const std::string& var) {
  if (m.scale == 0 && dom.card() == std::optional<std::uint64_t>(1)) return fam;
  return fam + "[" + m.to_string(var) + "]";
}

/// Conjunctions for each interval of `g`.
inline std::vector<std::string> guard_texts(const IndexSet& g, const IndexSet& domain) {
  if (g == domain) return {""};
  std::vector<std::string> out;
  for (const auto& i : g.intervals()) {
    if (i.lo == i.hi) out.push_back(" when k == " + std::to_string(i.lo));
    else if (i.lo == kNegInf && i.hi == kPosInf) out.push_back("");
    else if (i.lo == kNegInf) out.push_back(" when k <= " + std::to_string(i.hi));
    else if (i.hi == kPosInf) out.push_back(" when k >= " + std::to_string(i.lo));
    else out.push_back(" when k >= " + std::to_string(i.lo) + " and k <= " + std::to_string(i.hi));
  }
  return out;
}

inline std::string vertex_set_text(const Ultragraph& g, const VertexSet& s, const std::vector<ParamVertex>& ps) {
  std::vector<std::string> terms;
  for (const auto& [f, set] : s.parts()) {
    const auto& vf = g.vertex_families[f];
    if (set == vf.domain) {
      terms.push_back("all(" + vf.name + ")");
      continue;
    }
    for (const auto& i : set.intervals()) {
      if (i.lo == i.hi) terms.push_back(indexed(vf.name, vf.domain, AffineIndexMap::constant(i.lo), "k"));
      else if (i.lo == kNegInf) terms.push_back(vf.name + "[<=" + std::to_string(i.hi) + "]");
      else if (i.hi == kPosInf) terms.push_back(vf.name + "[>=" + std::to_string(i.lo) + "]");
      else terms.push_back(vf.name + "[" + std::to_string(i.lo) + ".." + std::to_string(i.hi) + "]");
    }
  }
  for (const auto& p : ps) terms.push_back(g.vertex_families[p.vertex_family].name + "[" + p.map.to_string("k") + "]");
  if (terms.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? ", " : "") + terms[i];
  return out;
}

inline std::string template_edge_text(const ShiftSpace& sp, const TemplateEdge& e) {
  const auto& ef = sp.graph().edge_families[e.family];
  return indexed(ef.name, ef.domain, e.map, "n");
}

}  // namespace detail

inline std::string print(const Ultragraph& g) {
  std::ostringstream os;
  os << "ultragraph " << g.name << " {\n";
  for (const auto& v : g.vertex_families) os << "  vertices " << v.name << " over " << detail::domain_text(v.domain) << "\n";
  for (const auto& e : g.edge_families) {
    os << "  edges " << e.name << " over " << detail::domain_text(e.domain) << " {\n";
    for (const auto& s : e.source) {
      const auto& vf = g.vertex_families[s.vertex_family];
      for (const auto& w : detail::guard_texts(s.guard.intersect(e.domain), e.domain))
        os << "    source " << detail::indexed(vf.name, vf.domain, s.map, "k") << w << "\n";
    }
    for (const auto& r : e.range)
      for (const auto& w : detail::guard_texts(r.guard.intersect(e.domain), e.domain))
        os << "    range " << detail::vertex_set_text(g, r.constant, r.parametric) << w << "\n";
    os << "  }\n";
  }
  for (const auto& [n, s] : g.named_sets) os << "  set " << n << " = " << detail::vertex_set_text(g, s, {}) << "\n";
  os << "}\n";
  return os.str();
}

inline std::string print(const MapPresentation& m) {
  std::ostringstream os;
  os << "map " << m.name << " : " << m.source.name() << " -> " << m.target.name() << " {\n";
  for (const auto& c : m.classes) {
    os << "  class ";
    if (c.target.kind == ClassTarget::Kind::Fixed) {
      os << m.target.name(c.target.symbol);
    } else {
      os << m.target.graph().edge_families[c.target.family].name << "[" << c.target.map.to_string("j") << "] for j in "
         << detail::domain_text(c.param);
    }
    os << " {\n";
    for (const auto& it : c.items) {
      os << "    ";
      if (const auto* p = std::get_if<Pattern>(&it)) {
        os << p->to_string(m.source);
      } else if (const auto* pt = std::get_if<PointItem>(&it)) {
        os << "point " << pt->point.to_string(m.source);
        if (pt->param) os << " with j = " << *pt->param;
      } else {
        os << "oracle " << std::get<OracleItem>(it).name;
      }
      os << "\n";
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string print(const SequenceDecl& s, const ShiftSpace& sp) {
  std::ostringstream os;
  os << "sequence " << s.name << " on " << s.graph << " = " << (s.finite ? "fin:" : "inf:");
  for (const auto& p : s.parts) {
    if (!p.power) {
      for (const auto& e : p.edges) os << ' ' << detail::template_edge_text(sp, e);
      continue;
    }
    os << " (";
    for (std::size_t i = 0; i < p.edges.size(); ++i) os << (i ? " " : "") << detail::template_edge_text(sp, p.edges[i]);
    os << ")^" << p.power->to_string("n");
  }
  if (s.finite) {
    os << " | " << sp.emitter_name(s.tail);
  } else {
    os << " (";
    for (std::size_t i = 0; i < s.cycle.size(); ++i) os << (i ? " " : "") << detail::template_edge_text(sp, s.cycle[i]);
    os << ")*";
  }
  return os.str();
}

inline std::string print(const Document& d) {
  std::ostringstream os;
  auto sep = [&, first = true]() mutable {
    if (!first) os << "\n";
    first = false;
  };
  for (const auto& g : d.graphs) {
    sep();
    os << print(g.graph());
  }
  for (const auto& m : d.maps) {
    sep();
    os << print(m);
  }
  if (!d.points.empty() || !d.sequences.empty()) sep();
  for (const auto& p : d.points) os << "point " << p.name << " on " << p.graph << " = " << p.point.to_string(*d.graph(p.graph)) << "\n";
  for (const auto& s : d.sequences) os << print(s, *d.graph(s.graph)) << "\n";
  if (!d.checks.empty()) sep();
  for (const auto& c : d.checks) os << "check " << c.check << " " << c.map << "\n";
  return os.str();
}

// ---- equality ---------------------------------------------------------

inline bool same_point(const ShiftSpace& sp, const Point& a, const Point& b) {
  if (a.is_generated() || b.is_generated()) return a.to_string(sp) == b.to_string(sp);
  return a == b;
}

inline bool same_item(const ShiftSpace& sp, const ClassItem& a, const ClassItem& b) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<Pattern>(&a)) return *p == std::get<Pattern>(b);
  if (const auto* p = std::get_if<PointItem>(&a)) {
    const auto& q = std::get<PointItem>(b);
    return p->param == q.param && same_point(sp, p->point, q.point);
  }
  return std::get<OracleItem>(a).name == std::get<OracleItem>(b).name;
}

inline bool same_map(const MapPresentation& a, const MapPresentation& b) {
  if (a.name != b.name || a.source.graph() != b.source.graph() || a.target.graph() != b.target.graph() ||
      a.classes.size() != b.classes.size())
    return false;
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const MapClass &x = a.classes[i], &y = b.classes[i];
    if (x.target.kind != y.target.kind || x.param != y.param || x.items.size() != y.items.size()) return false;
    if (x.target.kind == ClassTarget::Kind::Fixed ? x.target.symbol != y.target.symbol
                                                   : (x.target.family != y.target.family || x.target.map != y.target.map))
      return false;
    for (std::size_t k = 0; k < x.items.size(); ++k)
      if (!same_item(a.source, x.items[k], y.items[k])) return false;
  }
  return true;
}

inline bool same_document(const Document& a, const Document& b) {
  if (a.graphs.size() != b.graphs.size() || a.maps.size() != b.maps.size() || a.points.size() != b.points.size() ||
      a.sequences != b.sequences || a.checks != b.checks)
    return false;
  for (std::size_t i = 0; i < a.graphs.size(); ++i)
    if (a.graphs[i].graph() != b.graphs[i].graph()) return false;
  for (std::size_t i = 0; i < a.maps.size(); ++i)
    if (!same_map(a.maps[i], b.maps[i])) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto &p = a.points[i], &q = b.points[i];
    if (p.name != q.name || p.graph != q.graph || !same_point(*a.graph(p.graph), p.point, q.point)) return false;
  }
  return true;
}

}  // namespace ultrashift::dsl
