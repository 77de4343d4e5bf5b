// Ultrapaths (α, A), concatenation, prefixes, and the block language.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/point.hpp"
#include "ultrashift/shift_space.hpp"

namespace ultrashift {

/// (α, A) with A ⊆ r(α_last), or a bare A of length zero.
struct Ultrapath {
  std::vector<EdgeRef> edges;
  VertexSet terminal;

  std::size_t length() const { return edges.size(); }
  static Ultrapath zero(VertexSet a) { return {{}, std::move(a)}; }
  friend bool operator==(const Ultrapath&, const Ultrapath&) = default;
};

using Block = std::vector<Symbol>;

struct PathCheck {
  std::vector<std::string> issues;
  std::vector<std::string> warnings;
  bool ok() const { return issues.empty(); }
};

inline PathCheck check_ultrapath(const ShiftSpace& sp, const Ultrapath& y) {
  PathCheck c;
  sp.graph().check(y.terminal);
  if (y.terminal.is_empty()) c.issues.push_back("terminal set is empty");
  for (std::size_t i = 0; i < y.edges.size(); ++i) {
    if (!sp.has_edge(y.edges[i])) {
      c.issues.push_back("edge " + std::to_string(i + 1) + " not in graph");
      return c;
    }
    if (i > 0 && !sp.follows(y.edges[i - 1], y.edges[i]))
      c.issues.push_back("s(α_" + std::to_string(i + 1) + ") not in r(α_" + std::to_string(i) + ")");
  }
  if (!y.edges.empty() && !y.terminal.subset_of(sp.range(y.edges.back())))
    c.issues.push_back("terminal not contained in r(" + sp.edge_name(y.edges.back()) + ")");
  auto m = sp.in_g0(y.terminal);
  if (m.answer == G0Answer::No) c.issues.push_back("terminal not in the vertex algebra: " + m.witness);
  if (m.answer == G0Answer::Unknown) c.warnings.push_back("terminal membership undetermined: " + m.witness);
  return c;
}

inline void require_valid(const ShiftSpace& sp, const Ultrapath& y) {
  auto c = check_ultrapath(sp, y);
  if (!c.ok()) throw Error(ErrorKind::InvalidPath, c.issues.front());
}

/// Source of an ultrapath: s(y_1), or the bare set itself for |y| = 0.
inline bool compatible(const ShiftSpace& sp, const VertexSet& range_x, const Ultrapath& y) {
  if (y.edges.empty()) return y.terminal.subset_of(range_x);
  auto s = sp.source(y.edges.front());
  return s && range_x.contains(*s);
}

inline Ultrapath concat(const ShiftSpace& sp, const Ultrapath& x, const Ultrapath& y) {
  if (!compatible(sp, x.terminal, y)) throw Error(ErrorKind::InvalidPath, "concatenation: source of y not in range of x");
  if (x.edges.empty()) return y;
  Ultrapath out = x;
  out.edges.insert(out.edges.end(), y.edges.begin(), y.edges.end());
  out.terminal = y.terminal;
  return out;
}

/// x·z for a point z; requires s(z) ∈ r(x) (|z| ≥ 1) or z = (BB...) with B ⊆ r(x).
inline Point concat(const ShiftSpace& sp, const Ultrapath& x, const Point& z) {
  Symbol first = z.coordinate(1);
  bool ok = first.is_edge() ? [&] {
    auto s = sp.source(first.edge);
    return s && x.terminal.contains(*s);
  }()
                            : sp.emitter(first.emitter).subset_of(x.terminal);
  if (!ok) throw Error(ErrorKind::InvalidPath, "concatenation: point does not start inside the terminal set");
  if (x.edges.empty()) return z;
  if (z.is_finite()) {
    auto path = x.edges;
    path.insert(path.end(), z.as_finite().path.begin(), z.as_finite().path.end());
    return Point::finite(std::move(path), z.as_finite().tail);
  }
  if (z.is_periodic()) {
    auto pre = x.edges;
    pre.insert(pre.end(), z.as_periodic().preamble.begin(), z.as_periodic().preamble.end());
    return Point::periodic(std::move(pre), z.as_periodic().cycle);
  }
  auto head = x.edges;
  Point tail = z;
  std::size_t k = head.size();
  StreamFn fn = [head, tail, k](std::size_t n) { return n <= k ? head[n - 1] : tail.edge_at(n - k); };
  return Point::generated(z.as_generated().name + "@" + std::to_string(k), fn, k + z.depth());
}

/// Remainder z with x = y·z, when y is a prefix of x.
inline std::optional<Ultrapath> is_prefix(const ShiftSpace& sp, const Ultrapath& y, const Ultrapath& x) {
  if (y.length() > x.length()) return std::nullopt;
  for (std::size_t i = 0; i < y.length(); ++i)
    if (y.edges[i] != x.edges[i]) return std::nullopt;
  Ultrapath z{std::vector<EdgeRef>(x.edges.begin() + static_cast<std::ptrdiff_t>(y.length()), x.edges.end()), x.terminal};
  if (!compatible(sp, y.terminal, z)) return std::nullopt;
  return z;
}

inline std::optional<Point> is_prefix(const ShiftSpace& sp, const Ultrapath& y, const Point& x) {
  auto len = x.length();
  if (len && *len < y.length()) return std::nullopt;
  for (std::size_t i = 0; i < y.length(); ++i)
    if (x.coordinate(i + 1) != Symbol::of(y.edges[i])) return std::nullopt;
  Point z = x.shifted(y.length());
  Symbol first = z.coordinate(1);
  if (first.is_edge()) {
    auto s = sp.source(first.edge);
    if (!s || !y.terminal.contains(*s)) return std::nullopt;
  } else if (!sp.emitter(first.emitter).subset_of(y.terminal)) {
    return std::nullopt;
  }
  return z;
}

struct BlockEnumeration {
  std::vector<Block> blocks;
  /// True when every family index lies within the bound.
  bool complete = true;
};

/// Blocks of length n whose edge indices lie in [-bound, bound].
inline BlockEnumeration enumerate_blocks(const ShiftSpace& sp, std::size_t n, Index bound) {
  if (n < 1 || bound < 0) throw Error(ErrorKind::Precondition, "need n >= 1 and bound >= 0");
  BlockEnumeration res;
  const auto& g = sp.graph();
  for (const auto& ef : g.edge_families)
    if (!ef.domain.subset_of(IndexSet::range(-bound, bound))) res.complete = false;
  Block cur;
  std::function<void()> rec = [&] {
    if (cur.size() == n) {
      res.blocks.push_back(cur);
      return;
    }
    if (!cur.empty() && cur.back().is_emitter()) {
      cur.push_back(cur.back());
      rec();
      cur.pop_back();
      return;
    }
    EdgeSet next = cur.empty() ? g.all_edges() : sp.successors(cur.back().edge);
    for (const auto& e : next.elements_within(bound)) {
      cur.push_back(Symbol::of(e));
      rec();
      cur.pop_back();
    }
    std::vector<int> ems;
    if (cur.empty()) {
      for (std::size_t i = 0; i < sp.emitters().size(); ++i) ems.push_back(static_cast<int>(i));
    } else {
      ems = sp.emitters_in(sp.range(cur.back().edge));
    }
    for (int id : ems) {
      cur.push_back(Symbol::emitter_symbol(id));
      rec();
      cur.pop_back();
    }
  };
  rec();
  std::sort(res.blocks.begin(), res.blocks.end());
  return res;
}

/// Checks the block constraints: adjacency, and emitters only in trailing
/// positions.
inline bool is_block(const ShiftSpace& sp, const Block& b) {
  if (b.empty()) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!sp.has_symbol(b[i])) return false;
    if (i > 0 && !sp.follows(b[i - 1], b[i])) return false;
  }
  return true;
}

}  // namespace ultrashift
