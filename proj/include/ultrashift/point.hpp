// Points of X_𝒢: finite points (α A A ...), eventually periodic infinite
// paths, and depth-bounded generator streams.
#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/shift_space.hpp"

namespace ultrashift {

/// Coordinate function of a generator stream, 1-based.
using StreamFn = std::function<EdgeRef(std::size_t)>;

inline constexpr std::size_t kDefaultGeneratorDepth = 64;

struct FinitePoint {
  std::vector<EdgeRef> path;
  int tail = 0;
  friend bool operator==(const FinitePoint&, const FinitePoint&) = default;
};

struct PeriodicPoint {
  std::vector<EdgeRef> preamble;
  std::vector<EdgeRef> cycle;
  friend bool operator==(const PeriodicPoint&, const PeriodicPoint&) = default;
};

struct GeneratedPoint {
  std::string name;
  std::shared_ptr<const StreamFn> fn;
  std::size_t offset = 0;
  std::size_t depth = kDefaultGeneratorDepth;
  friend bool operator==(const GeneratedPoint& a, const GeneratedPoint& b) {
    return a.fn == b.fn && a.offset == b.offset && a.depth == b.depth;
  }
};

class Point {
 public:
  Point() : v_(FinitePoint{}) {}

  static Point finite(std::vector<EdgeRef> path, int tail) { return Point(FinitePoint{std::move(path), tail}); }
  static Point zero(int tail) { return finite({}, tail); }
  static Point periodic(std::vector<EdgeRef> preamble, std::vector<EdgeRef> cycle) {
    if (cycle.empty()) throw Error(ErrorKind::Precondition, "periodic point needs a nonempty cycle");
    canonicalize(preamble, cycle);
    return Point(PeriodicPoint{std::move(preamble), std::move(cycle)});
  }
  static Point generated(std::string name, StreamFn fn, std::size_t depth = kDefaultGeneratorDepth) {
    return Point(GeneratedPoint{std::move(name), std::make_shared<const StreamFn>(std::move(fn)), 0, depth});
  }

  bool is_finite() const { return std::holds_alternative<FinitePoint>(v_); }
  bool is_periodic() const { return std::holds_alternative<PeriodicPoint>(v_); }
  bool is_generated() const { return std::holds_alternative<GeneratedPoint>(v_); }
  bool is_infinite() const { return !is_finite(); }
  /// Finite and periodic points support exact reasoning.
  bool exact() const { return !is_generated(); }

  const FinitePoint& as_finite() const { return std::get<FinitePoint>(v_); }
  const PeriodicPoint& as_periodic() const { return std::get<PeriodicPoint>(v_); }
  const GeneratedPoint& as_generated() const { return std::get<GeneratedPoint>(v_); }

  /// |x|, or nullopt for infinite points.
  std::optional<std::size_t> length() const {
    if (is_finite()) return as_finite().path.size();
    return std::nullopt;
  }
  bool is_zero_length() const { return is_finite() && as_finite().path.empty(); }

  /// Depth up to which coordinates exist (unbounded for exact points).
  std::size_t depth() const {
    if (is_generated()) return as_generated().depth;
    return static_cast<std::size_t>(-1);
  }

  Symbol coordinate(std::size_t n) const {
    if (n == 0) throw Error(ErrorKind::Precondition, "coordinates are 1-based");
    if (const auto* f = std::get_if<FinitePoint>(&v_)) {
      if (n <= f->path.size()) return Symbol::of(f->path[n - 1]);
      return Symbol::emitter_symbol(f->tail);
    }
    if (const auto* p = std::get_if<PeriodicPoint>(&v_)) {
      if (n <= p->preamble.size()) return Symbol::of(p->preamble[n - 1]);
      return Symbol::of(p->cycle[(n - 1 - p->preamble.size()) % p->cycle.size()]);
    }
    const auto& g = as_generated();
    if (n > g.depth)
      throw Error(ErrorKind::DepthExceeded, "generator '" + g.name + "' queried at " + std::to_string(n) +
                                                " beyond declared depth " + std::to_string(g.depth));
    return Symbol::of((*g.fn)(g.offset + n));
  }
  EdgeRef edge_at(std::size_t n) const {
    Symbol s = coordinate(n);
    if (!s.is_edge()) throw Error(ErrorKind::Precondition, "coordinate " + std::to_string(n) + " is an emitter");
    return s.edge;
  }

  std::vector<Symbol> prefix(std::size_t n) const {
    std::vector<Symbol> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(coordinate(i));
    return out;
  }
  /// The first min(n, |x|) edges.
  std::vector<EdgeRef> edge_prefix(std::size_t n) const {
    std::vector<EdgeRef> out;
    auto len = length();
    std::size_t m = len ? std::min(n, *len) : n;
    for (std::size_t i = 1; i <= m; ++i) out.push_back(edge_at(i));
    return out;
  }

  /// σ^i(x).
  Point shifted(std::size_t i = 1) const {
    if (i == 0) return *this;
    if (const auto* f = std::get_if<FinitePoint>(&v_)) {
      std::size_t k = std::min(i, f->path.size());
      return finite(std::vector<EdgeRef>(f->path.begin() + static_cast<std::ptrdiff_t>(k), f->path.end()), f->tail);
    }
    if (const auto* p = std::get_if<PeriodicPoint>(&v_)) {
      if (i <= p->preamble.size())
        return periodic(std::vector<EdgeRef>(p->preamble.begin() + static_cast<std::ptrdiff_t>(i), p->preamble.end()), p->cycle);
      std::size_t r = (i - p->preamble.size()) % p->cycle.size();
      std::vector<EdgeRef> c(p->cycle.begin() + static_cast<std::ptrdiff_t>(r), p->cycle.end());
      c.insert(c.end(), p->cycle.begin(), p->cycle.begin() + static_cast<std::ptrdiff_t>(r));
      return periodic({}, std::move(c));
    }
    GeneratedPoint g = as_generated();
    g.offset += i;
    g.depth = g.depth > i ? g.depth - i : 0;
    return Point(std::move(g));
  }

  /// Position from which x is periodic with period `period()`; nullopt for
  /// generator streams.
  std::optional<std::size_t> stable_from() const {
    if (const auto* f = std::get_if<FinitePoint>(&v_)) return f->path.size() + 1;
    if (const auto* p = std::get_if<PeriodicPoint>(&v_)) return p->preamble.size() + 1;
    return std::nullopt;
  }
  std::size_t period() const {
    if (const auto* p = std::get_if<PeriodicPoint>(&v_)) return p->cycle.size();
    return 1;
  }
  /// Number of positions after which every later coordinate repeats an
  /// earlier one: checking 1..horizon() decides any shift-periodic property.
  std::optional<std::size_t> horizon() const {
    auto s = stable_from();
    if (!s) return std::nullopt;
    return *s + period() - 1;
  }

  /// Length of the run of coordinates from `start` satisfying `pred`;
  /// nullopt when the run never ends.
  template <class Pred>
  std::optional<std::size_t> run_length(std::size_t start, Pred pred) const {
    std::size_t n = 0;
    if (auto h = horizon()) {
      std::size_t last = std::max(start, *h) + period();
      for (std::size_t i = start; i <= last; ++i) {
        if (!pred(coordinate(i))) return n;
        ++n;
      }
      return std::nullopt;
    }
    for (std::size_t i = start; i <= depth(); ++i) {
      if (!pred(coordinate(i))) return n;
      ++n;
    }
    throw Error(ErrorKind::DepthExceeded, "run continues past generator depth");
  }

  friend bool operator==(const Point& a, const Point& b) { return a.v_ == b.v_; }

  /// Coordinates 1..n agree.
  friend bool agree(const Point& a, const Point& b, std::size_t n) {
    for (std::size_t i = 1; i <= n; ++i)
      if (a.coordinate(i) != b.coordinate(i)) return false;
    return true;
  }

  /// Exact equality where decidable; generator streams compare up to the
  /// smaller depth.
  friend bool same_point(const Point& a, const Point& b) {
    if (a.exact() && b.exact()) return a == b;
    std::size_t n = std::min(a.depth(), b.depth());
    try {
      return agree(a, b, n);
    } catch (const Error&) {
      return false;
    }
  }

  std::string to_string(const ShiftSpace& sp) const {
    std::ostringstream os;
    auto edges = [&](const std::vector<EdgeRef>& es) {
      for (const auto& e : es) os << ' ' << sp.edge_name(e);
    };
    if (const auto* f = std::get_if<FinitePoint>(&v_)) {
      os << "fin:";
      edges(f->path);
      os << " | " << sp.emitter_name(f->tail);
    } else if (const auto* p = std::get_if<PeriodicPoint>(&v_)) {
      os << "inf:";
      edges(p->preamble);
      os << " (";
      for (std::size_t i = 0; i < p->cycle.size(); ++i) os << (i ? " " : "") << sp.edge_name(p->cycle[i]);
      os << ")*";
    } else {
      const auto& g = as_generated();
      os << "gen: " << g.name;
      if (g.offset) os << " +" << g.offset;
    }
    return os.str();
  }

 private:
  template <class T>
  explicit Point(T v) : v_(std::move(v)) {}

  static void canonicalize(std::vector<EdgeRef>& pre, std::vector<EdgeRef>& cyc) {
    // primitive root of the cycle
    std::size_t n = cyc.size();
    for (std::size_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      bool ok = true;
      for (std::size_t i = d; i < n && ok; ++i) ok = cyc[i] == cyc[i - d];
      if (ok) {
        cyc.resize(d);
        break;
      }
    }
    // absorb preamble into the cycle
    while (!pre.empty() && pre.back() == cyc.back()) {
      std::rotate(cyc.rbegin(), cyc.rbegin() + 1, cyc.rend());
      pre.pop_back();
    }
  }

  std::variant<FinitePoint, PeriodicPoint, GeneratedPoint> v_;
};

/// Problems with `x` as an element of X_𝒢, empty when valid. Generator
/// streams are checked up to `depth`.
inline std::vector<std::string> point_issues(const ShiftSpace& sp, const Point& x, std::size_t depth = kDefaultGeneratorDepth) {
  std::vector<std::string> out;
  auto check_seq = [&](const std::vector<EdgeRef>& es, std::size_t base) {
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (!sp.has_edge(es[i])) {
        out.push_back("coordinate " + std::to_string(base + i + 1) + " is not an edge of " + sp.name());
        return false;
      }
      if (i > 0 && !sp.follows(es[i - 1], es[i])) {
        out.push_back("s(x_" + std::to_string(base + i + 1) + ") not in r(x_" + std::to_string(base + i) + ")");
        return false;
      }
    }
    return true;
  };
  if (x.is_finite()) {
    const auto& f = x.as_finite();
    if (f.tail < 0 || f.tail >= static_cast<int>(sp.emitters().size())) {
      out.push_back("tail is not a minimal infinite emitter");
      return out;
    }
    if (!check_seq(f.path, 0)) return out;
    if (!f.path.empty() && !sp.emitter(f.tail).subset_of(sp.range(f.path.back())))
      out.push_back("tail " + sp.emitter_name(f.tail) + " not contained in r(" + sp.edge_name(f.path.back()) + ")");
    return out;
  }
  if (x.is_periodic()) {
    const auto& p = x.as_periodic();
    std::vector<EdgeRef> seq = p.preamble;
    seq.insert(seq.end(), p.cycle.begin(), p.cycle.end());
    seq.push_back(p.cycle.front());
    check_seq(seq, 0);
    return out;
  }
  std::size_t n = std::min(depth, x.depth());
  try {
    std::vector<EdgeRef> seq;
    for (std::size_t i = 1; i <= n; ++i) seq.push_back(x.edge_at(i));
    check_seq(seq, 0);
  } catch (const Error& e) {
    out.push_back(e.what());
  }
  return out;
}

inline void require_valid(const ShiftSpace& sp, const Point& x) {
  auto issues = point_issues(sp, x);
  if (!issues.empty()) throw Error(ErrorKind::InvalidPath, x.to_string(sp) + ": " + issues.front());
}

}  // namespace ultrashift
