// Generalized cylinders D_{y,F}, neighbourhood bases, and the bounded
// convergence test for sequences of points.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ultrashift/error.hpp"
#include "ultrashift/path.hpp"
#include "ultrashift/point.hpp"
#include "ultrashift/verdict.hpp"

namespace ultrashift {

/// D_{y,F}: points with prefix y whose coordinate |y|+1 is not in F.
struct Cylinder {
  Ultrapath base;
  EdgeSet excluded;
  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

inline void require_valid(const ShiftSpace& sp, const Cylinder& d) {
  require_valid(sp, d.base);
  if (!d.excluded.is_finite()) throw Error(ErrorKind::Precondition, "excluded set must be finite");
  if (!d.excluded.subset_of(sp.emitted(d.base.terminal)))
    throw Error(ErrorKind::Precondition, "excluded set must lie in ε(terminal)");
}

/// Membership of the symbol following the base.
inline bool next_symbol_allowed(const ShiftSpace& sp, const Cylinder& d, const Symbol& s) {
  if (s.is_emitter()) return sp.emitter(s.emitter).subset_of(d.base.terminal);
  auto src = sp.source(s.edge);
  return src && d.base.terminal.contains(*src) && !d.excluded.contains(s.edge);
}

inline bool cylinder_contains(const ShiftSpace& sp, const Cylinder& d, const Point& x) {
  const std::size_t n = d.base.length();
  for (std::size_t i = 0; i < n; ++i)
    if (x.coordinate(i + 1) != Symbol::of(d.base.edges[i])) return false;
  return next_symbol_allowed(sp, d, x.coordinate(n + 1));
}

/// σ(D_{y,F}) = D_{σ(y),F} for |y| > 0.
inline Cylinder shift_cylinder(const Cylinder& d) {
  if (d.base.length() == 0) throw Error(ErrorKind::Precondition, "shift of a cylinder with zero-length base is not a cylinder");
  Cylinder out = d;
  out.base.edges.erase(out.base.edges.begin());
  return out;
}

/// D_{(x_1..x_n, r(x_n))} for infinite x.
inline Cylinder neighborhood_basis(const ShiftSpace& sp, const Point& x, std::size_t n) {
  if (!x.is_infinite()) throw Error(ErrorKind::Precondition, "depth basis needs an infinite point");
  if (n < 1) throw Error(ErrorKind::Precondition, "depth must be at least 1");
  auto edges = x.edge_prefix(n);
  return {{edges, sp.range(edges.back())}, {}};
}

/// D_{(α,A),F} for a finite point (α A A ...).
inline Cylinder neighborhood_basis(const ShiftSpace& sp, const Point& x, const EdgeSet& excluded) {
  if (!x.is_finite()) throw Error(ErrorKind::Precondition, "excluded-set basis needs a finite point");
  const auto& f = x.as_finite();
  const VertexSet& a = sp.emitter(f.tail);
  if (!excluded.is_finite() || !excluded.subset_of(sp.emitted(a)))
    throw Error(ErrorKind::Precondition, "F must be a finite subset of ε(A)");
  return {{f.path, a}, excluded};
}

using PointSequence = std::function<Point(std::size_t)>;

struct ConvergenceBounds {
  std::size_t max_depth = 8;   // M_max
  std::size_t max_index = 40;  // N_max
  std::vector<EdgeSet> excluded_sets;
};

inline json bounds_json(const ConvergenceBounds& b) {
  return {{"M_max", b.max_depth}, {"N_max", b.max_index}, {"F_list_size", b.excluded_sets.size()}};
}

/// Bounded reading of the ∀∃ convergence criterion: a requirement holds
/// when its last violation within [1, N_max] occurs in the first half.
inline Verdict check_convergence(const ShiftSpace& sp, const PointSequence& seq, const Point& target,
                                 const ConvergenceBounds& b) {
  Verdict v = Verdict::make("convergence", Status::Holds);
  v.bounds = bounds_json(b);
  const std::size_t nmax = b.max_index;
  std::vector<Point> xs;
  try {
    for (std::size_t n = 1; n <= nmax; ++n) xs.push_back(seq(n));
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.notes.push_back(std::string("sequence evaluation failed: ") + e.what());
    return v;
  }
  auto fail = [&](std::size_t n, const std::string& reason, json extra) {
    v.status = Status::Fails;
    v.witness = {{"n", n}, {"point", xs[n - 1].to_string(sp)}, {"reason", reason}, {"target", target.to_string(sp)}};
    v.witness.update(extra);
  };
  try {
    if (target.is_infinite()) {
      json per_m = json::array();
      for (std::size_t m = 1; m <= b.max_depth; ++m) {
        std::size_t last_bad = 0;
        std::string why;
        for (std::size_t n = 1; n <= nmax; ++n) {
          const Point& x = xs[n - 1];
          auto len = x.length();
          if (len && *len < m) {
            last_bad = n;
            why = "length " + std::to_string(*len) + " < M";
            continue;
          }
          for (std::size_t i = 1; i <= m; ++i)
            if (x.coordinate(i) != target.coordinate(i)) {
              last_bad = n;
              why = "coordinate " + std::to_string(i) + " is " + sp.name(x.coordinate(i)) + ", target has " +
                    sp.name(target.coordinate(i));
              break;
            }
        }
        per_m.push_back({{"M", m}, {"N", last_bad}});
        if (last_bad > nmax / 2) {
          fail(last_bad, why, {{"M", m}, {"case", "a"}});
          return v;
        }
      }
      v.witness = {{"case", "a"}, {"N_per_M", per_m}};
      return v;
    }

    const auto& tf = target.as_finite();
    const std::size_t k = tf.path.size();
    const VertexSet& a = sp.emitter(tf.tail);
    std::vector<EdgeSet> fs = b.excluded_sets;
    if (fs.empty()) fs.push_back({});
    json per_f = json::array();
    for (const auto& f : fs) {
      std::size_t last_bad = 0;
      std::string why;
      for (std::size_t n = 1; n <= nmax; ++n) {
        const Point& x = xs[n - 1];
        if (x == target) continue;
        auto len = x.length();
        bool ok = !len || *len > k;
        if (!ok) {
          why = "not equal to the target and not longer than it";
        } else {
          for (std::size_t i = 1; i <= k && ok; ++i)
            if (x.coordinate(i) != Symbol::of(tf.path[i - 1])) {
              ok = false;
              why = "coordinate " + std::to_string(i) + " differs";
            }
        }
        if (ok) {
          Symbol s = x.coordinate(k + 1);
          auto src = sp.source(s.edge);
          if (!src || !a.contains(*src)) {
            ok = false;
            why = "coordinate " + std::to_string(k + 1) + " not in ε(A)";
          } else if (f.contains(s.edge)) {
            ok = false;
            why = "coordinate " + std::to_string(k + 1) + " = " + sp.edge_name(s.edge) + " lies in F";
          }
        }
        if (!ok) last_bad = n;
      }
      per_f.push_back({{"F", sp.graph().format(f)}, {"N", last_bad}});
      if (last_bad > nmax / 2) {
        fail(last_bad, why, {{"F", sp.graph().format(f)}, {"case", "b"}});
        return v;
      }
    }
    v.witness = {{"case", "b"}, {"N_per_F", per_f}};
  } catch (const Error& e) {
    v.status = Status::Unknown;
    v.notes.push_back(e.what());
  }
  return v;
}

}  // namespace ultrashift
