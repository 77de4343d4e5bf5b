// Turning finite edge prefixes into points, and sample spaces of points.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ultrashift/point.hpp"
#include "ultrashift/shift_space.hpp"

namespace ultrashift {

/// Follows the successor nearest zero until an edge repeats; falls back to a
/// generator stream of depth `limit` when no repetition is found.
inline std::optional<Point> greedy_completion(const ShiftSpace& sp, const std::vector<EdgeRef>& prefix,
                                              std::size_t limit = kDefaultGeneratorDepth) {
  if (prefix.empty()) return std::nullopt;
  std::vector<EdgeRef> walk = prefix;
  std::map<EdgeRef, std::size_t> seen;
  for (std::size_t i = 0; i < walk.size(); ++i) seen[walk[i]] = i;
  while (walk.size() < prefix.size() + limit) {
    auto next = sp.successors(walk.back()).closest_to_zero(1);
    if (next.empty()) return std::nullopt;
    auto it = seen.find(next.front());
    if (it != seen.end()) {
      std::size_t p = it->second;
      return Point::periodic(std::vector<EdgeRef>(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(p)),
                             std::vector<EdgeRef>(walk.begin() + static_cast<std::ptrdiff_t>(p), walk.end()));
    }
    seen[next.front()] = walk.size();
    walk.push_back(next.front());
  }
  auto edges = std::make_shared<std::vector<EdgeRef>>(std::move(walk));
  std::size_t depth = edges->size();
  return Point::generated("greedy", [edges](std::size_t n) { return (*edges)[n - 1]; }, depth);
}

/// Points starting with `prefix`: every emitter tail, the self-loop tail
/// when the last edge follows itself, and the greedy walk.
inline std::vector<Point> completions(const ShiftSpace& sp, const std::vector<EdgeRef>& prefix) {
  std::vector<Point> out;
  if (prefix.empty()) {
    for (std::size_t i = 0; i < sp.emitters().size(); ++i) out.push_back(Point::zero(static_cast<int>(i)));
    return out;
  }
  const EdgeRef& last = prefix.back();
  for (int id : sp.emitters_in(sp.range(last))) out.push_back(Point::finite(prefix, id));
  if (sp.follows(last, last)) out.push_back(Point::periodic(prefix, {last}));
  if (auto g = greedy_completion(sp, prefix)) {
    bool dup = false;
    for (const auto& p : out) dup = dup || p == *g;
    if (!dup) out.push_back(*g);
  }
  return out;
}

struct SampleOptions {
  std::size_t depth = 3;
  Index index_bound = 2;
  std::size_t random = 100;
  std::uint64_t seed = 1;
  std::size_t max_points = 4000;
};

/// Exhaustive walks of length <= depth with indices in the bound, each
/// completed, then random longer walks.
inline std::vector<Point> sample_points(const ShiftSpace& sp, const SampleOptions& o = {}) {
  std::vector<Point> out;
  std::set<std::string> keys;
  auto add = [&](const Point& p) {
    if (out.size() >= o.max_points) return;
    if (keys.insert(p.to_string(sp)).second) out.push_back(p);
  };
  for (const auto& p : completions(sp, {})) add(p);
  std::vector<EdgeRef> walk;
  std::function<void()> rec = [&] {
    if (!walk.empty())
      for (const auto& p : completions(sp, walk)) add(p);
    if (walk.size() == o.depth || out.size() >= o.max_points) return;
    EdgeSet next = walk.empty() ? sp.graph().all_edges() : sp.successors(walk.back());
    for (const auto& e : next.elements_within(o.index_bound)) {
      walk.push_back(e);
      rec();
      walk.pop_back();
    }
  };
  rec();
  std::mt19937_64 rng(o.seed);
  const std::size_t width = static_cast<std::size_t>(o.index_bound) * 4 + 2;
  for (std::size_t t = 0; t < o.random && out.size() < o.max_points; ++t) {
    std::vector<EdgeRef> w;
    std::size_t len = std::uniform_int_distribution<std::size_t>(1, o.depth + 4)(rng);
    EdgeSet next = sp.graph().all_edges();
    while (w.size() < len) {
      auto cand = next.closest_to_zero(width);
      if (cand.empty()) break;
      w.push_back(cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)]);
      next = sp.successors(w.back());
    }
    if (w.empty()) continue;
    auto cs = completions(sp, w);
    if (!cs.empty()) add(cs[std::uniform_int_distribution<std::size_t>(0, cs.size() - 1)(rng)]);
  }
  return out;
}

}  // namespace ultrashift
