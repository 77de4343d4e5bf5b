// Exact sets of integer indices: finite unions of intervals, where an
// interval may be unbounded on either side. Canonical form is a sorted list
// of maximal, pairwise non-adjacent intervals, so structural equality is set
// equality.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ultrashift/error.hpp"

namespace ultrashift {

using Index = std::int64_t;

inline constexpr Index kNegInf = std::numeric_limits<Index>::min();
inline constexpr Index kPosInf = std::numeric_limits<Index>::max();
// Concrete indices must stay well inside the sentinels so that k+1 and -k
// never overflow.
inline constexpr Index kIndexLimit = Index{1} << 60;

struct Interval {
  Index lo;
  Index hi;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet empty() { return {}; }
  static IndexSet all() { return from({{kNegInf, kPosInf}}); }
  static IndexSet point(Index k) { return from({{k, k}}); }
  static IndexSet range(Index lo, Index hi) {
    if (lo > hi) return {};
    return from({{lo, hi}});
  }
  static IndexSet at_least(Index a) { return from({{a, kPosInf}}); }
  static IndexSet at_most(Index a) { return from({{kNegInf, a}}); }
  static IndexSet points(const std::vector<Index>& ks) {
    std::vector<Interval> iv;
    for (Index k : ks) iv.push_back({k, k});
    return from(std::move(iv));
  }
  static IndexSet from(std::vector<Interval> iv) {
    IndexSet s;
    s.intervals_ = std::move(iv);
    s.canonicalize();
    return s;
  }

  const std::vector<Interval>& intervals() const { return intervals_; }

  bool is_empty() const { return intervals_.empty(); }
  bool is_finite() const {
    return intervals_.empty() ||
           (intervals_.front().lo != kNegInf && intervals_.back().hi != kPosInf);
  }
  /// Number of elements, or nullopt when infinite.
  std::optional<std::uint64_t> card() const {
    if (!is_finite()) return std::nullopt;
    std::uint64_t n = 0;
    for (const auto& i : intervals_) n += static_cast<std::uint64_t>(i.hi - i.lo) + 1;
    return n;
  }
  bool contains(Index k) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), k,
                               [](Index v, const Interval& i) { return v < i.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return k <= it->hi;
  }
  std::optional<Index> min() const {
    if (intervals_.empty() || intervals_.front().lo == kNegInf) return std::nullopt;
    return intervals_.front().lo;
  }
  std::optional<Index> max() const {
    if (intervals_.empty() || intervals_.back().hi == kPosInf) return std::nullopt;
    return intervals_.back().hi;
  }

  IndexSet unite(const IndexSet& o) const {
    std::vector<Interval> iv = intervals_;
    iv.insert(iv.end(), o.intervals_.begin(), o.intervals_.end());
    return from(std::move(iv));
  }
  IndexSet intersect(const IndexSet& o) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < o.intervals_.size()) {
      Index lo = std::max(intervals_[i].lo, o.intervals_[j].lo);
      Index hi = std::min(intervals_[i].hi, o.intervals_[j].hi);
      if (lo <= hi) out.push_back({lo, hi});
      if (intervals_[i].hi < o.intervals_[j].hi) ++i; else ++j;
    }
    IndexSet s;
    s.intervals_ = std::move(out);
    return s;
  }
  IndexSet complement() const {
    std::vector<Interval> out;
    Index cursor = kNegInf;
    bool open = true;  // cursor is a valid start
    for (const auto& i : intervals_) {
      if (i.lo != kNegInf && open && cursor <= i.lo - 1) out.push_back({cursor, i.lo - 1});
      if (i.hi == kPosInf) { open = false; break; }
      cursor = i.hi + 1;
    }
    if (open) out.push_back({cursor, kPosInf});
    IndexSet s;
    s.intervals_ = std::move(out);
    return s;
  }
  IndexSet minus(const IndexSet& o) const { return intersect(o.complement()); }
  bool subset_of(const IndexSet& o) const { return minus(o).is_empty(); }
  bool intersects(const IndexSet& o) const { return !intersect(o).is_empty(); }

  /// Up to `n` elements ordered by (|k|, k): the elements nearest zero.
  std::vector<Index> closest_to_zero(std::size_t n) const {
    if (n == 0 || is_empty()) return {};
    // Candidates: from each interval, the n elements nearest zero.
    std::vector<Index> cand;
    const Index span = static_cast<Index>(n);
    for (const auto& i : intervals_) {
      Index c = std::clamp<Index>(0, i.lo, i.hi);
      Index lo = (i.lo == kNegInf) ? c - span : std::max(i.lo, c - span);
      Index hi = (i.hi == kPosInf) ? c + span : std::min(i.hi, c + span);
      for (Index k = lo; k <= hi; ++k) cand.push_back(k);
    }
    std::sort(cand.begin(), cand.end(), [](Index a, Index b) {
      return std::pair(abs_key(a), a) < std::pair(abs_key(b), b);
    });
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    if (cand.size() > n) cand.resize(n);
    return cand;
  }

  /// Up to `n` elements with |k| >= t, nearest to the threshold first. Used
  /// to probe the index frontier of infinite families.
  std::vector<Index> beyond(Index t, std::size_t n) const {
    IndexSet far = intersect(at_least(t).unite(at_most(-t)));
    return far.closest_to_zero(n);
  }

  /// All elements in [lo, hi].
  std::vector<Index> elements_within(Index lo, Index hi) const {
    std::vector<Index> out;
    for (const auto& i : intersect(range(lo, hi)).intervals_)
      for (Index k = i.lo; k <= i.hi; ++k) out.push_back(k);
    return out;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet& a, const IndexSet& b) {
    return a.intervals_ <=> b.intervals_;
  }

  /// Text form used by the DSL: e.g. `{0, 3}`, `>=1`, `<=-1`, `[2..5]`,
  /// combined with `|`. Empty is `{}` and everything is `*`.
  std::string to_string() const {
    if (is_empty()) return "{}";
    if (intervals_.size() == 1 && intervals_[0].lo == kNegInf && intervals_[0].hi == kPosInf)
      return "*";
    std::ostringstream os;
    bool first = true;
    std::vector<Index> pts;
    auto flush = [&] {
      if (pts.empty()) return;
      if (!first) os << " | ";
      first = false;
      os << '{';
      for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? ", " : "") << pts[i];
      os << '}';
      pts.clear();
    };
    for (const auto& i : intervals_) {
      if (i.lo == i.hi) { pts.push_back(i.lo); continue; }
      if (i.lo != kNegInf && i.hi != kPosInf && i.hi - i.lo == 1) {
        pts.push_back(i.lo);
        pts.push_back(i.hi);
        continue;
      }
      flush();
      if (!first) os << " | ";
      first = false;
      if (i.lo == kNegInf) os << "<=" << i.hi;
      else if (i.hi == kPosInf) os << ">=" << i.lo;
      else os << '[' << i.lo << ".." << i.hi << ']';
    }
    flush();
    return os.str();
  }

 private:
  static std::uint64_t abs_key(Index k) {
    return k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  }

  void canonicalize() {
    std::erase_if(intervals_, [](const Interval& i) { return i.lo > i.hi; });
    std::sort(intervals_.begin(), intervals_.end());
    std::vector<Interval> out;
    for (const auto& i : intervals_) {
      if (!out.empty() && (out.back().hi == kPosInf || i.lo <= out.back().hi + 1)) {
        out.back().hi = std::max(out.back().hi, i.hi);
      } else {
        out.push_back(i);
      }
    }
    intervals_ = std::move(out);
  }

  std::vector<Interval> intervals_;
};

/// k -> scale*k + offset with scale in {-1, 0, +1}.
struct AffineIndexMap {
  int scale = 1;
  Index offset = 0;

  static AffineIndexMap identity() { return {1, 0}; }
  static AffineIndexMap constant(Index c) { return {0, c}; }
  static AffineIndexMap shift(Index b) { return {1, b}; }

  Index apply(Index k) const { return scale * k + offset; }

  /// Inverse for scale != 0.
  AffineIndexMap inverse() const {
    if (scale == 0) throw Error(ErrorKind::Precondition, "constant index map has no inverse");
    // k = scale*(m - offset)
    return {scale, -scale * offset};
  }
  /// (this ∘ other)(k) = this(other(k))
  AffineIndexMap compose(const AffineIndexMap& other) const {
    return {scale * other.scale, scale * other.offset + offset};
  }

  IndexSet image(const IndexSet& s) const {
    if (s.is_empty()) return {};
    if (scale == 0) return IndexSet::point(offset);
    std::vector<Interval> out;
    for (const auto& i : s.intervals()) out.push_back(map_interval(i));
    return IndexSet::from(std::move(out));
  }
  IndexSet preimage(const IndexSet& s) const {
    if (scale == 0) return s.contains(offset) ? IndexSet::all() : IndexSet{};
    return inverse().image(s);
  }

  friend bool operator==(const AffineIndexMap&, const AffineIndexMap&) = default;
  friend auto operator<=>(const AffineIndexMap&, const AffineIndexMap&) = default;

  /// Text in terms of a variable name, e.g. `k`, `-k+1`, `3`.
  std::string to_string(const std::string& var = "k") const {
    std::ostringstream os;
    if (scale == 0) { os << offset; return os.str(); }
    os << (scale < 0 ? "-" : "") << var;
    if (offset > 0) os << '+' << offset;
    if (offset < 0) os << offset;
    return os.str();
  }

 private:
  Index map_bound(Index b) const {
    if (b == kNegInf) return scale > 0 ? kNegInf : kPosInf;
    if (b == kPosInf) return scale > 0 ? kPosInf : kNegInf;
    return apply(b);
  }
  Interval map_interval(const Interval& i) const {
    Index a = map_bound(i.lo), b = map_bound(i.hi);
    return a <= b ? Interval{a, b} : Interval{b, a};
  }
};

}  // namespace ultrashift
