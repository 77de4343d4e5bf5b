#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ultrashift/family_set.hpp"
#include "ultrashift/index_set.hpp"

using namespace ultrashift;

namespace {

// Brute-force model: membership over a window, with rays tracked explicitly.
struct Model {
  std::set<Index> pts;
  std::vector<std::pair<bool, Index>> rays;  // (is_ge, a)
  bool contains(Index k) const {
    if (pts.count(k)) return true;
    for (auto [ge, a] : rays)
      if (ge ? k >= a : k <= a) return true;
    return false;
  }
};

std::pair<IndexSet, Model> random_set(std::mt19937& rng) {
  std::uniform_int_distribution<int> ncomp(0, 6), off(-20, 20), kind(0, 3);
  IndexSet s;
  Model m;
  int n = ncomp(rng);
  for (int i = 0; i < n; ++i) {
    Index a = off(rng);
    switch (kind(rng)) {
      case 0:
        s = s.unite(IndexSet::at_least(a));
        m.rays.push_back({true, a});
        break;
      case 1:
        s = s.unite(IndexSet::at_most(a));
        m.rays.push_back({false, a});
        break;
      default:
        s = s.unite(IndexSet::point(a));
        m.pts.insert(a);
    }
  }
  return {s, m};
}

}  // namespace

TEST(IndexSet, IntersectionOfRayAndPoints) {
  auto r = IndexSet::at_least(1).intersect(IndexSet::points({0, 3}));
  EXPECT_EQ(r, IndexSet::point(3));
}

TEST(IndexSet, RayIsInfinite) {
  EXPECT_FALSE(IndexSet::at_most(-1).card().has_value());
  EXPECT_FALSE(IndexSet::at_most(-1).is_finite());
}

TEST(IndexSet, UnionMergesAdjacent) {
  EXPECT_EQ(IndexSet::point(0).unite(IndexSet::at_least(1)), IndexSet::at_least(0));
}

TEST(IndexSet, ComplementRoundTrip) {
  IndexSet s = IndexSet::points({-3, 4}).unite(IndexSet::at_least(10));
  EXPECT_EQ(s.complement().complement(), s);
  EXPECT_TRUE(s.complement().intersect(s).is_empty());
  EXPECT_EQ(s.unite(s.complement()), IndexSet::all());
}

TEST(IndexSet, ClosestToZeroOrder) {
  IndexSet z = IndexSet::at_most(-1).unite(IndexSet::at_least(1));
  std::vector<Index> want{-1, 1, -2, 2, -3};
  EXPECT_EQ(z.closest_to_zero(5), want);
  EXPECT_EQ(IndexSet::at_least(7).closest_to_zero(2), (std::vector<Index>{7, 8}));
}

TEST(IndexSet, TextForm) {
  EXPECT_EQ(IndexSet::at_least(1).to_string(), ">=1");
  EXPECT_EQ(IndexSet::points({0, 3}).to_string(), "{0, 3}");
  EXPECT_EQ(IndexSet::all().to_string(), "*");
  EXPECT_EQ(IndexSet{}.to_string(), "{}");
}

TEST(AffineIndexMap, Preimages) {
  EXPECT_EQ(AffineIndexMap::identity().preimage(IndexSet::at_least(1)), IndexSet::at_least(1));
  EXPECT_EQ(AffineIndexMap::shift(1).preimage(IndexSet::at_most(-1)), IndexSet::at_most(-2));
  EXPECT_EQ(AffineIndexMap::constant(0).preimage(IndexSet::point(0)), IndexSet::all());
  EXPECT_TRUE(AffineIndexMap::constant(0).preimage(IndexSet::point(1)).is_empty());
  EXPECT_EQ((AffineIndexMap{-1, 2}).image(IndexSet::at_least(0)), IndexSet::at_most(2));
  EXPECT_THROW(AffineIndexMap::constant(3).inverse(), Error);
}

TEST(IndexSet, MembershipMatchesBruteForce) {
  std::mt19937 rng(7);
  for (int t = 0; t < 500; ++t) {
    auto [s, m] = random_set(rng);
    for (Index k = -50; k <= 50; ++k) ASSERT_EQ(s.contains(k), m.contains(k)) << s.to_string() << " at " << k;
  }
}

TEST(IndexSet, AlgebraLaws) {
  std::mt19937 rng(11);
  for (int t = 0; t < 300; ++t) {
    auto [a, ma] = random_set(rng);
    auto [b, mb] = random_set(rng);
    auto [c, mc] = random_set(rng);
    EXPECT_EQ(a.unite(b), b.unite(a));
    EXPECT_EQ(a.intersect(b), b.intersect(a));
    EXPECT_EQ(a.unite(b).unite(c), a.unite(b.unite(c)));
    EXPECT_EQ(a.intersect(b).intersect(c), a.intersect(b.intersect(c)));
    EXPECT_EQ(a.unite(a), a);
    EXPECT_EQ(a.intersect(a), a);
    EXPECT_EQ(a.minus(b).unite(a.intersect(b)), a);
    for (Index k = -50; k <= 50; ++k) {
      ASSERT_EQ(a.minus(b).contains(k), ma.contains(k) && !mb.contains(k));
      ASSERT_EQ(a.intersect(b).contains(k), ma.contains(k) && mb.contains(k));
    }
  }
}

TEST(FamilySet, AlgebraAndCardinality) {
  VertexSet a = VertexSet::single(0, IndexSet::at_least(1));
  VertexSet b = VertexSet::of(std::vector<VertexRef>{{0, 0}, {0, 3}, {1, 2}});
  EXPECT_EQ(a.intersect(b), VertexSet::of(VertexRef{0, 3}));
  EXPECT_TRUE(a.card().infinite);
  EXPECT_EQ(b.card(), Cardinality::finite(3));
  EXPECT_EQ(a.unite(b).minus(a), VertexSet::of(std::vector<VertexRef>{{0, 0}, {1, 2}}));
  EXPECT_TRUE(VertexSet::of(VertexRef{0, 3}).subset_of(a));
  EXPECT_EQ(a.unite(b), b.unite(a));
}

TEST(FamilySet, EmptyEntriesDropped) {
  VertexSet a = VertexSet::single(2, IndexSet::point(5));
  EXPECT_TRUE(a.minus(a).is_empty());
  EXPECT_EQ(a.minus(a), VertexSet{});
}
