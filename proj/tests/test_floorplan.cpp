#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "spq/baxter.hpp"
#include "spq/floorplan.hpp"
#include "spq/separable.hpp"

using namespace spq;
using namespace spq::testing;

namespace {

constexpr Side kSides[] = {Side::above, Side::below, Side::left, Side::right};

Floorplan grid(int64_t w, int64_t h, std::vector<Block> b) {
  Floorplan f;
  f.width = w;
  f.height = h;
  f.blocks = std::move(b);
  return f;
}

FloorplanView oracle_view(const Permutation& p) {
  return FloorplanView([&p](Query q, uint64_t a, uint64_t b) {
    return oracle::query(p, q, static_cast<uint32_t>(a), static_cast<uint32_t>(b));
  }, p.size());
}

// Every pair and every set of the view against the geometry of g (blocks in bottom-left order).
void check_against_geometry(const Floorplan& g, const FloorplanView& v) {
  const uint32_t n = static_cast<uint32_t>(g.size());
  const FloorplanGeometry geom(g);
  for (Side s : kSides) {
    for (uint32_t i = 1; i <= n; ++i) {
      std::vector<uint64_t> want;
      for (uint32_t j = 1; j <= n; ++j) {
        const bool geo = geom.adjacent(s, i - 1, j - 1);
        if (geom.contact(s, i - 1, j - 1)) REQUIRE(geo);
        INFO("side " << std::string(side_name(s)) << " i=" << i << " j=" << j);
        REQUIRE(v.adjacent(s, i, j) == geo);
        if (geo) want.push_back(j);
      }
      const std::vector<uint64_t> got = v.adjacent_set(s, i);
      std::vector<uint64_t> sorted = got;
      std::sort(sorted.begin(), sorted.end());
      INFO("set " << std::string(side_name(s)) << " of " << i);
      REQUIRE(sorted == want);
      // Geometric order: left to right along a horizontal side, bottom to top along a vertical one.
      for (size_t k = 1; k < got.size(); ++k) {
        const Block &a = g.blocks[got[k - 1] - 1], &b = g.blocks[got[k] - 1];
        if (s == Side::above || s == Side::below)
          REQUIRE(a.x2 <= b.x1);
        else
          REQUIRE(a.y2 <= b.y1);
      }
    }
  }
}

void check_antisymmetry(const FloorplanView& v) {
  const uint64_t n = v.size();
  for (uint64_t i = 1; i <= n; ++i)
    for (uint64_t j = 1; j <= n; ++j) {
      REQUIRE(v.adjacent(Side::above, i, j) == v.adjacent(Side::below, j, i));
      REQUIRE(v.adjacent(Side::left, i, j) == v.adjacent(Side::right, j, i));
    }
}

}  // namespace

TEST_CASE("floorplan: validator") {
  CHECK(validate_floorplan(pinwheel8()).empty());
  CHECK(validate_floorplan(pinwheel5()).empty());
  CHECK(validate_floorplan(grid(1, 1, {{1, 0, 0, 1, 1}})).empty());
  CHECK_FALSE(validate_floorplan(grid(2, 1, {{1, 0, 0, 1, 1}})).empty());                    // gap
  CHECK_FALSE(validate_floorplan(grid(2, 1, {{1, 0, 0, 2, 1}, {2, 1, 0, 2, 1}})).empty());  // overlap
  CHECK_FALSE(validate_floorplan(grid(2, 1, {{1, 0, 0, 1, 1}, {2, 1, 0, 3, 1}})).empty());  // outside
  CHECK_FALSE(validate_floorplan(grid(2, 1, {{1, 0, 0, 1, 1}, {1, 1, 0, 2, 1}})).empty());  // duplicate id
  CHECK_FALSE(validate_floorplan(grid(1, 1, {{1, 0, 0, 0, 1}, {2, 0, 0, 1, 1}})).empty());  // empty block
  // A two-by-two grid has a cross junction in the middle.
  const Floorplan cross = grid(2, 2, {{1, 0, 0, 1, 1}, {2, 1, 0, 2, 1}, {3, 0, 1, 1, 2}, {4, 1, 1, 2, 2}});
  CHECK(validate_floorplan(cross) == "four blocks meet at one point");
  CHECK_THROWS_AS(to_baxter(cross), Error);
}

TEST_CASE("floorplan: adjacency follows dividing segments, not edge overlap") {
  // Two halves over one horizontal cut, each split vertically at a different place. Sliding the
  // upper split past the lower one changes which blocks touch but not the permutation.
  const Floorplan a = grid(3, 2, {{1, 0, 0, 1, 1}, {2, 1, 0, 3, 1}, {3, 0, 1, 2, 2}, {4, 2, 1, 3, 2}});
  const Floorplan b = grid(3, 2, {{1, 0, 0, 2, 1}, {2, 2, 0, 3, 1}, {3, 0, 1, 1, 2}, {4, 1, 1, 3, 2}});
  CHECK(to_baxter(a) == to_baxter(b));
  const FloorplanGeometry ga(a), gb(b);
  CHECK(ga.contact(Side::above, 2, 1));
  CHECK_FALSE(gb.contact(Side::above, 2, 1));
  for (Side s : kSides)
    for (uint32_t i = 0; i < 4; ++i)
      for (uint32_t j = 0; j < 4; ++j) REQUIRE(ga.adjacent(s, i, j) == gb.adjacent(s, i, j));
  // Every upper block sits directly above every lower one.
  for (uint32_t up : {2u, 3u})
    for (uint32_t down : {0u, 1u}) CHECK(geometric_adjacent(a, Side::above, up, down));
  CHECK_FALSE(ga.adjacent(Side::left, 0, 3));
  CHECK(ga.adjacent(Side::left, 0, 1));
}

TEST_CASE("floorplan: deletion orders of two blocks") {
  // Horizontal cut: block 1 at the bottom, block 2 on top.
  const Floorplan stacked = grid(1, 2, {{1, 0, 0, 1, 1}, {2, 0, 1, 1, 2}});
  CHECK(deletion_order(stacked, Corner::bottom_left) == std::vector<uint32_t>{0, 1});
  CHECK(deletion_order(stacked, Corner::top_left) == std::vector<uint32_t>{1, 0});
  CHECK(to_baxter(stacked) == Permutation({2, 1}));
  const Floorplan side = grid(2, 1, {{1, 0, 0, 1, 1}, {2, 1, 0, 2, 1}});
  CHECK(deletion_order(side, Corner::bottom_left) == std::vector<uint32_t>{0, 1});
  CHECK(deletion_order(side, Corner::top_left) == std::vector<uint32_t>{0, 1});
  CHECK(to_baxter(side) == Permutation({1, 2}));
  CHECK(to_baxter(grid(3, 7, {{9, 0, 0, 3, 7}})) == Permutation({1}));
}

TEST_CASE("floorplan: pin-wheel fixtures") {
  const Floorplan f = pinwheel8();
  const std::vector<uint32_t> bl = deletion_order(f, Corner::bottom_left);
  const std::vector<uint32_t> tl = deletion_order(f, Corner::top_left);
  CHECK(bl == std::vector<uint32_t>{0, 1, 2, 3, 4, 5, 6, 7});
  // Top-left order: the block at position k is bottom-left block pi^{-1}(k).
  CHECK(tl == std::vector<uint32_t>{4, 0, 3, 5, 1, 2, 7, 6});
  const Permutation p = to_baxter(f);
  CHECK(p == Permutation({2, 5, 6, 3, 1, 4, 8, 7}));
  CHECK(classify(p).is_baxter);
  CHECK_FALSE(classify(p).is_separable);

  const Permutation q = to_baxter(pinwheel5());
  CHECK(is_baxter(q.values()));
  CHECK_FALSE(is_separable(q.values()));

  for (const Floorplan& g : {pinwheel8(), in_bottom_left_order(pinwheel5())}) {
    const Permutation r = to_baxter(g);
    const BaxterIndex idx = BaxterIndex::build(r, 64);
    check_against_geometry(g, FloorplanView::over(idx));
    check_against_geometry(g, oracle_view(r));
    check_antisymmetry(FloorplanView::over(idx));
  }
}

TEST_CASE("floorplan: random slicing generator") {
  const Floorplan one = random_slicing(1, 3);
  CHECK(one.size() == 1);
  CHECK(one.blocks[0].x2 == one.width);
  CHECK(one.blocks[0].y2 == one.height);
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const Floorplan two = random_slicing(2, seed);
    REQUIRE(validate_floorplan(two).empty());
    // One cut: either both blocks span the full height or both span the full width.
    const Block &a = two.blocks[0], &b = two.blocks[1];
    const bool vertical = a.y2 - a.y1 == two.height && b.y2 - b.y1 == two.height;
    const bool horizontal = a.x2 - a.x1 == two.width && b.x2 - b.x1 == two.width;
    CHECK(vertical != horizontal);
  }
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Floorplan f = random_slicing(200, seed);
    REQUIRE(f.size() == 200);
    REQUIRE(validate_floorplan(f).empty());
    const Floorplan again = random_slicing(200, seed);
    std::ostringstream x, y;
    write_floorplan(x, f);
    write_floorplan(y, again);
    REQUIRE(x.str() == y.str());
    REQUIRE(is_separable_fast(to_baxter(f).values()));
  }
  for (uint64_t seed = 0; seed < 40; ++seed) REQUIRE(is_separable(to_baxter(random_slicing(24, seed)).values()));
}

TEST_CASE("floorplan: random mosaics map to Baxter permutations") {
  bool non_slicing = false;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const Floorplan f = random_mosaic(1 + seed % 30, seed);
    REQUIRE(validate_floorplan(f).empty());
    const Permutation p = to_baxter(f);
    REQUIRE(is_baxter(p.values()));
    non_slicing |= !is_separable(p.values());
  }
  CHECK(non_slicing);
}

TEST_CASE("floorplan: small adjacency examples") {
  const Permutation down({3, 2, 1});
  const FloorplanView v = oracle_view(down);
  CHECK(v.adjacent_set(Side::below, 2) == std::vector<uint64_t>{3});
  CHECK(v.adjacent_set(Side::above, 2) == std::vector<uint64_t>{1});
  const Permutation across({1, 2, 3});
  const FloorplanView h = oracle_view(across);
  CHECK(h.adjacent_set(Side::left, 2) == std::vector<uint64_t>{3});
  CHECK(h.adjacent_set(Side::right, 2) == std::vector<uint64_t>{1});

  const Permutation stacked({2, 1});
  CHECK(oracle_view(stacked).adjacent(Side::above, 2, 1));
  CHECK(oracle_view(stacked).adjacent(Side::below, 1, 2));
  CHECK_FALSE(oracle_view(stacked).adjacent(Side::left, 1, 2));
  const Permutation side({1, 2});
  CHECK(oracle_view(side).adjacent(Side::left, 1, 2));
  CHECK(oracle_view(side).adjacent(Side::right, 2, 1));
  CHECK_FALSE(oracle_view(side).adjacent(Side::above, 2, 1));
  CHECK_THROWS_AS(oracle_view(side).adjacent(Side::left, 0, 1), Error);
  CHECK_THROWS_AS(oracle_view(side).adjacent_set(Side::left, 3), Error);
}

TEST_CASE("floorplan: formulas match geometry on slicing floorplans") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const Floorplan g = in_bottom_left_order(random_slicing(1 + (seed * 37) % 120, seed));
    const Permutation p = to_baxter(g);
    const BaxterIndex bx = BaxterIndex::build(p, 64);
    const SeparableIndex sp = SeparableIndex::build(p, 8, 3);
    const FloorplanView vb = FloorplanView::over(bx), vs = FloorplanView::over(sp);
    check_against_geometry(g, vb);
    check_antisymmetry(vb);
    for (Side s : kSides)
      for (uint64_t i = 1; i <= p.size(); ++i) {
        REQUIRE(vs.adjacent_set(s, i) == vb.adjacent_set(s, i));
        for (uint64_t j = 1; j <= p.size(); ++j) REQUIRE(vs.adjacent(s, i, j) == vb.adjacent(s, i, j));
      }
  }
}

TEST_CASE("floorplan: formulas match geometry on mosaic floorplans") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const Floorplan g = in_bottom_left_order(random_mosaic(1 + (seed * 13) % 90, seed));
    const Permutation p = to_baxter(g);
    const BaxterIndex bx = BaxterIndex::build(p, 64);
    check_against_geometry(g, FloorplanView::over(bx));
    check_antisymmetry(FloorplanView::over(bx));
  }
}

TEST_CASE("floorplan: text format") {
  const Floorplan f = pinwheel8();
  std::stringstream s;
  write_floorplan(s, f);
  CHECK(s.str().rfind("8 5 4\n1 0 0 1 2\n", 0) == 0);
  const Floorplan back = read_floorplan(s);
  std::ostringstream again;
  write_floorplan(again, back);
  CHECK(again.str() == s.str());
  for (const char* bad : {"", "2 1 1\n1 0 0 1 1\n", "1 1 1\n1 0 0 1 1\n7", "1 2 1\n1 0 0 1 1\n", "x"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_floorplan(in), Error);
  }
}
