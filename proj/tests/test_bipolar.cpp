#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spq/baxter.hpp"
#include "spq/bipolar.hpp"
#include "spq/separable.hpp"

using namespace spq;

namespace {

const Permutation kSix({3, 1, 2, 5, 6, 4});

BipolarView oracle_view(const Permutation& p) {
  return BipolarView([&p](Query q, uint64_t a, uint64_t b) {
    return oracle::query(p, q, static_cast<uint32_t>(a), static_cast<uint32_t>(b));
  }, p.size());
}

bool has_edge(const EmbeddedBipolarGraph& g, int64_t x1, int64_t y1, int64_t x2, int64_t y2) {
  for (const auto& [a, b] : g.edges) {
    const auto &u = g.vertices[a], &v = g.vertices[b];
    if (u.x == x1 && u.y == y1 && v.x == x2 && v.y == y2) return true;
  }
  return false;
}

// Degrees, orientation, and both query forms against the contraction.
void check_all(const Permutation& p, const BipolarView& v) {
  const EmbeddedBipolarGraph g = build_embedded(p);
  REQUIRE(check_degrees(g).empty());
  const BipolarOrientation b = contract(g);
  REQUIRE(check_orientation(b).empty());
  REQUIRE(b.from.size() == p.size() + 1);
  const uint32_t n = p.size();
  for (uint32_t i = 1; i <= n; ++i) {
    for (uint32_t j = i + 1; j <= n; ++j) REQUIRE(v.edges_adjacent(i, j) == oracle_edges_adjacent(b, i, j));
    const std::vector<uint32_t> want = oracle_edge_neighbors(b, i);
    const std::vector<uint64_t> got = v.edge_neighbors(i);
    REQUIRE(got == std::vector<uint64_t>(want.begin(), want.end()));
    for (size_t k = 1; k < got.size(); ++k) REQUIRE(p(static_cast<uint32_t>(got[k - 1])) > p(static_cast<uint32_t>(got[k])));
    if (i < n) REQUIRE(v.edges_adjacent(i, i + 1) == (p(i) < p(i + 1)));
    const uint32_t r = oracle::nlv(p, i);
    if (r <= n) REQUIRE(v.edges_adjacent(i, r));
  }
}

}  // namespace

TEST_CASE("bipolar: embedded graph of a six-element permutation") {
  const EmbeddedBipolarGraph g = build_embedded(kSix);
  std::vector<std::pair<int64_t, int64_t>> whites;
  for (const auto& v : g.vertices)
    if (!v.black) whites.push_back({v.x, v.y});
  // Doubled: w_0, w_2 = (2.5, 1.5), w_3 = (3.5, 3.5), w_4 = (4.5, 5.5), w_6.
  CHECK(whites == std::vector<std::pair<int64_t, int64_t>>{{1, 1}, {5, 3}, {7, 7}, {9, 11}, {13, 13}});
  CHECK(has_edge(g, 7, 7, 8, 10));
  CHECK(has_edge(g, 7, 7, 12, 8));
  CHECK_FALSE(has_edge(g, 7, 7, 10, 12));
  CHECK(check_degrees(g).empty());
  CHECK(crossing_free(g));

  const BipolarOrientation b = contract(g);
  CHECK(b.whites == std::vector<uint32_t>{0, 2, 3, 4, 6});
  CHECK((b.from[3] == 2 && b.to[3] == 3));
  CHECK((b.from[4] == 3 && b.to[4] == 4));
  CHECK((b.from[6] == 3 && b.to[6] == 6));
  CHECK(check_orientation(b).empty());

  const BaxterIndex idx = BaxterIndex::build(kSix, 64);
  const BipolarView v = BipolarView::over(idx);
  CHECK(v.edges_adjacent(3, 6));
  CHECK_FALSE(v.edges_adjacent(4, 6));
  const std::vector<uint64_t> nb = v.edge_neighbors(3);
  CHECK(nb == std::vector<uint64_t>{4, 6});
  CHECK(kSix(4) == 5);
  CHECK(kSix(6) == 4);
  CHECK_THROWS_AS(v.edges_adjacent(6, 3), Error);
  CHECK_THROWS_AS(v.edges_adjacent(3, 3), Error);
  CHECK_THROWS_AS(v.edge_neighbors(7), Error);
}

TEST_CASE("bipolar: single element") {
  const Permutation one({1});
  const EmbeddedBipolarGraph g = build_embedded(one);
  CHECK(g.vertices.size() == 3);
  CHECK(has_edge(g, 1, 1, 2, 2));
  CHECK(has_edge(g, 2, 2, 3, 3));
  CHECK(g.edges.size() == 2);
  const BipolarOrientation b = contract(g);
  CHECK((b.from[1] == 0 && b.to[1] == 1));
  CHECK(oracle_view(one).edge_neighbors(1).empty());
  CHECK_THROWS_AS(build_embedded(Permutation({2, 4, 1, 3})), Error);
}

TEST_CASE("bipolar: degree invariants for every Baxter permutation, n <= 9") {
  for (uint32_t n = 1; n <= 9; ++n) {
    uint64_t count = 0;
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      const EmbeddedBipolarGraph g = build_embedded(p);
      REQUIRE(check_degrees(g).empty());
      const BipolarOrientation b = contract(g);
      REQUIRE(check_orientation(b).empty());
      if (n <= 6) REQUIRE(crossing_free(g));
      ++count;
    });
    CHECK(count == count_class(n, PermKind::baxter));
  }
}

TEST_CASE("bipolar: queries match the contraction, exhaustive n <= 8") {
  for (uint32_t n = 1; n <= 8; ++n) {
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      const BaxterIndex idx = BaxterIndex::build(p, 64);
      check_all(p, BipolarView::over(idx));
    });
  }
}

TEST_CASE("bipolar: queries match the contraction on random permutations") {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const Permutation p = random_baxter_walk(512, seed);
    const BaxterIndex idx = BaxterIndex::build(p, 64);
    check_all(p, BipolarView::over(idx));
    if (seed < 3) {
      const Permutation s = random_separable(300, seed);
      check_all(s, BipolarView::over(SeparableIndex::build(s, 16, 5)));
    }
  }
}

TEST_CASE("bipolar: dump format") {
  std::ostringstream out;
  write_graph_dump(out, build_embedded(Permutation({2, 1})));
  // No ascent: only w_0 and w_2, and both blacks hang between them.
  CHECK(out.str() == "W 0 1 1\nB 1 2 4\nB 2 4 2\nW 2 5 5\nE 1 1 4 2\nE 1 1 2 4\nE 2 4 5 5\nE 4 2 5 5\n");
}
