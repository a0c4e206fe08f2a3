#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "spq/floorplan.hpp"

namespace spq::testing {

// Eight blocks around a pin-wheel; its deletion orders compose to (2,5,6,3,1,4,8,7). Listed in
// bottom-left order.
inline Floorplan pinwheel8() {
  Floorplan f;
  f.width = 5;
  f.height = 4;
  f.blocks = {{1, 0, 0, 1, 2}, {2, 1, 0, 2, 1}, {3, 2, 0, 4, 1}, {4, 1, 1, 3, 2},
              {5, 0, 2, 3, 4}, {6, 3, 1, 4, 4}, {7, 4, 0, 5, 3}, {8, 4, 3, 5, 4}};
  return f;
}

// The smallest non-slicing floorplan: four blocks turning around a central one.
inline Floorplan pinwheel5() {
  Floorplan f;
  f.width = 3;
  f.height = 3;
  f.blocks = {{1, 0, 0, 2, 1}, {2, 2, 0, 3, 2}, {3, 1, 1, 2, 2}, {4, 0, 1, 1, 3}, {5, 1, 2, 3, 3}};
  return f;
}

// Any mosaic floorplan, grown by undoing top-left deletions: the new top-left block either
// pushes down a prefix of the top row or pushes right a prefix of the left column. Each cut gets a
// fresh coordinate, so every junction stays a T. Not uniform.
inline Floorplan random_mosaic(uint32_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Floorplan f;
  f.width = f.height = 1;
  f.blocks = {{1, 0, 0, 1, 1}};
  // Ranks of the distinct coordinates on one axis.
  auto compress = [](std::vector<int64_t*> cs, int64_t& extent) {
    std::vector<int64_t> v;
    for (int64_t* c : cs) v.push_back(*c);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (int64_t* c : cs) *c = std::lower_bound(v.begin(), v.end(), *c) - v.begin();
    extent = static_cast<int64_t>(v.size()) - 1;
  };
  for (uint32_t k = 1; k < n; ++k) {
    auto& b = f.blocks;
    const bool top = rng() % 2;
    std::vector<size_t> edge;
    for (size_t q = 0; q < b.size(); ++q)
      if (top ? b[q].y2 == f.height : b[q].x1 == 0) edge.push_back(q);
    if (top)
      std::sort(edge.begin(), edge.end(), [&](size_t a, size_t c) { return b[a].x1 < b[c].x1; });
    else
      std::sort(edge.begin(), edge.end(), [&](size_t a, size_t c) { return b[a].y2 > b[c].y2; });
    const size_t take = 1 + rng() % edge.size();
    // Doubled coordinates: the cut goes on an odd value strictly inside the allowed range.
    int64_t lo = 0, hi = 2 * (top ? f.height : f.width);
    if (top)
      for (size_t q = 0; q < take; ++q) lo = std::max(lo, 2 * b[edge[q]].y1);
    else
      for (size_t q = 0; q < take; ++q) hi = std::min(hi, 2 * b[edge[q]].x2);
    for (Block& r : b) {
      r.x1 *= 2, r.x2 *= 2, r.y1 *= 2, r.y2 *= 2;
    }
    const int64_t cut = lo + 1 + 2 * static_cast<int64_t>(rng() % ((hi - lo) / 2));
    const Block last = b[edge[take - 1]];
    for (size_t q = 0; q < take; ++q) (top ? b[edge[q]].y2 : b[edge[q]].x1) = cut;
    b.push_back(top ? Block{0, 0, cut, last.x2, 2 * f.height} : Block{0, 0, last.y1, cut, 2 * f.height});
    b.back().id = static_cast<uint32_t>(b.size());
    std::vector<int64_t*> xs, ys;
    for (Block& r : b) {
      xs.insert(xs.end(), {&r.x1, &r.x2});
      ys.insert(ys.end(), {&r.y1, &r.y2});
    }
    compress(xs, f.width);
    compress(ys, f.height);
  }
  return f;
}

}  // namespace spq::testing
