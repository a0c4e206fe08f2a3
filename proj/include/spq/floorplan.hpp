#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spq/perm.hpp"

namespace spq {

// Axis-aligned block with integer corners, y increasing upward.
struct Block {
  uint32_t id = 0;
  int64_t x1 = 0, y1 = 0, x2 = 0, y2 = 0;
};

// Blocks partitioning [0, width] x [0, height].
struct Floorplan {
  int64_t width = 0, height = 0;
  std::vector<Block> blocks;
  uint64_t size() const { return blocks.size(); }
};

// Empty when the blocks tile the bounding rectangle and every junction is a T, otherwise the
// first failure found.
std::string validate_floorplan(const Floorplan& f);
void check_floorplan(const Floorplan& f);  // throws integrity

enum class Corner { top_left, bottom_left };
enum class Side { above, below, left, right };
const char* side_name(Side s);
bool parse_side(const std::string& s, Side& out);

// Indices into f.blocks in the order the corner-deletion process removes them. Throws integrity
// when some step has no T-junction at the deleted block's far corner.
std::vector<uint32_t> deletion_order(const Floorplan& f, Corner c);
// Block i of the bottom-left order is block pi(i) of the top-left order.
Permutation to_baxter(const Floorplan& f);
// The same floorplan with blocks listed in bottom-left order and ids 1..n, so block i answers
// queries about position i.
Floorplan in_bottom_left_order(const Floorplan& f);

// Recursive random cuts; every cut line gets its own coordinate, so no four blocks ever meet.
Floorplan random_slicing(uint32_t n, uint64_t seed);

// Geometric oracle over f.blocks indices. Block a lies directly on side s of block b when a's
// opposite side and b's side s lie on one maximal dividing segment. This relation survives sliding
// segments along each other; plain edge overlap does not, so overlap is offered only as a check.
class FloorplanGeometry {
 public:
  explicit FloorplanGeometry(const Floorplan& f);
  bool adjacent(Side s, uint32_t a, uint32_t b) const;
  // a touches side s of b along a boundary piece of positive length; implies adjacent().
  bool contact(Side s, uint32_t a, uint32_t b) const;

 private:
  static constexpr uint32_t kOuter = UINT32_MAX;
  const Floorplan* f_;
  std::vector<uint32_t> seg_;  // per block: bottom, top, left, right segment ids
};
bool geometric_adjacent(const Floorplan& f, Side s, uint32_t a, uint32_t b);

// Adjacency in bottom-left numbering, answered from range and nearest-value queries on the
// floorplan's permutation. The source must outlive the view.
class FloorplanView {
 public:
  using Source = std::function<uint64_t(Query, uint64_t, uint64_t)>;

  FloorplanView(Source q, uint64_t n) : q_(std::move(q)), n_(n) {}
  template <class Index>
  static FloorplanView over(const Index& idx) {
    return FloorplanView([&idx](Query q, uint64_t a, uint64_t b) { return idx.query(q, a, b); }, idx.size());
  }

  uint64_t size() const { return n_; }
  // Block i lies directly on side s of block j.
  bool adjacent(Side s, uint64_t i, uint64_t j) const;
  // Every j with adjacent(s, i, j), left to right for above/below and bottom to top otherwise.
  std::vector<uint64_t> adjacent_set(Side s, uint64_t i) const;

 private:
  uint64_t pi(uint64_t i) const { return q_(Query::pi, i, 0); }
  bool in_range(uint64_t i) const { return i >= 1 && i <= n_; }
  void check(uint64_t i) const;

  Source q_;
  uint64_t n_;
};

// Line 1: n width height; then n lines "id x1 y1 x2 y2".
Floorplan read_floorplan(std::istream& in);
void write_floorplan(std::ostream& out, const Floorplan& f);

}  // namespace spq
