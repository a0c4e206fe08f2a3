#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spq/perm.hpp"

namespace spq {

// Coordinates are doubled: black b_i sits at (2i, 2 pi(i)); white w_t at (2t+1, 2 s_t + 1), where
// w_0 = (1, 1) and w_n = (2n+1, 2n+1).
struct BipolarVertex {
  bool black = false;
  uint32_t label = 0;  // i for black vertices, t for white ones
  int64_t x = 0, y = 0;
};

struct EmbeddedBipolarGraph {
  uint32_t n = 0;
  std::vector<BipolarVertex> vertices;                  // by x, then y
  std::vector<std::pair<uint32_t, uint32_t>> edges;     // vertex indices, by source then target coordinates
  std::vector<uint32_t> black_at;                       // vertex index of b_i at [i]
};

// Edges join x to every vertex that is minimal among those dominating x. Throws not_baxter, or
// integrity if the result breaks the degree invariants.
EmbeddedBipolarGraph build_embedded(const Permutation& p);
// Empty when every edge is bicoloured and points north-east and every black vertex has in- and
// out-degree 1.
std::string check_degrees(const EmbeddedBipolarGraph& g);

// Slow: no two straight edges meet except at a shared endpoint. Quadratic in the edge count.
bool crossing_free(const EmbeddedBipolarGraph& g);

// White vertices only; edge i runs from the white in-neighbour of b_i to its white out-neighbour.
struct BipolarOrientation {
  uint32_t n = 0;
  std::vector<uint32_t> whites;  // labels t, ascending
  std::vector<uint32_t> from, to;  // indexed by edge 1..n; [0] unused
};

BipolarOrientation contract(const EmbeddedBipolarGraph& g);
// Empty when the orientation is acyclic with w_0 as its only source and w_n as its only sink.
std::string check_orientation(const BipolarOrientation& b);

// Contraction oracle: the white end of edge i is the start of edge j.
bool oracle_edges_adjacent(const BipolarOrientation& b, uint32_t i, uint32_t j);
// Edges leaving the white end of edge i, in increasing position.
std::vector<uint32_t> oracle_edge_neighbors(const BipolarOrientation& b, uint32_t i);

// Edge adjacency answered from nearest-value and range queries on the permutation. Edges are
// named by position; pi() of a position gives the value label.
class BipolarView {
 public:
  using Source = std::function<uint64_t(Query, uint64_t, uint64_t)>;

  BipolarView(Source q, uint64_t n) : q_(std::move(q)), n_(n) {}
  template <class Index>
  static BipolarView over(const Index& idx) {
    return BipolarView([&idx](Query q, uint64_t a, uint64_t b) { return idx.query(q, a, b); }, idx.size());
  }

  uint64_t size() const { return n_; }
  // Requires 1 <= i < j <= n.
  bool edges_adjacent(uint64_t i, uint64_t j) const;
  // Left to right, so the targets descend.
  std::vector<uint64_t> edge_neighbors(uint64_t i) const;

 private:
  Source q_;
  uint64_t n_;
};

// "B i x y" and "W t x y" per vertex, then "E x1 y1 x2 y2" per edge, all doubled coordinates.
void write_graph_dump(std::ostream& out, const EmbeddedBipolarGraph& g);

}  // namespace spq
