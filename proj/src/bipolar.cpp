#include "spq/bipolar.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "spq/error.hpp"

namespace spq {

EmbeddedBipolarGraph build_embedded(const Permutation& p) {
  if (!is_baxter_fast(p.values())) fail(Errc::not_baxter, "permutation is not Baxter");
  const uint32_t n = p.size();
  EmbeddedBipolarGraph g;
  g.n = n;
  auto& vs = g.vertices;
  vs.push_back({false, 0, 1, 1});
  std::set<uint32_t> seen;
  for (uint32_t i = 1; i <= n; ++i) {
    vs.push_back({true, i, 2 * int64_t{i}, 2 * int64_t{p(i)}});
    seen.insert(p(i));
    // Ascent at i: the white vertex sits just above the largest earlier value below p(i+1).
    if (i < n && p(i) < p(i + 1)) {
      const uint32_t s = *std::prev(seen.lower_bound(p(i + 1)));
      vs.push_back({false, i, 2 * int64_t{i} + 1, 2 * int64_t{s} + 1});
    }
  }
  vs.push_back({false, n, 2 * int64_t{n} + 1, 2 * int64_t{n} + 1});

  // Already sorted by x. Distinct y values make dominance strict, so no ties arise below.
  std::vector<int64_t> ys;
  for (const auto& v : vs) ys.push_back(v.y);
  std::sort(ys.begin(), ys.end());
  if (std::adjacent_find(ys.begin(), ys.end()) != ys.end()) fail(Errc::integrity, "two vertices share a row");

  // v is a minimal dominator of u iff no vertex left of v lies in the box between them.
  const uint32_t nv = static_cast<uint32_t>(vs.size());
  for (uint32_t a = 0; a < nv; ++a) {
    int64_t floor = std::numeric_limits<int64_t>::max();
    for (uint32_t b = a + 1; b < nv; ++b) {
      if (vs[b].y < vs[a].y || vs[b].y > floor) continue;
      floor = vs[b].y;
      g.edges.push_back({a, b});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [&](const auto& e, const auto& f) {
    return e.first != f.first ? e.first < f.first : vs[e.second].y < vs[f.second].y;
  });
  g.black_at.assign(n + 1, 0);
  for (uint32_t k = 0; k < nv; ++k)
    if (vs[k].black) g.black_at[vs[k].label] = k;
  const std::string e = check_degrees(g);
  if (!e.empty()) fail(Errc::integrity, "embedded graph: " + e);
  return g;
}

std::string check_degrees(const EmbeddedBipolarGraph& g) {
  std::vector<uint32_t> in(g.vertices.size(), 0), out(g.vertices.size(), 0);
  for (const auto& [a, b] : g.edges) {
    const auto &u = g.vertices[a], &v = g.vertices[b];
    if (u.black == v.black) return "edge joins two vertices of one colour";
    if (u.x > v.x || u.y > v.y) return "edge does not point north-east";
    ++out[a];
    ++in[b];
  }
  for (uint32_t k = 0; k < g.vertices.size(); ++k)
    if (g.vertices[k].black && (in[k] != 1 || out[k] != 1)) return "black vertex without in- and out-degree 1";
  return {};
}

namespace {

struct Pt {
  int64_t x, y;
  bool operator==(const Pt&) const = default;
};

int orient(Pt a, Pt b, Pt c) {
  const int64_t v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

bool on_segment(Pt a, Pt b, Pt c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

// Closed segments ab and cd share a point other than one common endpoint.
bool meet(Pt a, Pt b, Pt c, Pt d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  const bool shared = a == c || a == d || b == c || b == d;
  if (o1 == 0 && o2 == 0) {
    // Collinear: overlapping beyond a single shared endpoint counts.
    int touching = 0;
    for (auto [p, q, r] : {std::tuple{a, b, c}, {a, b, d}, {c, d, a}, {c, d, b}})
      touching += on_segment(p, q, r);
    return shared ? touching > 2 : touching > 0;
  }
  if (shared) return false;
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a)) ||
         (o4 == 0 && on_segment(c, d, b));
}

}  // namespace

bool crossing_free(const EmbeddedBipolarGraph& g) {
  std::vector<std::pair<Pt, Pt>> seg;
  for (const auto& [a, b] : g.edges)
    seg.push_back({{g.vertices[a].x, g.vertices[a].y}, {g.vertices[b].x, g.vertices[b].y}});
  for (size_t i = 0; i < seg.size(); ++i)
    for (size_t j = i + 1; j < seg.size(); ++j)
      if (meet(seg[i].first, seg[i].second, seg[j].first, seg[j].second)) return false;
  return true;
}

BipolarOrientation contract(const EmbeddedBipolarGraph& g) {
  BipolarOrientation b;
  b.n = g.n;
  for (const auto& v : g.vertices)
    if (!v.black) b.whites.push_back(v.label);
  std::sort(b.whites.begin(), b.whites.end());
  b.from.assign(g.n + 1, 0);
  b.to.assign(g.n + 1, 0);
  for (const auto& [x, y] : g.edges) {
    const auto &u = g.vertices[x], &v = g.vertices[y];
    if (v.black) b.from[v.label] = u.label;
    if (u.black) b.to[u.label] = v.label;
  }
  return b;
}

std::string check_orientation(const BipolarOrientation& b) {
  if (b.from.size() != b.n + 1 || b.to.size() != b.n + 1) return "edge count differs from n";
  const uint32_t top = b.n + 1;
  std::vector<uint32_t> in(top, 0), out(top, 0);
  std::vector<uint8_t> white(top, 0);
  for (uint32_t t : b.whites) {
    if (t >= top) return "white label out of range";
    white[t] = 1;
  }
  std::vector<std::vector<uint32_t>> adj(top);
  for (uint32_t i = 1; i <= b.n; ++i) {
    if (b.from[i] >= top || b.to[i] >= top || !white[b.from[i]] || !white[b.to[i]]) return "edge end is not a white vertex";
    ++out[b.from[i]];
    ++in[b.to[i]];
    adj[b.from[i]].push_back(b.to[i]);
  }
  if (!white[0] || !white[b.n]) return "missing w_0 or w_n";
  for (uint32_t t : b.whites) {
    if ((in[t] == 0) != (t == 0)) return "w_0 is not the unique source";
    if ((out[t] == 0) != (t == b.n)) return "w_n is not the unique sink";
  }
  std::vector<uint32_t> ready{0}, indeg = in;
  size_t done = 0;
  while (!ready.empty()) {
    const uint32_t t = ready.back();
    ready.pop_back();
    ++done;
    for (uint32_t u : adj[t])
      if (--indeg[u] == 0) ready.push_back(u);
  }
  if (done != b.whites.size()) return "orientation has a cycle";
  return {};
}

bool oracle_edges_adjacent(const BipolarOrientation& b, uint32_t i, uint32_t j) {
  if (i < 1 || j > b.n || i >= j) fail(Errc::out_of_range, "edges need 1 <= i < j <= n");
  return b.to[i] == b.from[j];
}

std::vector<uint32_t> oracle_edge_neighbors(const BipolarOrientation& b, uint32_t i) {
  if (i < 1 || i > b.n) fail(Errc::out_of_range, "edge outside [1, n]");
  std::vector<uint32_t> out;
  for (uint32_t k = 1; k <= b.n; ++k)
    if (b.from[k] == b.to[i]) out.push_back(k);
  return out;
}

bool BipolarView::edges_adjacent(uint64_t i, uint64_t j) const {
  if (i < 1 || j > n_ || i >= j) fail(Errc::out_of_range, "edges need 1 <= i < j <= n");
  const uint64_t r = q_(Query::nlv, i, 0);
  return r <= j && q_(Query::rmin, r, j) == j && q_(Query::pi, i, 0) < q_(Query::pi, j, 0);
}

std::vector<uint64_t> BipolarView::edge_neighbors(uint64_t i) const {
  if (i < 1 || i > n_) fail(Errc::out_of_range, "edge outside [1, n]");
  std::vector<uint64_t> out;
  const uint64_t v = q_(Query::pi, i, 0);
  // The first neighbour is the next larger value; later ones step down while they stay above v.
  for (uint64_t r = q_(Query::nlv, i, 0); r <= n_ && q_(Query::pi, r, 0) > v; r = q_(Query::nsv, r, 0))
    out.push_back(r);
  return out;
}

void write_graph_dump(std::ostream& out, const EmbeddedBipolarGraph& g) {
  for (const auto& v : g.vertices) out << (v.black ? 'B' : 'W') << ' ' << v.label << ' ' << v.x << ' ' << v.y << '\n';
  for (const auto& [a, b] : g.edges) {
    const auto &u = g.vertices[a], &v = g.vertices[b];
    out << "E " << u.x << ' ' << u.y << ' ' << v.x << ' ' << v.y << '\n';
  }
}

}  // namespace spq
