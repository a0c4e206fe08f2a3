#include "spq/floorplan.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "spq/error.hpp"

namespace spq {

namespace {

int64_t overlap(int64_t a1, int64_t a2, int64_t b1, int64_t b2) { return std::min(a2, b2) - std::max(a1, b1); }

// Top-left deletion on a working copy. The bottom-left process is this one on the mirror image.
std::vector<uint32_t> top_left_order(std::vector<Block> r, int64_t w, int64_t h) {
  const uint32_t n = static_cast<uint32_t>(r.size());
  std::vector<uint8_t> alive(n, 1);
  std::vector<uint32_t> out;
  out.reserve(n);
  for (uint32_t left = n; left > 0; --left) {
    uint32_t b = n;
    for (uint32_t k = 0; k < n && b == n; ++k)
      if (alive[k] && r[k].x1 == 0 && r[k].y2 == h) b = k;
    if (b == n) fail(Errc::integrity, "no block at the top-left corner");
    alive[b] = 0;
    out.push_back(b);
    if (left == 1) break;
    const Block B = r[b];
    // The junction at B's bottom-right corner decides which edge slides.
    bool vertical;
    if (B.x2 == w && B.y1 == 0) {
      fail(Errc::integrity, "deleted block covers the remaining area");
    } else if (B.x2 == w) {
      vertical = true;
    } else if (B.y1 == 0) {
      vertical = false;
    } else {
      bool through = false, across = false;
      for (uint32_t k = 0; k < n; ++k) {
        if (!alive[k]) continue;
        through |= r[k].x1 == B.x2 && r[k].y1 < B.y1 && B.y1 < r[k].y2;
        across |= r[k].y2 == B.y1 && r[k].x1 < B.x2 && B.x2 < r[k].x2;
      }
      if (through == across) fail(Errc::integrity, "no T-junction at a deleted block's corner");
      vertical = through;
    }
    int64_t covered = 0;
    for (uint32_t k = 0; k < n; ++k) {
      if (!alive[k]) continue;
      if (vertical && r[k].y2 == B.y1 && r[k].x1 < B.x2) {
        covered += r[k].x2 - r[k].x1;
        r[k].y2 = h;
      } else if (!vertical && r[k].x1 == B.x2 && r[k].y2 > B.y1) {
        covered += r[k].y2 - r[k].y1;
        r[k].x1 = 0;
      }
    }
    if (covered != (vertical ? B.x2 : h - B.y1)) fail(Errc::integrity, "sliding edge leaves a gap");
  }
  return out;
}

struct SliceNode {
  int kind;  // 0 leaf, 1 vertical cut, 2 horizontal cut
  uint32_t first = 0, second = 0;
  int64_t at = 0;
};

}  // namespace

std::string validate_floorplan(const Floorplan& f) {
  if (f.width <= 0 || f.height <= 0) return "empty bounding rectangle";
  if (f.blocks.empty()) return "no blocks";
  constexpr int64_t kMaxCoord = int64_t{1} << 31;
  if (f.width >= kMaxCoord || f.height >= kMaxCoord) return "bounding rectangle too large";
  unsigned __int128 area = 0;
  std::set<uint32_t> ids;
  for (const Block& b : f.blocks) {
    if (b.x1 < 0 || b.y1 < 0 || b.x2 > f.width || b.y2 > f.height) return "block outside the bounding rectangle";
    if (b.x1 >= b.x2 || b.y1 >= b.y2) return "block with empty interior";
    if (!ids.insert(b.id).second) return "duplicate block id";
    area += static_cast<unsigned __int128>(b.x2 - b.x1) * static_cast<unsigned __int128>(b.y2 - b.y1);
  }
  if (area != static_cast<unsigned __int128>(f.width) * static_cast<unsigned __int128>(f.height))
    return "block areas do not add up to the bounding rectangle";
  std::vector<uint32_t> by_x(f.blocks.size());
  for (uint32_t k = 0; k < by_x.size(); ++k) by_x[k] = k;
  std::sort(by_x.begin(), by_x.end(), [&](uint32_t a, uint32_t b) { return f.blocks[a].x1 < f.blocks[b].x1; });
  for (size_t a = 0; a < by_x.size(); ++a) {
    const Block& p = f.blocks[by_x[a]];
    for (size_t b = a + 1; b < by_x.size() && f.blocks[by_x[b]].x1 < p.x2; ++b) {
      const Block& q = f.blocks[by_x[b]];
      if (overlap(p.y1, p.y2, q.y1, q.y2) > 0) return "blocks overlap";
    }
  }
  // With no overlap and full area, a point that is a corner of four blocks is a cross junction.
  std::map<std::pair<int64_t, int64_t>, int> corners;
  for (const Block& b : f.blocks)
    for (auto pt : {std::pair{b.x1, b.y1}, {b.x1, b.y2}, {b.x2, b.y1}, {b.x2, b.y2}})
      if (++corners[pt] == 4) return "four blocks meet at one point";
  return {};
}

void check_floorplan(const Floorplan& f) {
  const std::string e = validate_floorplan(f);
  if (!e.empty()) fail(Errc::integrity, "invalid floorplan: " + e);
}

const char* side_name(Side s) {
  switch (s) {
    case Side::above: return "above";
    case Side::below: return "below";
    case Side::left: return "left";
    case Side::right: return "right";
  }
  return "?";
}

bool parse_side(const std::string& s, Side& out) {
  for (Side x : {Side::above, Side::below, Side::left, Side::right}) {
    if (s == side_name(x)) {
      out = x;
      return true;
    }
  }
  return false;
}

std::vector<uint32_t> deletion_order(const Floorplan& f, Corner c) {
  check_floorplan(f);
  std::vector<Block> r = f.blocks;
  if (c == Corner::bottom_left)
    for (Block& b : r) {
      const int64_t y1 = f.height - b.y2, y2 = f.height - b.y1;
      b.y1 = y1;
      b.y2 = y2;
    }
  return top_left_order(std::move(r), f.width, f.height);
}

Permutation to_baxter(const Floorplan& f) {
  const std::vector<uint32_t> tl = deletion_order(f, Corner::top_left);
  const std::vector<uint32_t> bl = deletion_order(f, Corner::bottom_left);
  std::vector<uint32_t> rank(f.size());
  for (uint32_t k = 0; k < tl.size(); ++k) rank[tl[k]] = k + 1;
  std::vector<uint32_t> v(f.size());
  for (uint32_t k = 0; k < bl.size(); ++k) v[k] = rank[bl[k]];
  return Permutation(std::move(v));
}

Floorplan in_bottom_left_order(const Floorplan& f) {
  const std::vector<uint32_t> bl = deletion_order(f, Corner::bottom_left);
  Floorplan g;
  g.width = f.width;
  g.height = f.height;
  for (uint32_t k = 0; k < bl.size(); ++k) {
    g.blocks.push_back(f.blocks[bl[k]]);
    g.blocks.back().id = k + 1;
  }
  return g;
}

Floorplan random_slicing(uint32_t n, uint64_t seed) {
  if (n == 0) fail(Errc::out_of_range, "a floorplan needs at least one block");
  std::mt19937_64 rng(seed);
  // Shape the cut tree first: node, blocks still to place.
  std::vector<SliceNode> t{{0}};
  std::vector<std::pair<uint32_t, uint32_t>> work{{0, n}};
  while (!work.empty()) {
    const auto [v, k] = work.back();
    work.pop_back();
    if (k == 1) continue;
    const uint32_t k1 = 1 + static_cast<uint32_t>(rng() % (k - 1));
    t[v].kind = 1 + static_cast<int>(rng() % 2);
    t[v].first = static_cast<uint32_t>(t.size());
    t[v].second = t[v].first + 1;
    t.push_back({0});
    t.push_back({0});
    work.push_back({t[v].second, k - k1});
    work.push_back({t[v].first, k1});
  }
  // In-order numbering keeps each cut strictly inside its region and every cut line distinct.
  int64_t cx = 0, cy = 0;
  std::vector<std::pair<uint32_t, bool>> st{{0, false}};
  while (!st.empty()) {
    auto [v, visited] = st.back();
    st.pop_back();
    if (t[v].kind == 0) continue;
    if (visited) {
      t[v].at = t[v].kind == 1 ? ++cx : ++cy;
      st.push_back({t[v].second, false});
    } else {
      st.push_back({v, true});
      st.push_back({t[v].first, false});
    }
  }
  Floorplan f;
  f.width = cx + 1;
  f.height = cy + 1;
  struct Region {
    uint32_t v;
    Block b;
  };
  std::vector<Region> rs{{0, {0, 0, 0, f.width, f.height}}};
  while (!rs.empty()) {
    const Region r = rs.back();
    rs.pop_back();
    const SliceNode& x = t[r.v];
    if (x.kind == 0) {
      f.blocks.push_back(r.b);
      f.blocks.back().id = static_cast<uint32_t>(f.blocks.size());
      continue;
    }
    Block lo = r.b, hi = r.b;
    if (x.kind == 1) {
      lo.x2 = hi.x1 = x.at;
    } else {
      lo.y2 = hi.y1 = x.at;
    }
    rs.push_back({x.second, hi});
    rs.push_back({x.first, lo});
  }
  return f;
}

FloorplanGeometry::FloorplanGeometry(const Floorplan& f) : f_(&f), seg_(4 * f.size(), kOuter) {
  // Per line: every block edge on it, merged into maximal pieces. Two pieces on one line never
  // touch, since that would need a cross junction.
  struct Edge {
    int64_t line, lo, hi;
    uint32_t slot;
  };
  uint32_t next = 0;
  int64_t reach = 0;
  for (int vertical = 0; vertical < 2; ++vertical) {
    std::vector<Edge> e;
    for (uint32_t k = 0; k < f.size(); ++k) {
      const Block& b = f.blocks[k];
      if (!vertical) {
        if (b.y1 > 0) e.push_back({b.y1, b.x1, b.x2, 4 * k + 0});
        if (b.y2 < f.height) e.push_back({b.y2, b.x1, b.x2, 4 * k + 1});
      } else {
        if (b.x1 > 0) e.push_back({b.x1, b.y1, b.y2, 4 * k + 2});
        if (b.x2 < f.width) e.push_back({b.x2, b.y1, b.y2, 4 * k + 3});
      }
    }
    std::sort(e.begin(), e.end(), [](const Edge& a, const Edge& b) {
      return a.line != b.line ? a.line < b.line : a.lo < b.lo;
    });
    for (size_t k = 0; k < e.size(); ++k) {
      if (k == 0 || e[k].line != e[k - 1].line || e[k].lo > reach) {
        ++next;
        reach = e[k].hi;
      }
      reach = std::max(reach, e[k].hi);
      seg_[e[k].slot] = next;
    }
  }
}

bool FloorplanGeometry::adjacent(Side s, uint32_t a, uint32_t b) const {
  if (a >= f_->size() || b >= f_->size()) fail(Errc::out_of_range, "block index out of range");
  if (a == b) return false;
  // Side of a facing b, then the side of b named by s.
  uint32_t sa, sb;
  switch (s) {
    case Side::above: sa = 0, sb = 1; break;
    case Side::below: sa = 1, sb = 0; break;
    case Side::left: sa = 3, sb = 2; break;
    default: sa = 2, sb = 3; break;
  }
  const uint32_t x = seg_[4 * a + sa];
  return x != kOuter && x == seg_[4 * b + sb];
}

bool FloorplanGeometry::contact(Side s, uint32_t a, uint32_t b) const {
  if (a >= f_->size() || b >= f_->size()) fail(Errc::out_of_range, "block index out of range");
  const Block &p = f_->blocks[a], &q = f_->blocks[b];
  switch (s) {
    case Side::above: return p.y1 == q.y2 && overlap(p.x1, p.x2, q.x1, q.x2) > 0;
    case Side::below: return p.y2 == q.y1 && overlap(p.x1, p.x2, q.x1, q.x2) > 0;
    case Side::left: return p.x2 == q.x1 && overlap(p.y1, p.y2, q.y1, q.y2) > 0;
    case Side::right: return p.x1 == q.x2 && overlap(p.y1, p.y2, q.y1, q.y2) > 0;
  }
  return false;
}

bool geometric_adjacent(const Floorplan& f, Side s, uint32_t a, uint32_t b) {
  return FloorplanGeometry(f).adjacent(s, a, b);
}

void FloorplanView::check(uint64_t i) const {
  if (!in_range(i)) fail(Errc::out_of_range, "block " + std::to_string(i) + " outside [1, n]");
}

bool FloorplanView::adjacent(Side s, uint64_t i, uint64_t j) const {
  check(i);
  check(j);
  if (i == j) return false;
  // The anchor is the nearest neighbour of j on that side; i must be a range extreme between them.
  switch (s) {
    case Side::above: {
      const uint64_t a = q_(Query::nsv, j, 0);
      return in_range(a) && a <= i && q_(Query::rmax, a, i) == i && pi(i) < pi(j);
    }
    case Side::below: {
      const uint64_t a = q_(Query::plv, j, 0);
      return in_range(a) && i <= a && q_(Query::rmin, i, a) == i && pi(i) > pi(j);
    }
    case Side::left: {
      const uint64_t a = q_(Query::psv, j, 0);
      return in_range(a) && i <= a && q_(Query::rmax, i, a) == i && pi(i) < pi(j);
    }
    case Side::right: {
      const uint64_t a = q_(Query::nlv, j, 0);
      return in_range(a) && a <= i && q_(Query::rmin, a, i) == i && pi(i) > pi(j);
    }
  }
  return false;
}

std::vector<uint64_t> FloorplanView::adjacent_set(Side s, uint64_t i) const {
  check(i);
  const uint64_t v = pi(i);
  std::vector<uint64_t> out;
  // Anchor, step query, and whether the chain keeps values above v.
  Query anchor, step;
  bool larger;
  switch (s) {
    case Side::above: anchor = Query::plv, step = Query::psv, larger = true; break;
    case Side::below: anchor = Query::nsv, step = Query::nlv, larger = false; break;
    case Side::left: anchor = Query::nlv, step = Query::nsv, larger = true; break;
    default: anchor = Query::psv, step = Query::plv, larger = false; break;
  }
  for (uint64_t r = q_(anchor, i, 0); in_range(r); r = q_(step, r, 0)) {
    const uint64_t w = pi(r);
    if (larger ? w < v : w > v) break;
    out.push_back(r);
  }
  // Chains that walk leftwards come out right to left or top to bottom.
  if (s == Side::above || s == Side::right) std::reverse(out.begin(), out.end());
  return out;
}

Floorplan read_floorplan(std::istream& in) {
  Floorplan f;
  long long n = 0;
  if (!(in >> n >> f.width >> f.height) || n <= 0 || n > UINT32_MAX)
    fail(Errc::parse, "expected block count, width and height on line 1");
  for (long long k = 0; k < n; ++k) {
    long long id = 0;
    Block b;
    if (!(in >> id >> b.x1 >> b.y1 >> b.x2 >> b.y2)) fail(Errc::parse, "expected " + std::to_string(n) + " blocks");
    if (id < 0 || id > UINT32_MAX) fail(Errc::parse, "block id out of range");
    b.id = static_cast<uint32_t>(id);
    f.blocks.push_back(b);
  }
  std::string extra;
  if (in >> extra) fail(Errc::parse, "trailing data after floorplan");
  const std::string e = validate_floorplan(f);
  if (!e.empty()) fail(Errc::parse, "invalid floorplan: " + e);
  return f;
}

void write_floorplan(std::ostream& out, const Floorplan& f) {
  out << f.size() << ' ' << f.width << ' ' << f.height << '\n';
  for (const Block& b : f.blocks) out << b.id << ' ' << b.x1 << ' ' << b.y1 << ' ' << b.x2 << ' ' << b.y2 << '\n';
}

}  // namespace spq
