#include "spq/separable.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace spq {

// ---------------------------------------------------------------------------------------------
// Separable tree

uint64_t SeparableTree::leaf_count() const {
  uint64_t c = 0;
  for (const Node& x : nodes) c += x.leaf();
  return c;
}

std::vector<uint32_t> SeparableTree::leaf_labels() const {
  std::vector<uint32_t> out, st{root};
  while (!st.empty()) {
    const uint32_t v = st.back();
    st.pop_back();
    if (nodes[v].leaf()) {
      out.push_back(nodes[v].label);
      continue;
    }
    for (uint32_t k = nodes[v].count; k-- > 0;) st.push_back(child(v, k));
  }
  return out;
}

SeparableTree build_separable_tree(const Permutation& p) {
  const uint32_t n = p.size();
  if (n == 0) fail(Errc::out_of_range, "empty permutation");
  // Blocks of consecutive values are merged greedily; a merge of the same kind splices the
  // child lists so that kinds alternate down the tree.
  enum : uint8_t { leaf = 0, plus = 1, minus = 2 };
  std::vector<std::vector<uint32_t>> ch;
  std::vector<uint8_t> kind;
  std::vector<uint32_t> label;
  auto make = [&](uint8_t k, uint32_t lab) {
    ch.emplace_back();
    kind.push_back(k);
    label.push_back(lab);
    return static_cast<uint32_t>(ch.size() - 1);
  };
  struct Block {
    uint32_t node, lo, hi;
  };
  std::vector<Block> st;
  for (uint32_t i = 1; i <= n; ++i) {
    const uint32_t x = p(i);
    st.push_back({make(leaf, x), x, x});
    while (st.size() >= 2) {
      const Block b = st.back(), a = st[st.size() - 2];
      uint8_t k;
      if (a.hi + 1 == b.lo) k = plus;
      else if (b.hi + 1 == a.lo) k = minus;
      else break;
      uint32_t node = a.node;
      if (kind[node] != k) {
        node = make(k, 0);
        ch[node].push_back(a.node);
      }
      if (kind[b.node] == k) {
        for (uint32_t c : ch[b.node]) ch[node].push_back(c);
        ch[b.node].clear();
      } else {
        ch[node].push_back(b.node);
      }
      st.pop_back();
      st.back() = {node, std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
  }
  if (st.size() != 1) fail(Errc::not_separable, "permutation is not separable");

  // Renumber in BFS order so that every child list is one contiguous run of kids.
  SeparableTree t;
  t.nodes.reserve(ch.size());
  std::vector<uint32_t> queue{st[0].node};
  t.nodes.emplace_back();
  for (size_t head = 0; head < queue.size(); ++head) {
    const uint32_t old = queue[head];
    auto& x = t.nodes[head];
    x.label = label[old];
    x.plus = kind[old] == plus;
    x.first = static_cast<uint32_t>(t.kids.size());
    x.count = static_cast<uint32_t>(ch[old].size());
    for (uint32_t c : ch[old]) {
      const uint32_t id = static_cast<uint32_t>(queue.size());
      queue.push_back(c);
      t.kids.push_back(id);
      t.nodes.emplace_back();
      t.nodes[id].parent = static_cast<uint32_t>(head);
    }
  }
  t.root = 0;
  return t;
}

// ---------------------------------------------------------------------------------------------
// Tree covering

namespace {

// Bottom-up greedy. Every node either stays pending (joins a part rooted higher up, together
// with a run of its children's pending sets) or closes. A pending set has fewer than `target`
// nodes and at most one edge leaving it; a run is cut into a part once it reaches the target or
// before it would collect a second leaving edge. Items (leaves plus leaving edges) get the same
// treatment with their own target.
class Coverer {
 public:
  explicit Coverer(const SeparableTree& t)
      : t_(t), pend_(t.nodes.size()), edges_(t.nodes.size()), size_(t.nodes.size()), items_(t.nodes.size()),
        pa_(t.nodes.size()), pb_(t.nodes.size()) {}

  void run(uint32_t root, uint32_t run_first, uint32_t run_count, uint32_t excluded, uint32_t target,
           uint32_t item_target, std::vector<CoverPart>& out) {
    root_ = root;
    run_first_ = run_first;
    run_count_ = run_count;
    excluded_ = excluded;
    target_ = target;
    item_target_ = item_target;
    out_ = &out;
    struct Frame {
      uint32_t v, i;
    };
    std::vector<Frame> st{{root, 0}};
    while (!st.empty()) {
      const uint32_t v = st.back().v, i = st.back().i;
      uint32_t f, c;
      kid_range(v, f, c);
      if (i < c) {
        ++st.back().i;
        const uint32_t y = t_.child(v, f + i);
        if (y != excluded_) st.push_back({y, 0});
      } else {
        process(v);
        st.pop_back();
      }
    }
  }

 private:
  struct Run {
    uint32_t a, b, s, it, e;
  };

  void kid_range(uint32_t v, uint32_t& f, uint32_t& c) const {
    if (v == root_) {
      f = run_first_;
      c = run_count_;
    } else {
      f = 0;
      c = t_.nodes[v].count;
    }
  }

  void process(uint32_t v) {
    uint32_t f, c;
    kid_range(v, f, c);
    if (c == 0) {
      if (v == root_) {
        emit(v, f, 0);
      } else {
        pend_[v] = 1;
        size_[v] = 1;
        items_[v] = 1;
        edges_[v] = 0;
        pa_[v] = pb_[v] = 0;
      }
      return;
    }
    tails_.clear();
    bool made = false, open = false;
    Run cur{0, 0, 0, 0, 0};
    for (uint32_t k = 0; k < c; ++k) {
      const uint32_t y = t_.child(v, f + k);
      if (y == excluded_ || !pend_[y]) {
        if (open) tails_.push_back(cur);
        open = false;
        continue;
      }
      if (open && cur.e + edges_[y] > 1) {
        tails_.push_back(cur);
        open = false;
      }
      if (!open) {
        cur = {k, k, 0, 0, 0};
        open = true;
      }
      cur.b = k + 1;
      cur.s += size_[y];
      cur.it += items_[y];
      cur.e += edges_[y];
      if (cur.s + 1 >= target_ || cur.it >= item_target_) {
        emit(v, f + cur.a, cur.b - cur.a);
        made = true;
        open = false;
      }
    }
    if (open) tails_.push_back(cur);

    pend_[v] = 0;
    size_t chosen = tails_.size();
    if (v != root_) {
      for (size_t j = 0; j < tails_.size() && chosen == tails_.size(); ++j) {
        const uint32_t out = c - (tails_[j].b - tails_[j].a) + tails_[j].e;
        if (out <= 1 && tails_[j].it + out < item_target_) chosen = j;
      }
      if (chosen < tails_.size()) {
        pend_[v] = 1;
        size_[v] = 1 + tails_[chosen].s;
        edges_[v] = static_cast<uint8_t>(c - (tails_[chosen].b - tails_[chosen].a) + tails_[chosen].e);
        items_[v] = tails_[chosen].it + edges_[v];
        pa_[v] = f + tails_[chosen].a;
        pb_[v] = f + tails_[chosen].b;
      } else if (tails_.empty() && c <= 1) {
        pend_[v] = 1;
        size_[v] = 1;
        edges_[v] = static_cast<uint8_t>(c);
        items_[v] = c;
        pa_[v] = pb_[v] = f;
      }
    }
    for (size_t j = 0; j < tails_.size(); ++j) {
      if (j == chosen) continue;
      emit(v, f + tails_[j].a, tails_[j].b - tails_[j].a);
      made = true;
    }
    if (!pend_[v] && !made) emit(v, f, 0);
  }

  void emit(uint32_t v, uint32_t from, uint32_t cnt) {
    CoverPart p;
    p.root = v;
    p.run_first = from;
    p.run_count = cnt;
    p.size = 1;
    st_.clear();
    for (uint32_t k = 0; k < cnt; ++k) st_.push_back(t_.child(v, from + k));
    while (!st_.empty()) {
      const uint32_t x = st_.back();
      st_.pop_back();
      ++p.size;
      pend_[x] = 0;
      for (uint32_t k = 0; k < t_.nodes[x].count; ++k) {
        const uint32_t y = t_.child(x, k);
        if (k >= pa_[x] && k < pb_[x]) {
          st_.push_back(y);
        } else {
          if (p.hole != kNoNode) fail(Errc::integrity, "cover part with two leaving edges");
          p.hole = y;
          p.boundary = x;
        }
      }
    }
    out_->push_back(p);
  }

  const SeparableTree& t_;
  std::vector<uint8_t> pend_, edges_;
  std::vector<uint32_t> size_, items_, pa_, pb_;
  std::vector<Run> tails_;
  std::vector<uint32_t> st_;
  std::vector<CoverPart>* out_ = nullptr;
  uint32_t root_ = 0, run_first_ = 0, run_count_ = 0, excluded_ = kNoNode, target_ = 2, item_target_ = 2;
};

uint32_t micro_target(uint32_t ell2) { return (ell2 + 2) / 2; }
// Leaves plus the hole placeholder. Nodes of a separable tree may have many children, so the node
// cap alone does not bound this.
uint32_t micro_item_cap(uint32_t ell2) { return (ell2 + 1) / 2; }
uint32_t micro_item_target(uint32_t ell2) { return micro_item_cap(ell2) / 2 + 1; }

// Members of a part in left-to-right order, root first.
template <class Fn>
void for_members(const SeparableTree& t, const CoverPart& p, Fn&& fn) {
  fn(p.root);
  std::vector<uint32_t> st;
  for (uint32_t k = p.run_count; k-- > 0;) st.push_back(t.child(p.root, p.run_first + k));
  while (!st.empty()) {
    const uint32_t x = st.back();
    st.pop_back();
    fn(x);
    for (uint32_t k = t.nodes[x].count; k-- > 0;) {
      const uint32_t y = t.child(x, k);
      if (y != p.hole) st.push_back(y);
    }
  }
}

}  // namespace

CoverDecomposition cover(const SeparableTree& t, uint32_t ell1, uint32_t ell2) {
  if (ell2 < 3 || ell1 < ell2) fail(Errc::out_of_range, "cover parameters need 3 <= ell2 <= ell1");
  CoverDecomposition c;
  c.ell1 = ell1;
  c.ell2 = ell2;
  Coverer cv(t);
  cv.run(t.root, 0, t.nodes[t.root].count, kNoNode, ell1, UINT32_MAX, c.minis);
  for (uint32_t k = 0; k < c.minis.size(); ++k) {
    const CoverPart& m = c.minis[k];
    cv.run(m.root, m.run_first, m.run_count, m.hole, micro_target(ell2), micro_item_target(ell2), c.micros);
    c.micro_mini.resize(c.micros.size(), k);
  }
  return c;
}

std::string validate_cover(const SeparableTree& t, const CoverDecomposition& c) {
  const size_t nn = t.nodes.size();
  // Per level: sizes, declared holes, and no node is a non-root member of two parts.
  auto level = [&](const std::vector<CoverPart>& parts, uint64_t cap, uint64_t item_cap, const char* what,
                   std::vector<uint32_t>& home) -> std::string {
    home.assign(nn, kNoNode);
    for (uint32_t k = 0; k < parts.size(); ++k) {
      const CoverPart& p = parts[k];
      if (p.root >= nn) return std::string(what) + " part with invalid root";
      if (p.run_first + p.run_count > t.nodes[p.root].count) return std::string(what) + " run out of range";
      if (p.run_count == 0 && !t.nodes[p.root].leaf() && p.hole != kNoNode)
        return std::string(what) + " bare part with a hole";
      uint32_t size = 0, items = p.hole != kNoNode;
      bool hole_seen = p.hole == kNoNode;
      std::string err;
      for_members(t, p, [&](uint32_t x) {
        ++size;
        items += t.nodes[x].leaf();
        if (x != p.root) {
          if (home[x] != kNoNode && err.empty()) err = std::string(what) + " node in two parts";
          home[x] = k;
          if (x == p.boundary && t.nodes[p.hole].parent == x) hole_seen = true;
        }
      });
      if (!err.empty()) return err;
      if (!hole_seen) return std::string(what) + " hole is not a child of a non-root member";
      if (size != p.size) return std::string(what) + " declared size mismatch";
      if (size > cap) return std::string(what) + " part exceeds its size cap";
      if (items > item_cap) return std::string(what) + " part exceeds its item cap";
    }
    return {};
  };

  std::vector<uint32_t> mini_home, micro_home;
  std::string e = level(c.minis, 2ull * c.ell1, UINT64_MAX, "mini", mini_home);
  if (!e.empty()) return e;
  std::vector<uint8_t> rooted(nn, 0);
  for (const CoverPart& p : c.minis) rooted[p.root] = 1;
  for (size_t x = 0; x < nn; ++x)
    if (mini_home[x] == kNoNode && !rooted[x]) return "node outside every mini part";
  e = level(c.micros, c.ell2, micro_item_cap(c.ell2), "micro", micro_home);
  if (!e.empty()) return e;
  if (c.micro_mini.size() != c.micros.size()) return "micro ownership list has the wrong length";

  // Micro parts stay inside their mini and cover it.
  std::vector<uint8_t> covered(nn, 0);
  for (uint32_t k = 0; k < c.micros.size(); ++k) {
    const CoverPart& u = c.micros[k];
    const uint32_t mk = c.micro_mini[k];
    if (mk >= c.minis.size()) return "micro owned by a missing mini";
    const CoverPart& m = c.minis[mk];
    auto in_mini = [&](uint32_t x) { return x == m.root || mini_home[x] == mk; };
    bool ok = true;
    for_members(t, u, [&](uint32_t x) {
      if (!in_mini(x)) ok = false;
      covered[x] = 1;
    });
    if (!ok) return "micro part leaves its mini";
    if (u.hole != kNoNode && u.hole != m.hole && !in_mini(u.hole)) return "micro hole outside its mini";
  }
  for (size_t x = 0; x < nn; ++x)
    if (!covered[x]) return "node outside every micro part";

  // Part counts stay within a constant factor of nodes / target.
  const uint64_t mini_bound = 6 * nn / c.ell1 + 2, micro_bound =
                       6 * nn / std::min(micro_target(c.ell2), micro_item_target(c.ell2) - 1) + 2;
  if (c.minis.size() > mini_bound) return "too many mini parts";
  if (c.micros.size() > micro_bound) return "too many micro parts";
  return {};
}

// ---------------------------------------------------------------------------------------------
// Micro table

namespace {

uint32_t pack(const std::vector<uint8_t>& perm) {
  uint32_t key = static_cast<uint32_t>(perm.size()) << 24;
  for (size_t i = 0; i < perm.size(); ++i) key |= static_cast<uint32_t>(perm[i] - 1) << (3 * (7 - i));
  return key;
}

}  // namespace

MicroTable::MicroTable() {
  std::vector<std::set<std::vector<uint8_t>>> by(kMaxItems + 1);
  by[1].insert({1});
  for (uint32_t m = 2; m <= kMaxItems; ++m) {
    for (uint32_t k = 1; k < m; ++k) {
      for (const auto& a : by[k]) {
        for (const auto& b : by[m - k]) {
          std::vector<uint8_t> s(a), d;
          for (uint8_t x : b) s.push_back(static_cast<uint8_t>(x + k));
          for (uint8_t x : a) d.push_back(static_cast<uint8_t>(x + (m - k)));
          for (uint8_t x : b) d.push_back(x);
          by[m].insert(std::move(s));
          by[m].insert(std::move(d));
        }
      }
    }
  }
  auto add = [&](const std::vector<uint8_t>& r) {
    const uint32_t m = static_cast<uint32_t>(r.size());
    off_.push_back(static_cast<uint32_t>(bytes_.size()));
    bytes_.push_back(static_cast<uint8_t>(m));
    std::vector<uint8_t> inv(m + 1);
    for (uint32_t k = 1; k <= m; ++k) inv[r[k - 1]] = static_cast<uint8_t>(k);
    for (uint32_t k = 1; k <= m; ++k) bytes_.push_back(r[k - 1]);
    for (uint32_t v = 1; v <= m; ++v) bytes_.push_back(inv[v]);
    auto near = [&](uint32_t k, bool prev, bool larger) {
      const int step = prev ? -1 : 1;
      for (int q = static_cast<int>(k) + step; q >= 1 && q <= static_cast<int>(m); q += step)
        if (larger ? r[q - 1] > r[k - 1] : r[q - 1] < r[k - 1]) return static_cast<uint8_t>(q);
      return static_cast<uint8_t>(prev ? 0 : m + 1);
    };
    for (uint32_t k = 1; k <= m; ++k) bytes_.push_back(near(k, true, false));
    for (uint32_t k = 1; k <= m; ++k) bytes_.push_back(near(k, false, false));
    for (uint32_t k = 1; k <= m; ++k) bytes_.push_back(near(k, true, true));
    for (uint32_t k = 1; k <= m; ++k) bytes_.push_back(near(k, false, true));
    for (int which = 0; which < 2; ++which) {
      for (uint32_t j = 1; j <= m; ++j) {
        for (uint32_t i = 1; i <= j; ++i) {
          uint32_t best = i;
          for (uint32_t q = i; q <= j; ++q)
            if (which ? r[q - 1] > r[best - 1] : r[q - 1] < r[best - 1]) best = q;
          bytes_.push_back(static_cast<uint8_t>(best));
        }
      }
    }
  };
  add({});
  add({});
  for (uint32_t m = 1; m <= kMaxItems; ++m)
    for (const auto& r : by[m]) {
      keys_.push_back(pack(r));
      add(r);
    }
}

const MicroTable& MicroTable::instance() {
  static const MicroTable table;
  return table;
}

uint32_t MicroTable::code_of(const std::vector<uint8_t>& perm) const {
  if (perm.empty() || perm.size() > kMaxItems) fail(Errc::not_found, "no table entry of that size");
  const uint32_t key = pack(perm);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) fail(Errc::not_found, "not a separable pattern");
  return static_cast<uint32_t>(it - keys_.begin()) + 2;
}

std::vector<uint8_t> MicroTable::perm(uint32_t code) const {
  if (code >= entries()) fail(Errc::out_of_range, "micro code out of range");
  std::vector<uint8_t> r(size(code));
  for (uint32_t k = 1; k <= r.size(); ++k) r[k - 1] = rho(code, k);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Index construction

uint64_t SeparableIndex::Sparse::bits() const {
  uint64_t b = 0;
  for (const auto& l : lv) b += 32 * l.size();
  return b;
}

namespace {

template <class Better>
void build_sparse(std::vector<std::vector<uint32_t>>& lv, uint32_t count, uint32_t max_len, Better&& better) {
  lv.clear();
  if (count == 0) return;
  lv.emplace_back(count);
  for (uint32_t i = 0; i < count; ++i) lv[0][i] = i;
  for (uint32_t k = 1; (1u << k) <= std::min(count, max_len); ++k) {
    const uint32_t half = 1u << (k - 1), len = count - (1u << k) + 1;
    lv.emplace_back(len);
    for (uint32_t i = 0; i < len; ++i) {
      const uint32_t a = lv[k - 1][i], b = lv[k - 1][i + half];
      lv[k][i] = better(b, a) ? b : a;
    }
  }
}

int64_t clamp64(int64_t x, int64_t lo, int64_t hi) { return std::max(lo, std::min(hi, x)); }

}  // namespace

SeparableIndex SeparableIndex::build(const Permutation& p, uint32_t ell1, uint32_t ell2) {
  const SeparableTree t = build_separable_tree(p);
  SeparableIndex x;
  x.n_ = p.size();
  x.cover_ = cover(t, ell1, ell2);
  const MicroTable& tab = MicroTable::instance();
  const uint32_t nn = static_cast<uint32_t>(t.nodes.size());

  // Leftmost leaf rank, leaf count and smallest label of every subtree.
  std::vector<uint32_t> lpos(nn), cnt(nn), vmin(nn);
  {
    uint32_t r = 0;
    std::vector<uint32_t> st{t.root};
    while (!st.empty()) {
      const uint32_t v = st.back();
      st.pop_back();
      if (t.nodes[v].leaf()) lpos[v] = ++r;
      for (uint32_t k = t.nodes[v].count; k-- > 0;) st.push_back(t.child(v, k));
    }
    for (uint32_t v = nn; v-- > 0;) {
      const auto& nd = t.nodes[v];
      if (nd.leaf()) {
        cnt[v] = 1;
        vmin[v] = nd.label;
        continue;
      }
      lpos[v] = lpos[t.child(v, 0)];
      cnt[v] = 0;
      vmin[v] = UINT32_MAX;
      for (uint32_t k = 0; k < nd.count; ++k) {
        cnt[v] += cnt[t.child(v, k)];
        vmin[v] = std::min(vmin[v], vmin[t.child(v, k)]);
      }
    }
  }
  // First position, full leaf count (hole included) and smallest value of a part.
  auto span = [&](const CoverPart& q, uint32_t& plo, uint32_t& full, uint32_t& vlo) {
    plo = full = vlo = 0;
    if (q.run_count == 0) {
      if (t.nodes[q.root].leaf()) {
        plo = lpos[q.root];
        full = 1;
        vlo = vmin[q.root];
      }
      return;
    }
    plo = lpos[t.child(q.root, q.run_first)];
    vlo = UINT32_MAX;
    for (uint32_t k = 0; k < q.run_count; ++k) {
      const uint32_t c = t.child(q.root, q.run_first + k);
      full += cnt[c];
      vlo = std::min(vlo, vmin[c]);
    }
  };
  auto kind_of = [&](const CoverPart& q) {
    uint8_t k = t.nodes[q.root].plus ? 1 : 0;
    if (q.boundary != kNoNode && t.nodes[q.boundary].plus) k |= 2;
    return k;
  };

  x.mini_.resize(x.cover_.minis.size());
  uint32_t off = 0;
  for (size_t k = 0; k < x.mini_.size(); ++k) {
    const CoverPart& q = x.cover_.minis[k];
    MiniRec& r = x.mini_[k];
    uint32_t full;
    span(q, r.plo, full, r.vlo);
    r.bsize = q.hole == kNoNode ? 0 : cnt[q.hole];
    r.clp = q.hole == kNoNode ? full : lpos[q.hole] - r.plo;
    r.clv = q.hole == kNoNode ? full : vmin[q.hole] - r.vlo;
    r.leaves = full - r.bsize;
    r.off = off;
    r.kind = kind_of(q);
    off += r.leaves;
  }
  if (off != x.n_) fail(Errc::integrity, "mini parts do not partition the leaves");

  // Mini-local ranks: how many of the mini's leaves lie before global position / value g.
  auto tl_pos = [&](const MiniRec& r, int64_t g) {
    return static_cast<uint32_t>(clamp64(g - r.plo, 0, r.clp) +
                                 clamp64(g - (int64_t(r.plo) + r.clp + r.bsize), 0, r.leaves - r.clp));
  };
  auto tl_val = [&](const MiniRec& r, int64_t g) {
    return static_cast<uint32_t>(clamp64(g - r.vlo, 0, r.clv) +
                                 clamp64(g - (int64_t(r.vlo) + r.clv + r.bsize), 0, r.leaves - r.clv));
  };

  x.micro_.resize(x.cover_.micros.size());
  std::vector<uint32_t> items;
  for (size_t k = 0; k < x.micro_.size(); ++k) {
    const CoverPart& q = x.cover_.micros[k];
    MicroRec& u = x.micro_[k];
    u.mini = x.cover_.micro_mini[k];
    u.kind = kind_of(q);
    const MiniRec& T = x.mini_[u.mini];
    items.clear();
    for_members(t, q, [&](uint32_t y) {
      if (t.nodes[y].leaf()) items.push_back(y);
    });
    if (q.hole != kNoNode) {
      // Members come in preorder; the hole sits just before the first leaf to its right.
      const uint32_t hp = lpos[q.hole];
      auto it = std::find_if(items.begin(), items.end(), [&](uint32_t y) { return lpos[y] > hp; });
      items.insert(it, q.hole);
    }
    if (items.size() > MicroTable::kMaxItems) fail(Errc::micro_too_large, "micro part exceeds the table cap");
    u.m = static_cast<uint8_t>(items.size());
    if (u.m == 0) {
      u.code = t.nodes[q.root].plus ? MicroTable::kBarePlus : MicroTable::kBareMinus;
      continue;
    }
    std::vector<uint32_t> order(u.m);
    for (uint32_t i = 0; i < u.m; ++i) order[i] = i;
    auto val = [&](uint32_t i) { return vmin[items[i]]; };
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return val(a) < val(b); });
    std::vector<uint8_t> local(u.m);
    for (uint32_t r = 0; r < u.m; ++r) local[order[r]] = static_cast<uint8_t>(r + 1);
    u.code = tab.code_of(local);
    for (uint32_t i = 0; i < u.m; ++i)
      if (items[i] == q.hole) {
        u.h = static_cast<uint8_t>(i + 1);
        u.ph = local[i];
      }
    uint32_t plo, full, vlo;
    span(q, plo, full, vlo);
    u.s = tl_pos(T, plo);
    u.a = tl_val(T, vlo);
    u.g = q.hole == kNoNode ? 0 : tl_pos(T, int64_t(lpos[q.hole]) + cnt[q.hole]) - tl_pos(T, lpos[q.hole]);
  }

  // Segments: maximal runs of consecutive positions (values) owned by one part.
  struct Tmp {
    uint32_t start, owner;
    uint8_t side;
  };
  std::vector<std::vector<Tmp>> pos2(x.mini_.size()), val2(x.mini_.size());
  for (uint32_t k = 0; k < x.micro_.size(); ++k) {
    const MicroRec& u = x.micro_[k];
    if (u.m == 0) continue;
    if (u.h != 1) pos2[u.mini].push_back({u.s, k, 0});
    if (u.h != 0 && u.h < u.m) pos2[u.mini].push_back({u.s + u.h - 1 + u.g, k, 1});
    if (u.ph != 1) val2[u.mini].push_back({u.a, k, 0});
    if (u.ph != 0 && u.ph < u.m) val2[u.mini].push_back({u.a + u.ph - 1 + u.g, k, 1});
  }
  std::vector<bool> b2p(x.n_), b2v(x.n_);
  std::vector<uint32_t> base2p(x.mini_.size()), base2v(x.mini_.size());
  auto by_start = [](const Tmp& a, const Tmp& b) { return a.start < b.start; };
  for (uint32_t k = 0; k < x.mini_.size(); ++k) {
    std::sort(pos2[k].begin(), pos2[k].end(), by_start);
    std::sort(val2[k].begin(), val2[k].end(), by_start);
    base2p[k] = static_cast<uint32_t>(x.seg2p_.size());
    base2v[k] = static_cast<uint32_t>(x.seg2v_.size());
    for (const Tmp& s : pos2[k]) {
      x.seg2p_.push_back({s.owner, s.start, s.side});
      b2p[x.mini_[k].off + s.start] = true;
    }
    for (const Tmp& s : val2[k]) {
      x.seg2v_.push_back({s.owner, s.start, s.side});
      b2v[x.mini_[k].off + s.start] = true;
    }
  }
  std::vector<Tmp> pos1, val1;
  for (uint32_t k = 0; k < x.mini_.size(); ++k) {
    const MiniRec& r = x.mini_[k];
    if (r.clp > 0) pos1.push_back({r.plo, k, 0});
    if (r.leaves > r.clp) pos1.push_back({r.plo + r.clp + r.bsize, k, 1});
    if (r.clv > 0) val1.push_back({r.vlo, k, 0});
    if (r.leaves > r.clv) val1.push_back({r.vlo + r.clv + r.bsize, k, 1});
  }
  std::sort(pos1.begin(), pos1.end(), by_start);
  std::sort(val1.begin(), val1.end(), by_start);
  std::vector<bool> b1p(x.n_), b1v(x.n_);
  for (const Tmp& s : pos1) {
    Seg1 g{s.owner, s.start, 0, 0, s.side};
    const MiniRec& r = x.mini_[s.owner];
    const uint32_t lo = s.side ? r.clp : 0, hi = s.side ? r.leaves : r.clp;
    const auto& list = pos2[s.owner];
    uint32_t a = 0;
    while (list[a].start < lo) ++a;
    uint32_t b = a;
    while (b + 1 < list.size() && list[b + 1].start < hi) ++b;
    g.first = base2p[s.owner] + a;
    g.last = base2p[s.owner] + b;
    x.seg1p_.push_back(g);
    b1p[s.start - 1] = true;
  }
  for (const Tmp& s : val1) {
    x.seg1v_.push_back({s.owner, s.start, 0, 0, s.side});
    b1v[s.start - 1] = true;
  }
  x.bp1_ = RsBitvec(b1p);
  x.bp2_ = RsBitvec(b2p);
  x.bv1_ = RsBitvec(b1v);
  x.bv2_ = RsBitvec(b2v);

  // Extremes per segment and the sparse tables over them.
  x.ext2_.resize(x.seg2p_.size());
  uint32_t widest = 1;
  for (uint32_t s = 0; s < x.seg2p_.size(); ++s) {
    const Seg2& g = x.seg2p_[s];
    const MicroRec& u = x.micro_[g.micro];
    Ext2& e = x.ext2_[s];
    e.min_rank = UINT32_MAX;
    for (uint32_t k = x.run_lo(u, g.side); k <= x.run_hi(u, g.side); ++k) {
      const uint32_t r = x.item_rank(u, k);
      if (r < e.min_rank) {
        e.min_rank = r;
        e.min_k = static_cast<uint8_t>(k);
      }
      if (r >= e.max_rank) {
        e.max_rank = r;
        e.max_k = static_cast<uint8_t>(k);
      }
    }
  }
  x.ext1_.resize(x.seg1p_.size());
  for (uint32_t s = 0; s < x.seg1p_.size(); ++s) {
    const Seg1& g = x.seg1p_[s];
    widest = std::max(widest, g.last - g.first + 1);
    uint32_t lo = g.first, hi = g.first;
    for (uint32_t q = g.first; q <= g.last; ++q) {
      if (x.ext2_[q].min_rank < x.ext2_[lo].min_rank) lo = q;
      if (x.ext2_[q].max_rank > x.ext2_[hi].max_rank) hi = q;
    }
    const MiniRec& r = x.mini_[g.mini];
    Ext1& e = x.ext1_[s];
    e.min_val = static_cast<uint32_t>(x.abs_value(r, x.ext2_[lo].min_rank));
    e.min_pos = static_cast<uint32_t>(x.item_pos(x.micro_[x.seg2p_[lo].micro], x.ext2_[lo].min_k));
    e.max_val = static_cast<uint32_t>(x.abs_value(r, x.ext2_[hi].max_rank));
    e.max_pos = static_cast<uint32_t>(x.item_pos(x.micro_[x.seg2p_[hi].micro], x.ext2_[hi].max_k));
  }
  const uint32_t s2 = static_cast<uint32_t>(x.ext2_.size()), s1 = static_cast<uint32_t>(x.ext1_.size());
  build_sparse(x.sp2_min_.lv, s2, widest, [&](uint32_t a, uint32_t b) { return x.ext2_[a].min_rank < x.ext2_[b].min_rank; });
  build_sparse(x.sp2_max_.lv, s2, widest, [&](uint32_t a, uint32_t b) { return x.ext2_[a].max_rank > x.ext2_[b].max_rank; });
  build_sparse(x.sp1_min_.lv, s1, s1, [&](uint32_t a, uint32_t b) { return x.ext1_[a].min_val < x.ext1_[b].min_val; });
  build_sparse(x.sp1_max_.lv, s1, s1, [&](uint32_t a, uint32_t b) { return x.ext1_[a].max_val > x.ext1_[b].max_val; });
  x.probes_.reset();
  return x;
}

// ---------------------------------------------------------------------------------------------
// Queries

void SeparableIndex::check_pos(uint64_t i) const {
  if (i < 1 || i > n_) fail(Errc::out_of_range, "index out of range");
}

uint32_t SeparableIndex::item_rank(const MicroRec& u, uint32_t k) const {
  probe();
  const uint32_t v = MicroTable::instance().rho(u.code, k);
  if (u.h == 0 || v < u.ph) return u.a + v - 1;
  return u.a + v - 2 + u.g;
}

uint64_t SeparableIndex::item_pos(const MicroRec& u, uint32_t k) const {
  const uint32_t tl = (u.h == 0 || k < u.h) ? u.s + k - 1 : u.s + k - 2 + u.g;
  const MiniRec& t = mini_[u.mini];
  probe();
  return uint64_t(t.plo) + tl + (tl < t.clp ? 0 : t.bsize);
}

uint64_t SeparableIndex::abs_value(const MiniRec& t, uint32_t r) const {
  return uint64_t(t.vlo) + r + (r < t.clv ? 0 : t.bsize);
}

SeparableIndex::Loc SeparableIndex::locate(uint64_t i) const {
  Loc l;
  l.ms = static_cast<uint32_t>(bp1_.rank1(i) - 1);
  const Seg1& a = seg1p_[l.ms];
  l.mini = a.mini;
  const MiniRec& t = mini_[a.mini];
  const uint32_t tl = (a.side ? t.clp : 0) + static_cast<uint32_t>(i - a.start);
  l.us = static_cast<uint32_t>(bp2_.rank1(uint64_t(t.off) + tl + 1) - 1);
  const Seg2& b = seg2p_[l.us];
  l.micro = b.micro;
  l.side = b.side;
  const MicroRec& u = micro_[b.micro];
  l.k = b.side ? u.h + 1 + (tl - b.start) : 1 + (tl - b.start);
  probe(6);
  return l;
}

uint64_t SeparableIndex::rho(uint64_t i) const {
  check_pos(i);
  const Loc l = locate(i);
  return abs_value(mini_[l.mini], item_rank(micro_[l.micro], l.k));
}

uint64_t SeparableIndex::rho_inverse(uint64_t j) const {
  check_pos(j);
  const uint32_t ms = static_cast<uint32_t>(bv1_.rank1(j) - 1);
  const Seg1& a = seg1v_[ms];
  const MiniRec& t = mini_[a.mini];
  const uint32_t r = (a.side ? t.clv : 0) + static_cast<uint32_t>(j - a.start);
  const uint32_t us = static_cast<uint32_t>(bv2_.rank1(uint64_t(t.off) + r + 1) - 1);
  const Seg2& b = seg2v_[us];
  const MicroRec& u = micro_[b.micro];
  const uint32_t v = b.side ? u.ph + 1 + (r - b.start) : 1 + (r - b.start);
  probe(7);
  return item_pos(u, MicroTable::instance().inv(u.code, v));
}

uint32_t SeparableIndex::key2(uint32_t s, bool mx) const {
  probe();
  return mx ? ext2_[s].max_rank : ext2_[s].min_rank;
}

uint32_t SeparableIndex::key1(uint32_t s, bool mx) const {
  probe();
  return mx ? ext1_[s].max_val : ext1_[s].min_val;
}

uint32_t SeparableIndex::best2(uint32_t l, uint32_t r, bool mx) const {
  const auto& lv = (mx ? sp2_max_ : sp2_min_).lv;
  const uint32_t k = static_cast<uint32_t>(std::bit_width(r - l + 1)) - 1;
  const uint32_t a = lv[k][l], b = lv[k][r + 1 - (1u << k)];
  probe(2);
  return (mx ? key2(b, true) > key2(a, true) : key2(b, false) < key2(a, false)) ? b : a;
}

uint32_t SeparableIndex::best1(uint32_t l, uint32_t r, bool mx) const {
  const auto& lv = (mx ? sp1_max_ : sp1_min_).lv;
  const uint32_t k = static_cast<uint32_t>(std::bit_width(r - l + 1)) - 1;
  const uint32_t a = lv[k][l], b = lv[k][r + 1 - (1u << k)];
  probe(2);
  return (mx ? key1(b, true) > key1(a, true) : key1(b, false) < key1(a, false)) ? b : a;
}

namespace {

// Nearest index in [lo, hi] from one end whose key beats thr. The windows of a sparse table
// extend the run of non-beating indices by halving steps, so this is a weighted-ancestor query
// on the tree whose parent links are previous-smaller (next-smaller) links.
template <class Key>
uint32_t descend(const std::vector<std::vector<uint32_t>>& lv, int64_t lo, int64_t hi, int64_t thr, bool mx,
                 bool from_right, Key&& key) {
  if (lo > hi) return kNoNode;
  auto beats = [&](uint32_t s) { return mx ? int64_t(key(s)) > thr : int64_t(key(s)) < thr; };
  if (from_right) {
    int64_t r = hi + 1;
    for (int k = static_cast<int>(lv.size()) - 1; k >= 0; --k) {
      const int64_t w = int64_t(1) << k;
      if (r - w >= lo && !beats(lv[k][r - w])) r -= w;
    }
    return r == lo ? kNoNode : static_cast<uint32_t>(r - 1);
  }
  int64_t l = lo;
  for (int k = static_cast<int>(lv.size()) - 1; k >= 0; --k) {
    const int64_t w = int64_t(1) << k;
    if (l + w - 1 <= hi && !beats(lv[k][l])) l += w;
  }
  return l > hi ? kNoNode : static_cast<uint32_t>(l);
}

}  // namespace

uint32_t SeparableIndex::search2(int64_t lo, int64_t hi, int64_t thr, bool mx, bool from_right) const {
  return descend((mx ? sp2_max_ : sp2_min_).lv, lo, hi, thr, mx, from_right,
                 [&](uint32_t s) { return key2(s, mx); });
}

uint32_t SeparableIndex::search1(int64_t lo, int64_t hi, int64_t thr, bool mx, bool from_right) const {
  return descend((mx ? sp1_max_ : sp1_min_).lv, lo, hi, thr, mx, from_right,
                 [&](uint32_t s) { return key1(s, mx); });
}

uint64_t SeparableIndex::range_extreme(uint64_t i, uint64_t j, bool mx) const {
  check_pos(i);
  check_pos(j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  if (i == j) return i;
  const MicroTable& tab = MicroTable::instance();
  const Loc A = locate(i), B = locate(j);
  const MicroRec& ua = micro_[A.micro];
  const MicroRec& ub = micro_[B.micro];
  auto local = [&](const MicroRec& u, uint32_t lo, uint32_t hi) {
    probe();
    return mx ? tab.rmax(u.code, lo, hi) : tab.rmin(u.code, lo, hi);
  };
  if (A.us == B.us) return item_pos(ua, local(ua, A.k, B.k));

  uint64_t best_val = 0, best_pos = 0;
  auto offer = [&](uint64_t val, uint64_t pos) {
    if (best_pos == 0 || (mx ? val > best_val : val < best_val)) {
      best_val = val;
      best_pos = pos;
    }
  };
  auto offer_item = [&](const MicroRec& u, uint32_t k) {
    offer(abs_value(mini_[u.mini], item_rank(u, k)), item_pos(u, k));
  };
  auto offer_seg = [&](uint32_t s) {
    const MicroRec& u = micro_[seg2p_[s].micro];
    offer_item(u, mx ? ext2_[s].max_k : ext2_[s].min_k);
  };
  offer_item(ua, local(ua, A.k, run_hi(ua, A.side)));
  offer_item(ub, local(ub, run_lo(ub, B.side), B.k));
  if (A.ms == B.ms) {
    if (A.us + 1 < B.us) offer_seg(best2(A.us + 1, B.us - 1, mx));
  } else {
    probe(2);
    const uint32_t last_a = seg1p_[A.ms].last, first_b = seg1p_[B.ms].first;
    if (A.us < last_a) offer_seg(best2(A.us + 1, last_a, mx));
    if (first_b < B.us) offer_seg(best2(first_b, B.us - 1, mx));
    if (A.ms + 1 < B.ms) {
      const uint32_t s = best1(A.ms + 1, B.ms - 1, mx);
      offer(mx ? ext1_[s].max_val : ext1_[s].min_val, mx ? ext1_[s].max_pos : ext1_[s].min_pos);
    }
  }
  return best_pos;
}

uint64_t SeparableIndex::range_min(uint64_t i, uint64_t j) const { return range_extreme(i, j, false); }
uint64_t SeparableIndex::range_max(uint64_t i, uint64_t j) const { return range_extreme(i, j, true); }

uint64_t SeparableIndex::scan_run(uint32_t us, int64_t thr, bool mx, bool prev) const {
  const Seg2& g = seg2p_[us];
  const MicroRec& u = micro_[g.micro];
  probe(2);
  const int lo = run_lo(u, g.side), hi = run_hi(u, g.side);
  for (int k = prev ? hi : lo; k >= lo && k <= hi; k += prev ? -1 : 1) {
    const int64_t r = item_rank(u, k);
    if (mx ? r > thr : r < thr) return item_pos(u, k);
  }
  fail(Errc::integrity, "segment extreme not found in its run");
}

uint64_t SeparableIndex::nearest(uint64_t i, bool mx, bool prev) const {
  check_pos(i);
  const MicroTable& tab = MicroTable::instance();
  const Loc A = locate(i);
  const MicroRec& u = micro_[A.micro];
  const uint32_t r = item_rank(u, A.k);

  // (1) inside the run that holds i
  probe();
  const uint32_t p = prev ? (mx ? tab.plv(u.code, A.k) : tab.psv(u.code, A.k))
                          : (mx ? tab.nlv(u.code, A.k) : tab.nsv(u.code, A.k));
  if (prev ? p >= run_lo(u, A.side) : p <= run_hi(u, A.side)) return item_pos(u, p);

  // (2) earlier (later) runs of the same mini-level segment, compared by mini-local rank
  probe();
  const Seg1& g = seg1p_[A.ms];
  const uint32_t s = prev ? search2(g.first, int64_t(A.us) - 1, r, mx, true) : search2(int64_t(A.us) + 1, g.last, r, mx, false);
  if (s != kNoNode) return scan_run(s, r, mx, prev);

  // (3) other mini-level segments, compared by absolute value. `below` counts the target
  // mini's values under v, so it also works when the target is the other side of i's own mini.
  const uint64_t v = abs_value(mini_[A.mini], r);
  const uint32_t ms = prev ? search1(0, int64_t(A.ms) - 1, int64_t(v), mx, true)
                           : search1(int64_t(A.ms) + 1, int64_t(seg1p_.size()) - 1, int64_t(v), mx, false);
  if (ms == kNoNode) return prev ? 0 : n_ + 1;
  probe(2);
  const Seg1& h = seg1p_[ms];
  const MiniRec& t = mini_[h.mini];
  const int64_t below = clamp64(int64_t(v) - t.vlo, 0, t.clv) +
                        clamp64(int64_t(v) - (int64_t(t.vlo) + t.clv + t.bsize), 0, int64_t(t.leaves) - t.clv);
  const int64_t thr = mx ? below - 1 : below;
  const uint32_t s2 = search2(h.first, h.last, thr, mx, prev);
  if (s2 == kNoNode) fail(Errc::integrity, "mini-level extreme not found in its segments");
  return scan_run(s2, thr, mx, prev);
}

uint64_t SeparableIndex::psv(uint64_t i) const { return nearest(i, false, true); }
uint64_t SeparableIndex::nsv(uint64_t i) const { return nearest(i, false, false); }
uint64_t SeparableIndex::plv(uint64_t i) const { return nearest(i, true, true); }
uint64_t SeparableIndex::nlv(uint64_t i) const { return nearest(i, true, false); }

uint64_t SeparableIndex::query(Query q, uint64_t a, uint64_t b) const {
  switch (q) {
    case Query::pi: return rho(a);
    case Query::inv: return rho_inverse(a);
    case Query::rmin: return range_min(a, b);
    case Query::rmax: return range_max(a, b);
    case Query::psv: return psv(a);
    case Query::nsv: return nsv(a);
    case Query::plv: return plv(a);
    case Query::nlv: return nlv(a);
  }
  fail(Errc::format, "unknown query");
}

Permutation SeparableIndex::to_permutation() const {
  std::vector<uint32_t> v(n_);
  for (uint64_t i = 1; i <= n_; ++i) v[i - 1] = static_cast<uint32_t>(rho(i));
  return Permutation(std::move(v));
}

IntervalMeta SeparableIndex::mini_meta(uint32_t k) const {
  const MiniRec& r = mini_.at(k);
  IntervalMeta m;
  m.min_l = r.vlo;
  m.max_l = int64_t(r.vlo) + r.clv - 1;
  m.min_r = int64_t(r.vlo) + r.clv + r.bsize;
  m.max_r = int64_t(r.vlo) + r.leaves + r.bsize - 1;
  m.bsize = r.bsize;
  m.root_plus = r.kind & 1;
  m.boundary_plus = r.kind & 2;
  return m;
}

IntervalMeta SeparableIndex::micro_meta(uint32_t k) const {
  const MicroRec& u = micro_.at(k);
  IntervalMeta m;
  const int64_t below = u.h ? u.ph - 1 : u.m;
  m.min_l = u.a;
  m.max_l = int64_t(u.a) + below - 1;
  m.min_r = int64_t(u.a) + below + u.g;
  m.max_r = int64_t(u.a) + (u.h ? u.m - 1 : u.m) + u.g - 1;
  m.bsize = u.g;
  m.root_plus = u.kind & 1;
  m.boundary_plus = u.kind & 2;
  return m;
}

std::vector<uint64_t> SeparableIndex::mini_level_minima() const {
  std::vector<uint64_t> out;
  for (const Ext1& e : ext1_) out.push_back(e.min_val);
  return out;
}

uint32_t SeparableIndex::y_parent(uint32_t s) const {
  return search1(0, int64_t(s) - 1, ext1_.at(s).min_val, false, true);
}

std::vector<uint64_t> SeparableIndex::micro_level_minima(uint32_t ms) const {
  const Seg1& g = seg1p_.at(ms);
  std::vector<uint64_t> out;
  for (uint32_t s = g.first; s <= g.last; ++s) out.push_back(ext2_[s].min_rank);
  return out;
}

uint32_t SeparableIndex::yt_parent(uint32_t ms, uint32_t s) const {
  const Seg1& g = seg1p_.at(ms);
  const uint32_t q = search2(g.first, int64_t(g.first) + s - 1, ext2_.at(g.first + s).min_rank, false, true);
  return q == kNoNode ? kNoNode : q - g.first;
}

uint64_t SeparableIndex::space_bits() const {
  uint64_t b = 8 * (sizeof(MiniRec) * mini_.size() + sizeof(MicroRec) * micro_.size() +
                    sizeof(Seg1) * (seg1p_.size() + seg1v_.size()) + sizeof(Seg2) * (seg2p_.size() + seg2v_.size()) +
                    sizeof(Ext1) * ext1_.size() + sizeof(Ext2) * ext2_.size());
  for (const RsBitvec* v : {&bp1_, &bp2_, &bv1_, &bv2_}) b += v->payload_bits() + v->directory_bits();
  b += sp1_min_.bits() + sp1_max_.bits() + sp2_min_.bits() + sp2_max_.bits();
  return b + MicroTable::instance().bits();
}

}  // namespace spq
