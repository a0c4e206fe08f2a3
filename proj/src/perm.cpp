#include "spq/perm.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace spq {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::ok: return "ok";
    case Errc::not_baxter: return "NotBaxter";
    case Errc::not_separable: return "NotSeparable";
    case Errc::not_alternating: return "NotAlternating";
    case Errc::not_found: return "NotFound";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::undefined: return "Undefined";
    case Errc::integrity: return "IntegrityError";
    case Errc::parse: return "ParseError";
    case Errc::format: return "FormatError";
    case Errc::micro_too_large: return "MicroTooLarge";
    case Errc::cap_exceeded: return "CapExceeded";
  }
  return "Unknown";
}

Permutation::Permutation(std::vector<uint32_t> values) : v_(std::move(values)) {
  if (v_.empty()) fail(Errc::format, "permutation must be non-empty");
  std::vector<char> seen(v_.size() + 1, 0);
  for (uint32_t x : v_) {
    if (x < 1 || x > v_.size() || seen[x]) fail(Errc::format, "values are not a bijection on [n]");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(uint32_t n) {
  std::vector<uint32_t> v(n);
  std::iota(v.begin(), v.end(), 1u);
  return Permutation(std::move(v));
}

std::vector<uint32_t> Permutation::inverse() const {
  std::vector<uint32_t> inv(v_.size());
  for (uint32_t i = 0; i < v_.size(); ++i) inv[v_[i] - 1] = i + 1;
  return inv;
}

bool is_baxter(const std::vector<uint32_t>& v) {
  const size_t n = v.size();
  for (size_t j = 0; j + 1 < n; ++j) {
    const uint32_t a = v[j], b = v[j + 1];
    for (size_t i = 0; i < j; ++i) {
      for (size_t k = j + 2; k < n; ++k) {
        if (b < v[i] && v[i] < v[k] && v[k] < a) return false;  // 2-41-3
        if (a < v[k] && v[k] < v[i] && v[i] < b) return false;  // 3-14-2
      }
    }
  }
  return true;
}

// For each adjacent pair, the extreme left value inside its value interval decides
// whether some right value completes 2-41-3 (descent) or 3-14-2 (ascent).
bool is_baxter_fast(const std::vector<uint32_t>& v) {
  const size_t n = v.size();
  if (n < 4) return true;
  constexpr uint32_t kNone = 0;
  std::vector<uint32_t> probe(n, kNone);
  std::set<uint32_t> seen;
  for (size_t j = 0; j + 1 < n; ++j) {
    const uint32_t lo = std::min(v[j], v[j + 1]), hi = std::max(v[j], v[j + 1]);
    if (v[j] > v[j + 1]) {
      auto it = seen.upper_bound(lo);
      if (it != seen.end() && *it < hi) probe[j] = *it;
    } else {
      auto it = seen.lower_bound(hi);
      if (it != seen.begin() && *std::prev(it) > lo) probe[j] = *std::prev(it);
    }
    seen.insert(v[j]);
  }
  seen.clear();
  for (size_t j = n - 1; j-- > 0;) {
    if (probe[j] != kNone) {
      const uint32_t lo = std::min(v[j], v[j + 1]), hi = std::max(v[j], v[j + 1]);
      if (v[j] > v[j + 1]) {
        auto it = seen.upper_bound(probe[j]);
        if (it != seen.end() && *it < hi) return false;
      } else {
        auto it = seen.upper_bound(lo);
        if (it != seen.end() && *it < probe[j]) return false;
      }
    }
    seen.insert(v[j + 1]);
  }
  return true;
}

bool is_separable(const std::vector<uint32_t>& v) {
  const size_t n = v.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c)
        for (size_t d = c + 1; d < n; ++d) {
          const uint32_t x = v[a], y = v[b], z = v[c], w = v[d];
          if (z < x && x < w && w < y) return false;  // 2-4-1-3
          if (y < w && w < x && x < z) return false;  // 3-1-4-2
        }
  return true;
}

// Merge the top two value blocks while they are adjacent; separable iff one block remains.
bool is_separable_fast(const std::vector<uint32_t>& v) {
  struct Block {
    uint32_t lo, hi;
  };
  std::vector<Block> st;
  for (uint32_t x : v) {
    st.push_back({x, x});
    while (st.size() >= 2) {
      const Block b = st.back(), a = st[st.size() - 2];
      if (a.hi + 1 != b.lo && b.hi + 1 != a.lo) break;
      st.pop_back();
      st.back() = {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
  }
  return st.size() <= 1;
}

bool is_alternating(const std::vector<uint32_t>& v) {
  for (size_t i = 0; i + 2 < v.size(); ++i)
    if ((v[i] < v[i + 1]) == (v[i + 1] < v[i + 2])) return false;
  return true;
}

PermClass classify(const Permutation& p) {
  PermClass c;
  c.is_baxter = is_baxter_fast(p.values());
  c.is_separable = c.is_baxter && is_separable_fast(p.values());
  c.is_alternating = is_alternating(p.values());
  return c;
}

std::vector<uint32_t> CartesianTree::inorder_labels() const {
  std::vector<uint32_t> out;
  std::vector<const CartesianNode*> st;
  const CartesianNode* cur = root;
  while (cur || !st.empty()) {
    while (cur) {
      st.push_back(cur);
      cur = cur->left;
    }
    cur = st.back();
    st.pop_back();
    out.push_back(cur->label);
    cur = cur->right;
  }
  return out;
}

namespace {

std::unique_ptr<CartesianTree> build_cartesian(const Permutation& p, bool min_tree) {
  auto t = std::make_unique<CartesianTree>();
  const uint32_t n = p.size();
  t->nodes.resize(n);
  std::vector<CartesianNode*> spine;
  auto above = [&](uint32_t a, uint32_t b) { return min_tree ? a < b : a > b; };
  for (uint32_t i = 1; i <= n; ++i) {
    CartesianNode* x = &t->nodes[i - 1];
    x->label = p(i);
    x->inorder = i;
    CartesianNode* last = nullptr;
    while (!spine.empty() && !above(spine.back()->label, x->label)) {
      last = spine.back();
      spine.pop_back();
    }
    if (last) {
      x->left = last;
      last->parent = x;
    }
    if (!spine.empty()) {
      spine.back()->right = x;
      x->parent = spine.back();
    }
    spine.push_back(x);
  }
  t->root = spine.front();
  return t;
}

void check_index(const Permutation& p, uint32_t i) {
  if (i < 1 || i > p.size()) fail(Errc::out_of_range, "index out of range");
}

}  // namespace

std::unique_ptr<CartesianTree> build_min_cartesian(const Permutation& p) { return build_cartesian(p, true); }
std::unique_ptr<CartesianTree> build_max_cartesian(const Permutation& p) { return build_cartesian(p, false); }

const char* query_name(Query q) {
  switch (q) {
    case Query::pi: return "pi";
    case Query::inv: return "inv";
    case Query::rmin: return "rmin";
    case Query::rmax: return "rmax";
    case Query::psv: return "psv";
    case Query::nsv: return "nsv";
    case Query::plv: return "plv";
    case Query::nlv: return "nlv";
  }
  return "?";
}

bool parse_query(const std::string& s, Query& out) {
  for (Query q : {Query::pi, Query::inv, Query::rmin, Query::rmax, Query::psv, Query::nsv, Query::plv,
                  Query::nlv}) {
    if (s == query_name(q)) {
      out = q;
      return true;
    }
  }
  return false;
}

namespace oracle {

uint32_t pi(const Permutation& p, uint32_t i) {
  check_index(p, i);
  return p(i);
}

uint32_t pi_inverse(const Permutation& p, uint32_t j) {
  check_index(p, j);
  for (uint32_t i = 1; i <= p.size(); ++i)
    if (p(i) == j) return i;
  fail(Errc::integrity, "value missing");
}

uint32_t rmin(const Permutation& p, uint32_t i, uint32_t j) {
  check_index(p, i);
  check_index(p, j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  uint32_t best = i;
  for (uint32_t k = i + 1; k <= j; ++k)
    if (p(k) < p(best)) best = k;
  return best;
}

uint32_t rmax(const Permutation& p, uint32_t i, uint32_t j) {
  check_index(p, i);
  check_index(p, j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  uint32_t best = i;
  for (uint32_t k = i + 1; k <= j; ++k)
    if (p(k) > p(best)) best = k;
  return best;
}

uint32_t psv(const Permutation& p, uint32_t i) {
  check_index(p, i);
  for (uint32_t k = i - 1; k >= 1; --k)
    if (p(k) < p(i)) return k;
  return 0;
}

uint32_t nsv(const Permutation& p, uint32_t i) {
  check_index(p, i);
  for (uint32_t k = i + 1; k <= p.size(); ++k)
    if (p(k) < p(i)) return k;
  return p.size() + 1;
}

uint32_t plv(const Permutation& p, uint32_t i) {
  check_index(p, i);
  for (uint32_t k = i - 1; k >= 1; --k)
    if (p(k) > p(i)) return k;
  return 0;
}

uint32_t nlv(const Permutation& p, uint32_t i) {
  check_index(p, i);
  for (uint32_t k = i + 1; k <= p.size(); ++k)
    if (p(k) > p(i)) return k;
  return p.size() + 1;
}

uint32_t query(const Permutation& p, Query q, uint32_t a, uint32_t b) {
  switch (q) {
    case Query::pi: return pi(p, a);
    case Query::inv: return pi_inverse(p, a);
    case Query::rmin: return rmin(p, a, b);
    case Query::rmax: return rmax(p, a, b);
    case Query::psv: return psv(p, a);
    case Query::nsv: return nsv(p, a);
    case Query::plv: return plv(p, a);
    case Query::nlv: return nlv(p, a);
  }
  fail(Errc::parse, "unknown query");
}

}  // namespace oracle

void enumerate_class(uint32_t n, PermKind kind, const std::function<void(const Permutation&)>& fn,
                     uint32_t cap) {
  if (n > cap) fail(Errc::cap_exceeded, "exhaustive enumeration cap exceeded");
  if (n == 0) return;
  std::vector<uint32_t> v(n);
  std::iota(v.begin(), v.end(), 1u);
  do {
    bool keep = true;
    if (kind != PermKind::any) keep = is_baxter(v);
    if (keep && kind == PermKind::separable) keep = is_separable(v);
    if (keep) fn(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

uint64_t count_class(uint32_t n, PermKind kind, uint32_t cap) {
  uint64_t c = 0;
  enumerate_class(n, kind, [&](const Permutation&) { ++c; }, cap);
  return c;
}

Permutation random_baxter(uint32_t n, uint64_t seed) {
  if (n == 0) fail(Errc::out_of_range, "n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> v{1};
  std::vector<uint32_t> slots;
  for (uint32_t k = 2; k <= n; ++k) {
    slots.resize(k);
    std::iota(slots.begin(), slots.end(), 0u);
    std::shuffle(slots.begin(), slots.end(), rng);
    bool placed = false;
    for (uint32_t pos : slots) {
      v.insert(v.begin() + pos, k);
      if (is_baxter_fast(v)) {
        placed = true;
        break;
      }
      v.erase(v.begin() + pos);
    }
    // Appending the maximum never creates either pattern.
    if (!placed) fail(Errc::integrity, "no valid insertion position");
  }
  return Permutation(std::move(v));
}

Permutation random_baxter_walk(uint32_t n, uint64_t seed) {
  if (n == 0) fail(Errc::out_of_range, "n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> left(n + 1, 0), right(n + 1, 0);
  std::vector<uint32_t> stack_l, stack_r;
  uint32_t pending = 0;
  for (uint32_t i = 1; i < n; ++i) {
    // pending slots after choosing i's children must lie in [1, n-i].
    const uint32_t base = i == 1 ? 0 : pending - 1;
    std::vector<uint8_t> choices;
    for (uint8_t code = 0; code < 4; ++code) {
      const uint32_t c = (code & 1) + (code >> 1);
      const uint32_t after = base + c;
      if (after >= 1 && after <= n - i) choices.push_back(code);
    }
    const uint8_t code = choices[rng() % choices.size()];
    pending = base + (code & 1) + (code >> 1);
    const bool has_l = code & 1, has_r = code & 2;
    const bool can_l = has_l || !stack_l.empty();
    const bool can_r = has_r || !stack_r.empty();
    const bool go_left = can_l && (!can_r || (rng() & 1));
    const uint32_t next = i + 1;
    if (go_left) {
      if (has_l) {
        left[i] = next;
      } else {
        left[stack_l.back()] = next;
        stack_l.pop_back();
      }
      if (has_r) stack_r.push_back(i);
    } else {
      if (has_r) {
        right[i] = next;
      } else {
        right[stack_r.back()] = next;
        stack_r.pop_back();
      }
      if (has_l) stack_l.push_back(i);
    }
  }
  std::vector<uint32_t> out;
  out.reserve(n);
  std::vector<uint32_t> st;
  uint32_t cur = 1;
  while (cur || !st.empty()) {
    while (cur) {
      st.push_back(cur);
      cur = left[cur];
    }
    cur = st.back();
    st.pop_back();
    out.push_back(cur);
    cur = right[cur];
  }
  return Permutation(std::move(out));
}

namespace {

void separable_fill(std::vector<uint32_t>& out, size_t pos, uint32_t len, uint32_t base, bool plus,
                    std::mt19937_64& rng) {
  if (len == 1) {
    out[pos] = base + 1;
    return;
  }
  const uint32_t cut = 1 + static_cast<uint32_t>(rng() % (len - 1));
  const uint32_t rest = len - cut;
  if (plus) {
    separable_fill(out, pos, cut, base, false, rng);
    separable_fill(out, pos + cut, rest, base + cut, false, rng);
  } else {
    separable_fill(out, pos, cut, base + rest, true, rng);
    separable_fill(out, pos + cut, rest, base, true, rng);
  }
}

}  // namespace

Permutation random_separable(uint32_t n, uint64_t seed) {
  if (n == 0) fail(Errc::out_of_range, "n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> v(n);
  separable_fill(v, 0, n, 0, rng() & 1, rng);
  return Permutation(std::move(v));
}

Permutation read_permutation(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0 || n > UINT32_MAX) fail(Errc::parse, "expected a positive size on line 1");
  std::vector<uint32_t> v;
  v.reserve(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) {
    long long x = 0;
    if (!(in >> x)) fail(Errc::parse, "expected " + std::to_string(n) + " values");
    if (x < 1 || x > n) fail(Errc::parse, "value out of range: " + std::to_string(x));
    v.push_back(static_cast<uint32_t>(x));
  }
  std::string extra;
  if (in >> extra) fail(Errc::parse, "trailing data after permutation");
  try {
    return Permutation(std::move(v));
  } catch (const Error& e) {
    fail(Errc::parse, e.what());
  }
}

void write_permutation(std::ostream& out, const Permutation& p) {
  out << p.size() << '\n';
  for (uint32_t i = 1; i <= p.size(); ++i) out << (i > 1 ? " " : "") << p(i);
  out << '\n';
}

}  // namespace spq
