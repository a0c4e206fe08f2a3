#include "spq/baxter.hpp"

#include <algorithm>
#include <bit>

namespace spq {

namespace {

constexpr uint8_t kHasLeft = 1, kHasRight = 2;

std::vector<uint64_t> bit_words(uint64_t bits) { return std::vector<uint64_t>((bits + 63) / 64 + 2, 0); }

uint64_t valid_mask(uint64_t w, uint64_t m) {
  if (64 * w >= m) return 0;
  return low_mask(static_cast<uint32_t>(std::min<uint64_t>(64, m - 64 * w)));
}

uint64_t window(const std::vector<uint64_t>& words, uint64_t m, int64_t s) {
  if (s >= static_cast<int64_t>(m) || s <= -64) return 0;
  uint64_t x;
  if (s >= 0) {
    x = read64(words.data(), static_cast<uint64_t>(s));
  } else {
    x = words[0] << static_cast<uint32_t>(-s);
  }
  const int64_t room = static_cast<int64_t>(m) - s;
  if (room < 64) x &= low_mask(static_cast<uint32_t>(room));
  return x;
}

}  // namespace

uint8_t BaxterCode::child_code(uint64_t i) const {
  if (i >= n) return 0;
  if (alternating) return ((full[(i - 1) >> 6] >> ((i - 1) & 63)) & 1) ? 3 : 0;
  return E[i];
}

uint64_t BaxterCode::lr_bits(int64_t s) const { return window(lr, steps(), s); }

void BaxterCode::e_planes(int64_t s, uint64_t& lo, uint64_t& hi) const {
  const uint64_t m = steps();
  if (alternating) {
    lo = hi = window(full, m, s);
    return;
  }
  if (s >= static_cast<int64_t>(m) || s <= -64) {
    lo = hi = 0;
    return;
  }
  if (s >= 0) {
    E.planes(static_cast<uint64_t>(s), lo, hi);
  } else {
    E.planes(0, lo, hi);
    lo <<= static_cast<uint32_t>(-s);
    hi <<= static_cast<uint32_t>(-s);
  }
  const int64_t room = static_cast<int64_t>(m) - s;
  if (room < 64) {
    lo &= low_mask(static_cast<uint32_t>(room));
    hi &= low_mask(static_cast<uint32_t>(room));
  }
}

std::vector<uint32_t> replay_parents(const BaxterCode& c) {
  const uint64_t n = c.n;
  if (n == 0) fail(Errc::format, "empty code");
  std::vector<uint32_t> parent(n + 1, 0);
  std::vector<uint8_t> filled(n + 1, 0);
  std::vector<uint32_t> L, R;
  for (uint64_t i = 1; i < n; ++i) {
    const bool right = c.is_right(i);
    const uint8_t e = c.child_code(i);
    uint32_t par;
    if (!right) {
      if (e & kHasLeft) {
        par = static_cast<uint32_t>(i);
      } else {
        if (L.empty()) fail(Errc::not_baxter, "two-stack replay pops an empty stack");
        par = L.back();
        L.pop_back();
      }
      if (e & kHasRight) R.push_back(static_cast<uint32_t>(i));
    } else {
      if (e & kHasRight) {
        par = static_cast<uint32_t>(i);
      } else {
        if (R.empty()) fail(Errc::not_baxter, "two-stack replay pops an empty stack");
        par = R.back();
        R.pop_back();
      }
      if (e & kHasLeft) L.push_back(static_cast<uint32_t>(i));
    }
    const uint8_t side = right ? kHasRight : kHasLeft;
    if (!(c.child_code(par) & side) || (filled[par] & side))
      fail(Errc::not_baxter, "two-stack replay assigns a child twice");
    filled[par] |= side;
    parent[i + 1] = par;
  }
  if (!L.empty() || !R.empty()) fail(Errc::not_baxter, "two-stack replay leaves pending children");
  for (uint64_t v = 1; v <= n; ++v)
    if (filled[v] != c.child_code(v)) fail(Errc::not_baxter, "two-stack replay misses a child");
  return parent;
}

Permutation decode(const BaxterCode& c) {
  const uint64_t n = c.n;
  const auto parent = replay_parents(c);
  std::vector<uint32_t> left(n + 1, 0), right(n + 1, 0);
  for (uint64_t v = 2; v <= n; ++v) (c.is_right(v - 1) ? right : left)[parent[v]] = static_cast<uint32_t>(v);
  std::vector<uint32_t> out, st;
  out.reserve(n);
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
  if (c.right_dummy) out.pop_back();
  if (c.left_dummy) out.erase(out.begin());
  return Permutation(std::move(out));
}

BaxterCode encode(const Permutation& p) {
  const uint64_t n = p.size();
  if (n == 0) fail(Errc::format, "empty permutation");
  if (!is_baxter_fast(p.values())) fail(Errc::not_baxter, "permutation contains 2-41-3 or 3-14-2");
  const auto tree = build_min_cartesian(p);
  std::vector<const CartesianNode*> by_label(n + 1, nullptr);
  for (const auto& x : tree->nodes) by_label[x.label] = &x;
  BaxterCode c;
  c.n = n;
  c.lr = bit_words(n - 1);
  std::vector<uint8_t> e(n - 1);
  for (uint64_t i = 1; i < n; ++i) {
    const CartesianNode* nx = by_label[i + 1];
    if (nx->parent->right == nx) c.lr[(i - 1) >> 6] |= 1ull << ((i - 1) & 63);
    const CartesianNode* x = by_label[i];
    e[i - 1] = static_cast<uint8_t>((x->left ? kHasLeft : 0) | (x->right ? kHasRight : 0));
  }
  c.E = PackedQuaternary(e, false);
  const auto parent = replay_parents(c);
  for (uint64_t v = 2; v <= n; ++v)
    if (parent[v] != by_label[v]->parent->label) fail(Errc::not_baxter, "two-stack replay diverges from MinC");
  return c;
}

BaxterCode encode_alternating(const Permutation& p) {
  const auto& v = p.values();
  const uint64_t n = v.size();
  if (n == 0) fail(Errc::format, "empty permutation");
  if (!is_alternating(v)) fail(Errc::not_alternating, "permutation is not alternating");
  const bool ld = n >= 2 && v[0] < v[1];
  const bool rd = n >= 2 && v[n - 2] > v[n - 1];
  std::vector<uint32_t> aug;
  aug.reserve(n + 2);
  uint32_t next = static_cast<uint32_t>(n) + 1;
  if (ld) aug.push_back(next++);
  aug.insert(aug.end(), v.begin(), v.end());
  if (rd) aug.push_back(next++);
  BaxterCode c = encode(Permutation(std::move(aug)));
  const uint64_t m = c.steps();
  c.full = bit_words(m);
  for (uint64_t i = 1; i <= m; ++i) {
    const uint8_t e = c.E[i];
    if (e == 1 || e == 2) fail(Errc::integrity, "augmented MinC is not full");
    if (e == 3) c.full[(i - 1) >> 6] |= 1ull << ((i - 1) & 63);
  }
  c.E = PackedQuaternary();
  c.alternating = true;
  c.left_dummy = ld;
  c.right_dummy = rd;
  return c;
}

// ---------------------------------------------------------------------------------------------

TreeView::TreeView(std::shared_ptr<const BaxterCode> code, bool max_view, uint32_t block_len, uint64_t first_val,
                   uint64_t last_val)
    : c_(std::move(code)), max_(max_view), n_(c_->n) {
  if (max_) {
    if (first_val < 1 || first_val > n_ || last_val < 1 || last_val > n_)
      fail(Errc::integrity, "max view needs pi(1) and pi(n)");
    no_left_ = n_ + 1 - first_val;
    no_right_ = n_ + 1 - last_val;
  }
  const uint64_t m = steps();
  if (m > 0) {
    lp_.build(LpAcc{this, nullptr}, m, block_len);
    rp_.build(RpAcc{this, nullptr}, m, block_len);
    if (lp_.total() != 0 || rp_.total() != 0) fail(Errc::not_baxter, "push/pop sequences are unbalanced");
    const LpAcc la{this, nullptr};
    const RpAcc ra{this, nullptr};
    if (lp_.excess(la, lp_.rmq(la, 1, m)) < 0 || rp_.excess(ra, rp_.rmq(ra, 1, m)) < 0)
      fail(Errc::not_baxter, "pop from an empty stack");
  }
  u_samples_ = IntVector(m / kUSample + 1, bits_for(m));
  uint64_t r = 0;
  for (uint64_t w = 0; 64 * w < m; ++w) {
    if ((64 * w) % kUSample == 0) u_samples_.set(64 * w / kUSample, r);
    r += std::popcount(u2_word(w));
  }
}

bool TreeView::is_right(uint64_t i) const { return max_ ? !c_->is_right(n_ - i) : c_->is_right(i); }

uint8_t TreeView::child_code(uint64_t v) const {
  if (!max_) return c_->child_code(v);
  uint8_t e = static_cast<uint8_t>(3 - c_->child_code(n_ + 1 - v));
  if (v == no_left_) e &= static_cast<uint8_t>(~kHasLeft);
  if (v == no_right_) e &= static_cast<uint8_t>(~kHasRight);
  return e;
}

void TreeView::step_word(uint64_t w, uint64_t& lr, uint64_t& e0, uint64_t& e1) const {
  const uint64_t m = steps();
  const uint64_t valid = valid_mask(w, m);
  if (!valid) {
    lr = e0 = e1 = 0;
    return;
  }
  if (!max_) {
    lr = c_->lr_bits(static_cast<int64_t>(64 * w));
    c_->e_planes(static_cast<int64_t>(64 * w), e0, e1);
  } else {
    // view step k reads base lr index n-k-1 and base E index n-k (0-based), descending
    const int64_t top = static_cast<int64_t>(n_) - static_cast<int64_t>(64 * w);
    lr = ~reverse64(c_->lr_bits(top - 2 - 63));
    uint64_t lo, hi;
    c_->e_planes(top - 1 - 63, lo, hi);
    e0 = ~reverse64(lo);
    e1 = ~reverse64(hi);
    if (no_left_ > 64 * w && no_left_ <= 64 * w + 64) e0 &= ~(1ull << (no_left_ - 64 * w - 1));
    if (no_right_ > 64 * w && no_right_ <= 64 * w + 64) e1 &= ~(1ull << (no_right_ - 64 * w - 1));
  }
  lr &= valid;
  e0 &= valid;
  e1 &= valid;
}

void TreeView::cached_word(uint64_t w, WordCache* wc, uint64_t& lr, uint64_t& e0, uint64_t& e1) const {
  if (!wc) return step_word(w, lr, e0, e1);
  const uint32_t k = w % WordCache::kSlots;
  if (wc->tag[k] != w) {
    step_word(w, wc->lr[k], wc->e0[k], wc->e1[k]);
    wc->tag[k] = w;
  }
  lr = wc->lr[k];
  e0 = wc->e0[k];
  e1 = wc->e1[k];
}

StepWord TreeView::LpAcc::word(uint64_t w) const {
  uint64_t lr, e0, e1;
  t->cached_word(w, wc, lr, e0, e1);
  const uint64_t valid = valid_mask(w, t->steps());
  return {lr & e0, ~lr & ~e0 & valid};
}

StepWord TreeView::RpAcc::word(uint64_t w) const {
  uint64_t lr, e0, e1;
  t->cached_word(w, wc, lr, e0, e1);
  const uint64_t valid = valid_mask(w, t->steps());
  return {~lr & e1 & valid, lr & ~e1 & valid};
}

Paren TreeView::lp_at(uint64_t i) const {
  if (i < 1 || i > steps()) fail(Errc::out_of_range, "step out of range");
  const bool r = is_right(i);
  const bool left = has_left(i);
  if (r && left) return Paren::open;
  if (!r && !left) return Paren::close;
  return Paren::undefined;
}

Paren TreeView::rp_at(uint64_t i) const {
  if (i < 1 || i > steps()) fail(Errc::out_of_range, "step out of range");
  const bool r = is_right(i);
  const bool right = has_right(i);
  if (!r && right) return Paren::open;
  if (r && !right) return Paren::close;
  return Paren::undefined;
}

uint64_t TreeView::lp_findopen(uint64_t i, WordCache* wc) const {
  if (lp_at(i) != Paren::close) fail(Errc::undefined, "lp is not a closing parenthesis here");
  const int64_t q = lp_.bwd_rel(LpAcc{this, wc}, i, -1);
  if (q < 0) fail(Errc::integrity, "unmatched lp parenthesis");
  return static_cast<uint64_t>(q) + 1;
}

uint64_t TreeView::lp_findclose(uint64_t i, WordCache* wc) const {
  if (lp_at(i) != Paren::open) fail(Errc::undefined, "lp is not an opening parenthesis here");
  const uint64_t q = lp_.fwd_rel(LpAcc{this, wc}, i, -1);
  if (q > steps()) fail(Errc::integrity, "unmatched lp parenthesis");
  return q;
}

uint64_t TreeView::rp_findopen(uint64_t i, WordCache* wc) const {
  if (rp_at(i) != Paren::close) fail(Errc::undefined, "rp is not a closing parenthesis here");
  const int64_t q = rp_.bwd_rel(RpAcc{this, wc}, i, -1);
  if (q < 0) fail(Errc::integrity, "unmatched rp parenthesis");
  return static_cast<uint64_t>(q) + 1;
}

uint64_t TreeView::rp_findclose(uint64_t i, WordCache* wc) const {
  if (rp_at(i) != Paren::open) fail(Errc::undefined, "rp is not an opening parenthesis here");
  const uint64_t q = rp_.fwd_rel(RpAcc{this, wc}, i, -1);
  if (q > steps()) fail(Errc::integrity, "unmatched rp parenthesis");
  return q;
}

uint64_t TreeView::parent_label(uint64_t v, WordCache* wc) const {
  if (v < 1 || v > n_) fail(Errc::out_of_range, "label out of range");
  if (v == 1) fail(Errc::not_found, "the root has no parent");
  const uint64_t i = v - 1;
  if (!is_right(i)) return has_left(i) ? i : lp_findopen(i, wc);
  return has_right(i) ? i : rp_findopen(i, wc);
}

uint64_t TreeView::left_child_label(uint64_t v, WordCache* wc) const {
  if (v < 1 || v > n_) fail(Errc::out_of_range, "label out of range");
  if (!has_left(v)) fail(Errc::not_found, "no left child");
  return !is_right(v) ? v + 1 : lp_findclose(v, wc) + 1;
}

uint64_t TreeView::right_child_label(uint64_t v, WordCache* wc) const {
  if (v < 1 || v > n_) fail(Errc::out_of_range, "label out of range");
  if (!has_right(v)) fail(Errc::not_found, "no right child");
  return is_right(v) ? v + 1 : rp_findclose(v, wc) + 1;
}

TreeView::Step TreeView::next(uint64_t v) const {
  if (v < 1 || v >= n_) fail(Errc::out_of_range, "label has no successor");
  if (!is_right(v)) return has_left(v) ? Step{Move::own_left, v} : Step{Move::pop_left, lp_findopen(v)};
  return has_right(v) ? Step{Move::own_right, v} : Step{Move::pop_right, rp_findopen(v)};
}

uint64_t TreeView::u2_word(uint64_t w) const {
  uint64_t lr, e0, e1;
  step_word(w, lr, e0, e1);
  (void)lr;
  return e0 ^ e1;  // E in {1, 2}: "(}", "{)" or "[]"
}

uint64_t TreeView::rank_u2(uint64_t i) const {
  if (i > steps()) fail(Errc::out_of_range, "step out of range");
  const uint64_t s = i / kUSample;
  uint64_t r = u_samples_.get(s);
  uint64_t w = s * kUSample / 64;
  for (; 64 * (w + 1) <= i; ++w) r += std::popcount(u2_word(w));
  if (i > 64 * w) r += std::popcount(u2_word(w) & low_mask(static_cast<uint32_t>(i - 64 * w)));
  return r;
}

uint64_t TreeView::step_of_lrp(uint64_t pos) const {
  uint64_t lo = 1, hi = steps();  // smallest k with k + rank_u2(k) >= pos
  while (lo < hi) {
    const uint64_t mid = (lo + hi) / 2;
    if (mid + rank_u2(mid) >= pos) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

std::string TreeView::lrp(uint64_t pos, uint64_t len) const {
  std::string out;
  const uint64_t total = lrp_size();
  if (pos < 1 || pos > total) return out;
  uint64_t k = step_of_lrp(pos);
  uint64_t skip = pos - (k - 1 + rank_u2(k - 1)) - 1;
  while (out.size() < len && k <= steps()) {
    const bool r = is_right(k);
    const uint8_t e = child_code(k);
    const char* sym;
    if (r) sym = e == 3 ? "(" : e == 0 ? "}" : e == 1 ? "(}" : "[]";
    else sym = e == 0 ? ")" : e == 3 ? "{" : e == 2 ? "{)" : "[]";
    for (const char* q = sym + skip; *q && out.size() < len; ++q) out.push_back(*q);
    skip = 0;
    ++k;
  }
  return out;
}

uint64_t TreeView::aux_bits() const { return lp_.bit_size() + rp_.bit_size() + u_samples_.bit_size() + 4 * 64; }

// ---------------------------------------------------------------------------------------------

// Preorder walk of the dummy-augmented tree. A frame's phase is the next template slot:
// 0 own '(', 1 left part, 2 left dummy ')', 3 right part, 4 right dummy ')', 5 own ')'.
// Frames left behind at phase 3 (resp. 5) are waiting on their left (resp. right) child.
template <class Emit>
void VirtualCartesian::walk(uint64_t label, uint8_t phase, Emit&& emit) const {
  struct Frame {
    uint64_t label;
    uint8_t phase;
  };
  const TreeView& t = *view_;
  TreeView::WordCache wc;
  thread_local std::vector<Frame> st;
  st.clear();
  st.push_back({label, phase});
  while (!st.empty()) {
    const uint64_t u = st.back().label;
    switch (st.back().phase) {
      case 0:
        st.back().phase = 1;
        if (!emit(true, u, 0, 0)) return;
        break;
      case 1:
        if (t.has_left(u)) {
          st.back().phase = 3;
          st.push_back({t.left_child_label(u, &wc), 0});
        } else {
          st.back().phase = 2;
          if (!emit(true, u, 1, 0)) return;
        }
        break;
      case 2:
        st.back().phase = 3;
        if (!emit(false, u, 2, u)) return;
        break;
      case 3:
        if (t.has_right(u)) {
          st.back().phase = 5;
          st.push_back({t.right_child_label(u, &wc), 0});
        } else {
          st.back().phase = 4;
          if (!emit(true, u, 3, 0)) return;
        }
        break;
      case 4:
        st.back().phase = 5;
        if (!emit(false, u, 4, 0)) return;
        break;
      default: {
        st.pop_back();
        uint64_t owner = 0;
        if (!st.empty()) {
          if (st.back().phase == 3) owner = st.back().label;
        } else if (u != 1) {
          const uint64_t p = t.parent_label(u, &wc);
          const bool left = !t.is_right(u - 1);
          st.push_back({p, static_cast<uint8_t>(left ? 3 : 5)});
          if (left) owner = p;
        }
        if (!emit(false, u, 5, owner)) return;
      }
    }
  }
}

VirtualCartesian::VirtualCartesian(std::shared_ptr<const TreeView> view, uint32_t ell, bool keep_samples)
    : view_(std::move(view)), ell_(ell) {
  if (ell < 64 || !std::has_single_bit(ell)) fail(Errc::format, "block parameter must be a power of two >= 64");
  const uint64_t n = view_->size();
  const uint64_t total = bp_size(), L = block_bits();
  const uint64_t nb = (total + L - 1) / L;
  labels_ = IntVector(nb, bits_for(n));
  codes_ = IntVector(nb, 3);
  if (keep_samples) {
    samples_ = IntVector((n + ell - 1) / ell, bits_for(total));
    mid_labels_ = IntVector(nb, bits_for(n));
    mid_codes_ = IntVector(nb, 3);
    mid_patterns_ = IntVector(nb, bits_for(ell));
  }
  uint64_t pos = 0, half_patterns = 0;
  walk(1, 0, [&](bool, uint64_t owner, uint8_t phase, uint64_t pat) {
    if (pos % L == 0) {
      labels_.set(pos / L, owner);
      codes_.set(pos / L, phase);
      half_patterns = 0;
    }
    if (keep_samples) {
      if (pos % L == ell) {
        mid_labels_.set(pos / L, owner);
        mid_codes_.set(pos / L, phase);
        mid_patterns_.set(pos / L, half_patterns);
      }
      if (phase == 0 && (owner - 1) % ell == 0) samples_.set((owner - 1) / ell, pos + 1);
      if (pat && pos % L < ell) ++half_patterns;
    }
    ++pos;
    return true;
  });
  // Blocks that end before their midpoint keep every pattern in the first half.
  if (keep_samples && total % L != 0 && total % L <= ell) mid_patterns_.set(nb - 1, half_patterns);
  if (pos != total) fail(Errc::integrity, "augmented tree has the wrong size");
}

void VirtualCartesian::decode(uint64_t b, uint64_t* words, bool& next_bit) const {
  const uint64_t L = block_bits();
  std::fill(words, words + L / 64, 0);
  next_bit = false;
  decoded_.add(2);
  if (b >= labels_.size()) return;
  uint64_t pos = 0;
  walk(labels_.get(b), static_cast<uint8_t>(codes_.get(b)), [&](bool bit, uint64_t, uint8_t, uint64_t) {
    if (pos == L) {
      next_bit = bit;
      return false;
    }
    if (bit) words[pos >> 6] |= 1ull << (pos & 63);
    ++pos;
    return true;
  });
}

uint64_t VirtualCartesian::pattern_owner(uint64_t b, uint64_t local) const {
  uint64_t L = block_bits();
  uint64_t label = labels_.get(b), code = codes_.get(b);
  if (mid_patterns_.size() > 0) {
    L = ell_;
    const uint64_t first = mid_patterns_.get(b);
    if (local > first) {
      local -= first;
      label = mid_labels_.get(b);
      code = mid_codes_.get(b);
    }
  }
  decoded_.add(L / ell_);
  uint64_t pos = 0, seen = 0, found = 0;
  walk(label, static_cast<uint8_t>(code), [&](bool, uint64_t, uint8_t, uint64_t pat) {
    if (pos == L) return false;
    ++pos;
    if (pat && ++seen == local) {
      found = pat;
      return false;
    }
    return true;
  });
  if (!found) fail(Errc::integrity, "pattern owner not found in block");
  return found;
}

// ---------------------------------------------------------------------------------------------

BaxterIndex::BaxterIndex(BaxterCode code, uint32_t ell) : code_(std::make_shared<BaxterCode>(std::move(code))), ell_(ell) {
  if (ell < 64 || !std::has_single_bit(ell)) fail(Errc::format, "block parameter must be a power of two >= 64");
  if (code_->n == 0) fail(Errc::format, "empty code");
  replay_parents(*code_);
  min_ = std::make_shared<TreeView>(code_, false, 2 * ell);
  uint64_t v = 1;
  while (min_->has_left(v)) v = min_->left_child_label(v);
  first_val_ = v;
  v = 1;
  while (min_->has_right(v)) v = min_->right_child_label(v);
  last_val_ = v;
  max_ = std::make_shared<TreeView>(code_, true, 2 * ell, first_val_, last_val_);
  min_dec_ = std::make_shared<VirtualCartesian>(min_, ell, true);
  max_dec_ = std::make_shared<VirtualCartesian>(max_, ell, false);
  min_bp_ = std::make_unique<BpSupport>(min_dec_, min_dec_->bp_size(), 2 * ell);
  max_bp_ = std::make_unique<BpSupport>(max_dec_, max_dec_->bp_size(), 2 * ell);
  if (min_bp_->pattern_count() != code_->n || max_bp_->pattern_count() != code_->n)
    fail(Errc::integrity, "augmented tree has the wrong number of nodes");
  reset_counters();
}

BaxterIndex BaxterIndex::build(const Permutation& p, uint32_t ell) { return BaxterIndex(encode(p), ell); }

void BaxterIndex::check_pos(uint64_t i) const {
  if (i < 1 || i > size()) fail(Errc::out_of_range, "position out of range");
}

uint64_t BaxterIndex::pi(uint64_t i) const {
  check_pos(i);
  uint64_t b = 0, local = 0;
  min_bp_->pattern_block(i + off(), b, local);
  return min_dec_->pattern_owner(b, local);
}

uint64_t BaxterIndex::pi_from_max(uint64_t i) const {
  check_pos(i);
  uint64_t b = 0, local = 0;
  max_bp_->pattern_block(i + off(), b, local);
  return code_->n + 1 - max_dec_->pattern_owner(b, local);
}

uint64_t BaxterIndex::inorder_of(BpSupport::Cursor& cur, uint64_t label, uint64_t open) const {
  const uint64_t c = min_->has_left(label) ? min_bp_->findclose(cur, open + 1) : open + 2;
  return min_bp_->inorder_rank(cur, c + 1);
}

// Walks labels s..j from the sample s, tracking opening positions in the MinC BP. A pop of
// a node p < s is resolved from the inorder a of the current node: after an L-pop p sits at
// NSV(PLV(a)), after an R-pop at PSV(NLV(a)). One cursor per tree keeps nearby blocks decoded.
uint64_t BaxterIndex::aug_inverse(uint64_t j) const {
  const uint64_t n = code_->n;
  const uint64_t s = (j - 1) / ell_ * ell_ + 1;
  BpSupport::Cursor cmin(*min_bp_), cmax(*max_bp_);
  std::vector<uint64_t> open(j - s + 1);
  open[0] = min_dec_->sample((j - 1) / ell_);
  auto open_of = [&](uint64_t p, uint64_t v, bool left_pop) -> uint64_t {
    if (p >= s) return open[p - s];
    const uint64_t a = inorder_of(cmin, v, open[v - s]);
    uint64_t x;
    if (left_pop) {
      const uint64_t b = max_bp_->psv_inorder(cmax, a);
      if (b == 0) fail(Errc::integrity, "pop without a larger predecessor");
      x = min_bp_->nsv_inorder(cmin, b);
    } else {
      const uint64_t b = max_bp_->nsv_inorder(cmax, a);
      if (b > n) fail(Errc::integrity, "pop without a larger successor");
      x = min_bp_->psv_inorder(cmin, b);
    }
    if (x < 1 || x > n) fail(Errc::integrity, "pop target outside the sequence");
    return min_bp_->findopen(cmin, min_bp_->inorder_select(cmin, x)) - 1;
  };
  for (uint64_t v = s; v < j; ++v) {
    steps_.add();
    const TreeView::Step st = min_->next(v);
    uint64_t o;
    switch (st.move) {
      case TreeView::Move::own_left:
        o = open[v - s] + 1;
        break;
      case TreeView::Move::own_right:
        o = min_->has_left(v) ? min_bp_->findclose(cmin, open[v - s] + 1) + 1 : open[v - s] + 3;
        break;
      case TreeView::Move::pop_left:
        o = open_of(st.parent, v, true) + 1;
        break;
      default:
        o = min_bp_->findclose(cmin, open_of(st.parent, v, false) + 1) + 1;
    }
    open[v + 1 - s] = o;
  }
  return inorder_of(cmin, j, open[j - s]);
}

uint64_t BaxterIndex::pi_inverse(uint64_t j) const {
  if (j < 1 || j > size()) fail(Errc::out_of_range, "value out of range");
  return aug_inverse(j) - off();
}

uint64_t BaxterIndex::map_prev(uint64_t p) const { return p <= off() ? 0 : p - off(); }

uint64_t BaxterIndex::map_next(uint64_t p) const {
  const uint64_t x = p - off();
  return x > size() ? size() + 1 : x;
}

uint64_t BaxterIndex::rmin(uint64_t i, uint64_t j) const {
  check_pos(i);
  check_pos(j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  return min_bp_->rmq_inorder(i + off(), j + off()) - off();
}

uint64_t BaxterIndex::rmax(uint64_t i, uint64_t j) const {
  check_pos(i);
  check_pos(j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  return max_bp_->rmq_inorder(i + off(), j + off()) - off();
}

uint64_t BaxterIndex::psv(uint64_t i) const {
  check_pos(i);
  return map_prev(min_bp_->psv_inorder(i + off()));
}

uint64_t BaxterIndex::nsv(uint64_t i) const {
  check_pos(i);
  return map_next(min_bp_->nsv_inorder(i + off()));
}

uint64_t BaxterIndex::plv(uint64_t i) const {
  check_pos(i);
  return map_prev(max_bp_->psv_inorder(i + off()));
}

uint64_t BaxterIndex::nlv(uint64_t i) const {
  check_pos(i);
  return map_next(max_bp_->nsv_inorder(i + off()));
}

uint64_t BaxterIndex::query(Query q, uint64_t a, uint64_t b) const {
  switch (q) {
    case Query::pi: return pi(a);
    case Query::inv: return pi_inverse(a);
    case Query::rmin: return rmin(a, b);
    case Query::rmax: return rmax(a, b);
    case Query::psv: return psv(a);
    case Query::nsv: return nsv(a);
    case Query::plv: return plv(a);
    case Query::nlv: return nlv(a);
  }
  fail(Errc::format, "unknown query");
}

Permutation BaxterIndex::to_permutation() const { return decode(*code_); }

SpaceReport BaxterIndex::space_report() const {
  SpaceReport r;
  r.core_bits = code_->core_bits();
  r.aux_bits = min_->aux_bits() + max_->aux_bits() + min_dec_->aux_bits() + max_dec_->aux_bits() +
               min_bp_->directory_bits() + max_bp_->directory_bits() + table_bits() + 4 * 64;
  return r;
}

uint64_t BaxterIndex::blocks_decoded() const {
  return min_dec_->blocks_decoded() + max_dec_->blocks_decoded();
}

void BaxterIndex::reset_counters() const {
  min_dec_->reset_counters();
  max_dec_->reset_counters();
  steps_.reset();
}

}  // namespace spq
