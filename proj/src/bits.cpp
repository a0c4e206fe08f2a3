#include <algorithm>
#include <limits>

#include "spq/bits.hpp"

namespace spq {

uint32_t select_in_word(uint64_t x, uint32_t k) {
  uint32_t base = 0;
  for (;;) {
    const uint32_t c = static_cast<uint32_t>(std::popcount(x & 0xffull));
    if (k <= c) break;
    k -= c;
    x >>= 8;
    base += 8;
  }
  for (;; ++base, x >>= 1) {
    if ((x & 1) && --k == 0) return base;
  }
}

IntVector::IntVector(uint64_t size, uint32_t width)
    : size_(size), width_(width), words_((size * width + 63) / 64 + 1, 0) {
  if (width > 64) fail(Errc::format, "integer width above 64");
}

void IntVector::set(uint64_t i, uint64_t v) {
  if (width_ == 0) return;
  const uint64_t off = i * width_, w = off >> 6, s = off & 63;
  const uint64_t m = low_mask(width_);
  v &= m;
  words_[w] = (words_[w] & ~(m << s)) | (v << s);
  if (s + width_ > 64) {
    const uint64_t hi_bits = s + width_ - 64;
    words_[w + 1] = (words_[w + 1] & ~low_mask(static_cast<uint32_t>(hi_bits))) | (v >> (64 - s));
  }
}

RsBitvec::RsBitvec(const std::vector<bool>& bits) : len_(bits.size()) {
  words_.assign((len_ + 63) / 64 + 1, 0);
  for (uint64_t i = 0; i < len_; ++i)
    if (bits[i]) words_[i >> 6] |= 1ull << (i & 63);
  build();
}

RsBitvec::RsBitvec(std::vector<uint64_t> words, uint64_t len) : len_(len), words_(std::move(words)) {
  words_.resize((len_ + 63) / 64 + 1, 0);
  if (len_ & 63) words_[len_ >> 6] &= low_mask(static_cast<uint32_t>(len_ & 63));
  for (uint64_t w = (len_ + 63) / 64; w < words_.size(); ++w) words_[w] = 0;
  build();
}

void RsBitvec::build() {
  const uint64_t nw = (len_ + 63) / 64;
  const uint64_t nblk = (nw + kBlockWords - 1) / kBlockWords;
  cum_.assign(nblk + 1, 0);
  uint64_t c = 0;
  for (uint64_t w = 0; w < nw; ++w) {
    if (w % kBlockWords == 0) cum_[w / kBlockWords] = c;
    c += std::popcount(words_[w]);
  }
  cum_[nblk] = c;
  ones_ = c;
}

uint64_t RsBitvec::rank1(uint64_t i) const {
  if (i > len_) fail(Errc::out_of_range, "rank position out of range");
  if (i == 0) return 0;
  const uint64_t last = (i - 1) >> 6;
  const uint64_t blk = last / kBlockWords;
  uint64_t r = cum_[blk];
  for (uint64_t w = blk * kBlockWords; w < last; ++w) r += std::popcount(words_[w]);
  return r + std::popcount(words_[last] & low_mask(static_cast<uint32_t>(((i - 1) & 63) + 1)));
}

uint64_t RsBitvec::select(bool b, uint64_t k) const {
  const uint64_t total = b ? ones_ : len_ - ones_;
  if (k < 1 || k > total) fail(Errc::not_found, "select rank out of range");
  const uint64_t nw = (len_ + 63) / 64;
  const uint64_t nblk = (nw + kBlockWords - 1) / kBlockWords;
  auto count_before = [&](uint64_t blk) {
    return b ? cum_[blk] : blk * kBlockWords * 64 - cum_[blk];
  };
  uint64_t lo = 0, hi = nblk;  // last block with count_before < k
  while (hi - lo > 1) {
    const uint64_t mid = (lo + hi) / 2;
    if (count_before(mid) < k) lo = mid;
    else hi = mid;
  }
  uint64_t need = k - count_before(lo);
  for (uint64_t w = lo * kBlockWords; w < nw; ++w) {
    const uint64_t x = b ? words_[w] : ~words_[w];
    const uint64_t c = std::popcount(x);
    if (need <= c) return w * 64 + select_in_word(x, static_cast<uint32_t>(need)) + 1;
    need -= c;
  }
  fail(Errc::integrity, "select ran past the end");
}

PackedQuaternary::PackedQuaternary(const std::vector<uint8_t>& symbols, bool with_rank) : len_(symbols.size()) {
  words_.assign((len_ + 31) / 32 + 3, 0);
  for (uint64_t i = 0; i < len_; ++i) {
    if (symbols[i] > 3) fail(Errc::format, "symbol outside {0,1,2,3}");
    words_[i >> 5] |= static_cast<uint64_t>(symbols[i]) << (2 * (i & 31));
  }
  if (with_rank) build_rank();
}

PackedQuaternary PackedQuaternary::from_words(std::vector<uint64_t> words, uint64_t len, bool with_rank) {
  PackedQuaternary q;
  q.len_ = len;
  q.words_ = std::move(words);
  q.words_.resize((len + 31) / 32 + 3, 0);
  if (len & 31) q.words_[len >> 5] &= low_mask(static_cast<uint32_t>(2 * (len & 31)));
  for (uint64_t w = (len + 31) / 32; w < q.words_.size(); ++w) q.words_[w] = 0;
  if (with_rank) q.build_rank();
  return q;
}

namespace {

uint64_t count_symbol(uint64_t w, uint8_t c, uint64_t valid = ~0ull) {
  const uint64_t lo = c & 1 ? w : ~w;
  const uint64_t hi = c & 2 ? (w >> 1) : ~(w >> 1);
  return std::popcount(lo & hi & valid & 0x5555555555555555ull);
}

}  // namespace

void PackedQuaternary::build_rank() {
  const uint64_t nw = (len_ + 31) / 32;
  const uint64_t nblk = nw / kBlockWords + 1;
  cum_.assign(4 * nblk, 0);
  uint64_t c[4] = {0, 0, 0, 0};
  for (uint64_t w = 0; w < nw; ++w) {
    if (w % kBlockWords == 0)
      for (int s = 0; s < 4; ++s) cum_[4 * (w / kBlockWords) + s] = c[s];
    const uint64_t valid = w + 1 == nw && (len_ & 31) ? low_mask(static_cast<uint32_t>(2 * (len_ & 31))) : ~0ull;
    for (uint8_t s = 0; s < 4; ++s) c[s] += count_symbol(words_[w], s, valid);
  }
  if (nw % kBlockWords == 0)
    for (int s = 0; s < 4; ++s) cum_[4 * (nw / kBlockWords) + s] = c[s];
}

uint64_t PackedQuaternary::rank(uint8_t c, uint64_t i) const {
  if (i > len_ || c > 3) fail(Errc::out_of_range, "rank argument out of range");
  if (cum_.empty()) fail(Errc::integrity, "rank directory not built");
  if (i == 0) return 0;
  const uint64_t last = (i - 1) >> 5;
  const uint64_t blk = last / kBlockWords;
  uint64_t r = cum_[4 * blk + c];
  for (uint64_t w = blk * kBlockWords; w < last; ++w) r += count_symbol(words_[w], c);
  const uint32_t k = static_cast<uint32_t>(((i - 1) & 31) + 1);
  return r + count_symbol(words_[last], c, low_mask(2 * k));
}

std::vector<uint8_t> PackedQuaternary::decode() const {
  std::vector<uint8_t> out(len_);
  for (uint64_t i = 0; i < len_; ++i) out[i] = (*this)[i + 1];
  return out;
}

const std::array<NibbleInfo, 256>& nibble_table() {
  static const std::array<NibbleInfo, 256> tab = [] {
    std::array<NibbleInfo, 256> t{};
    for (int key = 0; key < 256; ++key) {
      int cur = 0, mn = 1000, arg = 0;
      for (int u = 0; u < 4; ++u) {
        cur += ((key >> u) & 1) - ((key >> (4 + u)) & 1);
        if (cur < mn) {
          mn = cur;
          arg = u;
        }
      }
      t[key] = NibbleInfo{static_cast<int8_t>(cur), static_cast<int8_t>(mn), static_cast<int8_t>(arg)};
    }
    return t;
  }();
  return tab;
}

const std::array<ByteInfo, 256>& byte_table() {
  static const std::array<ByteInfo, 256> tab = [] {
    std::array<ByteInfo, 256> t{};
    for (int key = 0; key < 256; ++key) {
      int cur = 0, mn = 1000;
      for (int u = 0; u < 8; ++u) {
        cur += ((key >> u) & 1) ? 1 : -1;
        mn = std::min(mn, cur);
      }
      int suf = 0, mx = -1000;
      for (int u = 7; u >= 0; --u) {
        suf += ((key >> u) & 1) ? 1 : -1;
        mx = std::max(mx, suf);
      }
      t[key] = ByteInfo{static_cast<int8_t>(cur), static_cast<int8_t>(mn), static_cast<int8_t>(mx)};
    }
    return t;
  }();
  return tab;
}

uint64_t table_bits() { return 2 * 256 * 3 * 8; }

int64_t ExcessIndex::block_start_excess(uint64_t b) const {
  const uint64_t g = b / kGroupBlocks;
  int64_t e = group_start_excess(g);
  for (uint64_t x = g * kGroupBlocks; x < b; ++x) e += block_delta(x);
  return e;
}

uint64_t ExcessIndex::next_group_at_most(uint64_t g, int64_t target) const {
  uint64_t v = leaves_ + g;
  while (v > 1) {
    if (!(v & 1) && heap_get(v + 1) <= target) {
      v = v + 1;
      while (v < leaves_) v = heap_get(2 * v) <= target ? 2 * v : 2 * v + 1;
      return v - leaves_;
    }
    v >>= 1;
  }
  return ng_;
}

int64_t ExcessIndex::prev_group_at_most(uint64_t g, int64_t target) const {
  uint64_t v = leaves_ + g;
  while (v > 1) {
    if ((v & 1) && heap_get(v - 1) <= target) {
      v = v - 1;
      while (v < leaves_) v = heap_get(2 * v + 1) <= target ? 2 * v + 1 : 2 * v;
      return static_cast<int64_t>(v - leaves_);
    }
    v >>= 1;
  }
  return -1;
}

void ExcessIndex::group_range_min(uint64_t a, uint64_t b, int64_t& best, uint64_t& at) const {
  // Iterative bottom-up range minimum, then descend for the leftmost witness.
  int64_t m = std::numeric_limits<int64_t>::max();
  uint64_t l = a + leaves_, r = b + leaves_ + 1;
  uint64_t lnodes[64], rnodes[64];
  int nl = 0, nr = 0;
  while (l < r) {
    if (l & 1) lnodes[nl++] = l++;
    if (r & 1) rnodes[nr++] = --r;
    l >>= 1;
    r >>= 1;
  }
  uint64_t order[128];
  int k = 0;
  for (int i = 0; i < nl; ++i) order[k++] = lnodes[i];
  for (int i = nr - 1; i >= 0; --i) order[k++] = rnodes[i];
  uint64_t win = 0;
  for (int i = 0; i < k; ++i) {
    if (heap_get(order[i]) < m) {
      m = heap_get(order[i]);
      win = order[i];
    }
  }
  if (m >= best) return;
  while (win < leaves_) win = heap_get(2 * win) == m ? 2 * win : 2 * win + 1;
  best = m;
  at = win - leaves_;
}

uint64_t ExcessIndex::bit_size() const {
  return delta_.bit_size() + min_.bit_size() + gabs_.bit_size() + gmin_.bit_size() + heap_.bit_size() + 4 * 64;
}

// ---- BpSupport ----

namespace {

struct ExplicitAcc {
  const uint64_t* w;
  uint64_t n;
  uint64_t nw;
  StepWord word(uint64_t i) const {
    if (i >= nw) return {0, 0};
    const uint64_t bits = w[i];
    const uint64_t valid = (i + 1) * 64 <= n ? ~0ull : low_mask(static_cast<uint32_t>(n - i * 64));
    return {bits & valid, ~bits & valid};
  }
};

}  // namespace

BpSupport::BpSupport(const std::vector<bool>& bits, uint32_t block_len) : n_(bits.size()), block_len_(block_len) {
  if (block_len == 0 || block_len % 64) fail(Errc::format, "block length must be a positive multiple of 64");
  const uint64_t nb = std::max<uint64_t>(1, (n_ + block_len - 1) / block_len);
  explicit_.assign(nb * (block_len / 64) + 1, 0);
  for (uint64_t i = 0; i < n_; ++i)
    if (bits[i]) explicit_[i >> 6] |= 1ull << (i & 63);
  build_directories();
}

BpSupport::BpSupport(std::shared_ptr<const BpBlockDecoder> dec, uint64_t n, uint32_t block_len)
    : n_(n), block_len_(block_len), dec_(std::move(dec)) {
  if (block_len == 0 || block_len % 64) fail(Errc::format, "block length must be a positive multiple of 64");
  build_directories();
}

const uint64_t* BpSupport::Cursor::load(uint64_t b) const {
  for (uint32_t k = 0; k < kSlots; ++k)
    if (tag_[k] == b) return buf_[k].data();
  const uint32_t slot = victim_;
  victim_ = (victim_ + 1) % kSlots;
  buf_[slot].assign(s_.block_len_ / 64 + 1, 0);
  bool nb = false;
  s_.dec_->decode(b, buf_[slot].data(), nb);
  s_.decoded_.add();
  tag_[slot] = b;
  next_[slot] = nb;
  return buf_[slot].data();
}

StepWord BpSupport::Cursor::word(uint64_t w) const {
  const uint64_t n = s_.n_;
  if (w * 64 >= n) return {0, 0};
  uint64_t bits;
  if (!s_.explicit_.empty()) {
    bits = s_.explicit_[w];
  } else {
    const uint64_t wpb = s_.block_len_ / 64;
    bits = load(w / wpb)[w % wpb];
  }
  const uint64_t valid = (w + 1) * 64 <= n ? ~0ull : low_mask(static_cast<uint32_t>(n - w * 64));
  return {bits & valid, ~bits & valid};
}

uint64_t BpSupport::Cursor::raw(uint64_t p) const { return word((p - 1) >> 6).open; }

bool BpSupport::Cursor::next_bit_of(uint64_t b) const {
  const uint64_t end = (b + 1) * s_.block_len_;
  if (end >= s_.n_) return false;
  if (!s_.explicit_.empty()) return (s_.explicit_[end >> 6] >> (end & 63)) & 1;
  load(b);
  for (uint32_t k = 0; k < kSlots; ++k)
    if (tag_[k] == b) return next_[k];
  return false;
}

void BpSupport::build_directories() {
  Cursor cur(*this);
  ex_.build(cur, n_, block_len_);
  if (n_ > 0 && (ex_.total() != 0)) fail(Errc::integrity, "parenthesis sequence is unbalanced");
  const uint64_t nb = ex_.blocks();
  const uint64_t wpb = block_len_ / 64;
  const uint64_t ng = (nb + ExcessIndex::kGroupBlocks - 1) / ExcessIndex::kGroupBlocks;
  pat_ = IntVector(nb, bits_for(block_len_));
  gpat_ = IntVector(ng + 1, bits_for(n_));
  uint64_t total = 0;
  for (uint64_t b = 0; b < nb; ++b) {
    if (b % ExcessIndex::kGroupBlocks == 0) gpat_.set(b / ExcessIndex::kGroupBlocks, total);
    uint64_t c = 0;
    for (uint64_t k = 0; k < wpb; ++k) {
      const uint64_t w = b * wpb + k;
      const uint64_t x = cur.word(w).open;
      uint64_t nxt;
      if (k + 1 < wpb) nxt = cur.word(w + 1).open & 1;
      else nxt = cur.next_bit_of(b) ? 1 : 0;
      const uint64_t close = cur.word(w).close;
      c += std::popcount(close & ((x >> 1) | (nxt << 63)));
    }
    pat_.set(b, c);
    total += c;
  }
  gpat_.set(ng, total);
  patterns_ = total;
  // Unbalanced prefixes surface as a negative minimum.
  for (uint64_t b = 0; b < nb; ++b)
    if (ex_.block_start_excess(b) + ex_.block_min(b) < 0) fail(Errc::integrity, "parenthesis sequence dips below zero");
  decoded_.reset();
}

void BpSupport::check_pos(uint64_t p) const {
  if (p < 1 || p > n_) fail(Errc::out_of_range, "parenthesis position out of range");
}

bool BpSupport::bit(uint64_t p) const {
  check_pos(p);
  Cursor c(*this);
  return c.bit(p);
}

int64_t BpSupport::excess(uint64_t p) const {
  if (p > n_) fail(Errc::out_of_range, "parenthesis position out of range");
  Cursor c(*this);
  return ex_.excess(c, p);
}

uint64_t BpSupport::findclose(uint64_t p) const {
  Cursor c(*this);
  return findclose(c, p);
}

uint64_t BpSupport::findclose(Cursor& c, uint64_t p) const {
  check_pos(p);
  if (!c.bit(p)) fail(Errc::undefined, "findclose on a closing parenthesis");
  const uint64_t q = ex_.fwd_rel(c, p, -1);
  if (q > n_) fail(Errc::integrity, "no matching close");
  return q;
}

uint64_t BpSupport::findopen(uint64_t p) const {
  Cursor c(*this);
  return findopen(c, p);
}

uint64_t BpSupport::findopen(Cursor& c, uint64_t p) const {
  check_pos(p);
  if (c.bit(p)) fail(Errc::undefined, "findopen on an opening parenthesis");
  const int64_t q = ex_.bwd_rel(c, p, -1);
  if (q < 0) fail(Errc::integrity, "no matching open");
  return static_cast<uint64_t>(q) + 1;
}

uint64_t BpSupport::enclose(uint64_t p) const {
  Cursor c(*this);
  return enclose(c, p);
}

uint64_t BpSupport::enclose(Cursor& c, uint64_t p) const {
  check_pos(p);
  if (!c.bit(p)) fail(Errc::undefined, "enclose on a closing parenthesis");
  const int64_t q = ex_.bwd_rel(c, p, -1);
  if (q < 0) fail(Errc::not_found, "root has no parent");
  return static_cast<uint64_t>(q) + 1;
}

uint64_t BpSupport::rmq(uint64_t i, uint64_t j) const {
  Cursor c(*this);
  return rmq(c, i, j);
}

uint64_t BpSupport::rmq(Cursor& c, uint64_t i, uint64_t j) const {
  check_pos(i);
  check_pos(j);
  if (i > j) fail(Errc::out_of_range, "empty range");
  return ex_.rmq(c, i, j);
}

void BpSupport::pattern_block(uint64_t k, uint64_t& block, uint64_t& local) const {
  if (k < 1 || k > patterns_) fail(Errc::not_found, "pattern rank out of range");
  const uint64_t ng = gpat_.size() - 1;
  uint64_t lo = 0, hi = ng;  // last group with gpat < k
  while (hi - lo > 1) {
    const uint64_t mid = (lo + hi) / 2;
    if (gpat_.get(mid) < k) lo = mid;
    else hi = mid;
  }
  uint64_t need = k - gpat_.get(lo);
  for (uint64_t b = lo * ExcessIndex::kGroupBlocks; b < ex_.blocks(); ++b) {
    const uint64_t c = pat_.get(b);
    if (need <= c) {
      block = b;
      local = need;
      return;
    }
    need -= c;
  }
  fail(Errc::integrity, "pattern directory inconsistent");
}

uint64_t BpSupport::inorder_select(uint64_t k) const {
  Cursor c(*this);
  return inorder_select(c, k);
}

uint64_t BpSupport::inorder_select(Cursor& c, uint64_t k) const {
  uint64_t b = 0, need = 0;
  pattern_block(k, b, need);
  const uint64_t wpb = block_len_ / 64;
  for (uint64_t kk = 0; kk < wpb; ++kk) {
    const uint64_t w = b * wpb + kk;
    const StepWord sw = c.word(w);
    const uint64_t nxt = kk + 1 < wpb ? (c.word(w + 1).open & 1) : (c.next_bit_of(b) ? 1 : 0);
    const uint64_t m = sw.close & ((sw.open >> 1) | (nxt << 63));
    const uint64_t cnt = std::popcount(m);
    if (need <= cnt) return w * 64 + select_in_word(m, static_cast<uint32_t>(need)) + 1;
    need -= cnt;
  }
  fail(Errc::integrity, "pattern not found in block");
}

uint64_t BpSupport::inorder_rank(uint64_t i) const {
  Cursor c(*this);
  return inorder_rank(c, i);
}

uint64_t BpSupport::inorder_rank(Cursor& c, uint64_t i) const {
  if (i > n_) fail(Errc::out_of_range, "position out of range");
  if (i <= 1) return 0;
  const uint64_t last_start = i - 1;  // pattern starts in [1, i-1]
  const uint64_t b = (last_start - 1) / block_len_;
  const uint64_t g = b / ExcessIndex::kGroupBlocks;
  uint64_t r = gpat_.get(g);
  for (uint64_t x = g * ExcessIndex::kGroupBlocks; x < b; ++x) r += pat_.get(x);
  const uint64_t wpb = block_len_ / 64;
  const uint64_t wl = (last_start - 1) >> 6;
  for (uint64_t w = b * wpb; w <= wl; ++w) {
    const StepWord sw = c.word(w);
    const uint64_t nxt = (w + 1) % wpb ? (c.word(w + 1).open & 1) : (c.next_bit_of(b) ? 1 : 0);
    uint64_t m = sw.close & ((sw.open >> 1) | (nxt << 63));
    if (w == wl) m &= low_mask(static_cast<uint32_t>(((last_start - 1) & 63) + 1));
    r += std::popcount(m);
  }
  return r;
}

// Either parenthesis of a pair names the node.
uint64_t BpSupport::parent(uint64_t x) const {
  check_pos(x);
  return enclose(bit(x) ? x : findopen(x));
}

uint64_t BpSupport::first_child(uint64_t x) const {
  check_pos(x);
  if (!bit(x)) fail(Errc::undefined, "not an opening parenthesis");
  if (x + 1 > n_ || !bit(x + 1)) fail(Errc::not_found, "leaf has no children");
  return x + 1;
}

uint64_t BpSupport::last_child(uint64_t x) const {
  const uint64_t c = findclose(x);
  if (c == x + 1) fail(Errc::not_found, "leaf has no children");
  return findopen(c - 1);
}

uint64_t BpSupport::next_sibling(uint64_t x) const {
  const uint64_t c = findclose(x);
  if (c + 1 > n_ || !bit(c + 1)) fail(Errc::not_found, "no next sibling");
  return c + 1;
}

uint64_t BpSupport::subtree_size(uint64_t x) const { return (findclose(x) - x + 1) / 2; }

uint64_t BpSupport::leftmost_leaf(uint64_t x) const {
  check_pos(x);
  Cursor c(*this);
  if (!c.bit(x)) fail(Errc::undefined, "not an opening parenthesis");
  for (uint64_t w = (x - 1) >> 6;; ++w) {
    uint64_t cl = c.word(w).close;
    if (w == ((x - 1) >> 6)) cl &= ~low_mask(static_cast<uint32_t>((x - 1) & 63));
    if (cl) return w * 64 + static_cast<uint64_t>(std::countr_zero(cl));  // open just before the close
  }
}

uint64_t BpSupport::rightmost_leaf(uint64_t x) const {
  const uint64_t e = findclose(x);
  Cursor c(*this);
  for (uint64_t w = (e - 1) >> 6;; --w) {
    uint64_t op = c.word(w).open;
    if (w == ((e - 1) >> 6)) op &= low_mask(static_cast<uint32_t>((e - 1) & 63));
    if (op) return w * 64 + static_cast<uint64_t>(63 - std::countl_zero(op)) + 1;
  }
}

uint64_t BpSupport::lca(uint64_t x, uint64_t y) const {
  if (x > y) std::swap(x, y);
  if (x == y) return x;
  if (y <= findclose(x)) return x;
  return enclose(rmq(x, y) + 1);
}

uint64_t BpSupport::rmq_inorder(uint64_t i, uint64_t j) const {
  Cursor c(*this);
  return rmq_inorder(c, i, j);
}

uint64_t BpSupport::rmq_inorder(Cursor& c, uint64_t i, uint64_t j) const {
  if (i < 1 || j > patterns_ || i > j) fail(Errc::out_of_range, "inorder range out of range");
  if (i == j) return i;
  const uint64_t a = inorder_select(c, i), b = inorder_select(c, j);
  return inorder_rank(c, rmq(c, a, b) + 1);
}

uint64_t BpSupport::psv_inorder(uint64_t i) const {
  Cursor c(*this);
  return psv_inorder(c, i);
}

uint64_t BpSupport::psv_inorder(Cursor& c, uint64_t i) const {
  if (i < 1 || i > patterns_) fail(Errc::out_of_range, "inorder out of range");
  const uint64_t a = inorder_select(c, i);
  return inorder_rank(c, findopen(c, a) - 1);
}

uint64_t BpSupport::nsv_inorder(uint64_t i) const {
  Cursor c(*this);
  return nsv_inorder(c, i);
}

uint64_t BpSupport::nsv_inorder(Cursor& c, uint64_t i) const {
  if (i < 1 || i > patterns_) fail(Errc::out_of_range, "inorder out of range");
  const uint64_t a = inorder_select(c, i);
  return inorder_rank(c, findclose(c, a + 1) + 1) + 1;
}

std::vector<bool> BpSupport::materialize() const {
  std::vector<bool> out(n_);
  Cursor c(*this);
  for (uint64_t p = 1; p <= n_; ++p) out[p - 1] = c.bit(p);
  return out;
}

uint64_t BpSupport::directory_bits() const { return ex_.bit_size() + pat_.bit_size() + gpat_.bit_size(); }

}  // namespace spq
