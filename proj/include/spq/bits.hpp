#pragma once

#ifdef __BMI2__
#include <immintrin.h>
#endif

#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spq/error.hpp"

namespace spq {

inline uint32_t bits_for(uint64_t max_value) { return max_value == 0 ? 1 : 64 - std::countl_zero(max_value); }

// 64 bits starting at bit offset `off`; `w` must carry one zero word of padding.
inline uint64_t read64(const uint64_t* w, uint64_t off) {
  const uint64_t i = off >> 6, s = off & 63;
  uint64_t x = w[i] >> s;
  if (s) x |= w[i + 1] << (64 - s);
  return x;
}

// Relaxed counter that survives copies; used for query instrumentation.
class Counter {
 public:
  Counter() = default;
  Counter(const Counter& o) : v_(o.get()) {}
  Counter& operator=(const Counter& o) {
    v_.store(o.get(), std::memory_order_relaxed);
    return *this;
  }
  void add(uint64_t d = 1) const { v_.fetch_add(d, std::memory_order_relaxed); }
  uint64_t get() const { return v_.load(std::memory_order_relaxed); }
  void reset() const { v_.store(0, std::memory_order_relaxed); }

 private:
  mutable std::atomic<uint64_t> v_{0};
};

inline uint64_t low_mask(uint32_t k) { return k >= 64 ? ~0ull : ((1ull << k) - 1); }

// Gathers the even-indexed bits of x into the low 32 bits.
inline uint64_t even_bits(uint64_t x) {
#ifdef __BMI2__
  return _pext_u64(x, 0x5555555555555555ull);
#endif
  x &= 0x5555555555555555ull;
  x = (x | (x >> 1)) & 0x3333333333333333ull;
  x = (x | (x >> 2)) & 0x0f0f0f0f0f0f0f0full;
  x = (x | (x >> 4)) & 0x00ff00ff00ff00ffull;
  x = (x | (x >> 8)) & 0x0000ffff0000ffffull;
  x = (x | (x >> 16)) & 0x00000000ffffffffull;
  return x;
}

inline uint64_t reverse64(uint64_t x) {
  x = ((x >> 1) & 0x5555555555555555ull) | ((x & 0x5555555555555555ull) << 1);
  x = ((x >> 2) & 0x3333333333333333ull) | ((x & 0x3333333333333333ull) << 2);
  x = ((x >> 4) & 0x0f0f0f0f0f0f0f0full) | ((x & 0x0f0f0f0f0f0f0f0full) << 4);
  return __builtin_bswap64(x);
}

// 0-based index of the k-th (1-based) set bit of x; x must hold at least k ones.
uint32_t select_in_word(uint64_t x, uint32_t k);

// Fixed-width packed unsigned integers.
class IntVector {
 public:
  IntVector() = default;
  IntVector(uint64_t size, uint32_t width);

  uint64_t size() const { return size_; }
  uint32_t width() const { return width_; }
  uint64_t get(uint64_t i) const {
    return width_ == 0 ? 0 : read64(words_.data(), i * width_) & low_mask(width_);
  }
  void set(uint64_t i, uint64_t v);
  uint64_t bit_size() const { return size_ * width_; }
  const std::vector<uint64_t>& words() const { return words_; }
  bool operator==(const IntVector& o) const {
    if (size_ != o.size_ || width_ != o.width_) return false;
    for (uint64_t i = 0; i < size_; ++i)
      if (get(i) != o.get(i)) return false;
    return true;
  }

 private:
  uint64_t size_ = 0;
  uint32_t width_ = 0;
  std::vector<uint64_t> words_;
};

// Plain bit array with rank/select; positions are 1-based.
class RsBitvec {
 public:
  RsBitvec() = default;
  explicit RsBitvec(const std::vector<bool>& bits);
  RsBitvec(std::vector<uint64_t> words, uint64_t len);

  uint64_t size() const { return len_; }
  bool operator[](uint64_t i) const { return (words_[(i - 1) >> 6] >> ((i - 1) & 63)) & 1; }
  uint64_t rank1(uint64_t i) const;
  uint64_t rank(bool b, uint64_t i) const { return b ? rank1(i) : i - rank1(i); }
  uint64_t ones() const { return ones_; }
  uint64_t select(bool b, uint64_t k) const;
  uint64_t select1(uint64_t k) const { return select(true, k); }
  const std::vector<uint64_t>& words() const { return words_; }

  uint64_t payload_bits() const { return len_; }
  uint64_t directory_bits() const { return cum_.size() * 64; }

 private:
  static constexpr uint32_t kBlockWords = 8;
  void build();

  uint64_t len_ = 0;
  uint64_t ones_ = 0;
  std::vector<uint64_t> words_;
  std::vector<uint64_t> cum_;
};

// Sequence over {0,1,2,3} at 2 bits per symbol, LSB-first; positions are 1-based.
class PackedQuaternary {
 public:
  PackedQuaternary() = default;
  explicit PackedQuaternary(const std::vector<uint8_t>& symbols, bool with_rank = true);
  static PackedQuaternary from_words(std::vector<uint64_t> words, uint64_t len, bool with_rank);

  uint64_t size() const { return len_; }
  uint8_t operator[](uint64_t i) const { return (words_[(i - 1) >> 5] >> (2 * ((i - 1) & 31))) & 3; }
  uint64_t rank(uint8_t c, uint64_t i) const;
  // Bit planes of the 64 symbols starting at 0-based index i0: low plane, high plane.
  void planes(uint64_t i0, uint64_t& lo, uint64_t& hi) const {
    const uint64_t a = read64(words_.data(), 2 * i0), b = read64(words_.data(), 2 * i0 + 64);
    lo = even_bits(a) | (even_bits(b) << 32);
    hi = even_bits(a >> 1) | (even_bits(b >> 1) << 32);
  }
  std::vector<uint8_t> decode() const;
  const std::vector<uint64_t>& words() const { return words_; }

  uint64_t payload_bits() const { return 2 * len_; }
  uint64_t directory_bits() const { return cum_.size() * 64; }

 private:
  static constexpr uint32_t kBlockWords = 16;
  void build_rank();

  uint64_t len_ = 0;
  std::vector<uint64_t> words_;
  std::vector<uint64_t> cum_;  // 4 counters per block
};

// Nibble lookup for ternary step sequences: key = open nibble | close nibble << 4.
struct NibbleInfo {
  int8_t delta;
  int8_t min;     // min prefix sum over lengths 1..4
  int8_t argmin;  // first offset reaching min
};
const std::array<NibbleInfo, 256>& nibble_table();

// Byte lookup for eight consecutive parentheses (bit = open), used after compacting the
// defined positions of a step word.
struct ByteInfo {
  int8_t delta;
  int8_t min;     // min prefix sum over lengths 1..8
  int8_t max_suffix;  // max suffix sum over lengths 1..8
};
const std::array<ByteInfo, 256>& byte_table();
// Both lookup tables, counted as auxiliary space.
uint64_t table_bits();

// Word-level access to a sequence of +1/0/-1 steps. Word w holds positions 64w+1..64w+64.
struct StepWord {
  uint64_t open;
  uint64_t close;
};

// Block/group/heap excess directory over a step sequence of length n.
// E(0)=0 and E(p) is the sum of steps 1..p. Searches take an accessor `acc.word(w)`.
class ExcessIndex {
 public:
  static constexpr uint32_t kGroupBlocks = 16;

  ExcessIndex() = default;

  template <class Acc>
  void build(const Acc& acc, uint64_t n, uint32_t block_len);

  uint64_t size() const { return n_; }
  uint32_t block_len() const { return block_len_; }
  uint64_t blocks() const { return nb_; }
  int64_t block_start_excess(uint64_t b) const;  // E(first position of b - 1)
  int64_t block_delta(uint64_t b) const { return static_cast<int64_t>(delta_.get(b)) - block_len_; }
  int64_t block_min(uint64_t b) const { return static_cast<int64_t>(min_.get(b)) - block_len_; }
  int64_t total() const { return block_start_excess(nb_ - 1) + block_delta(nb_ - 1); }

  template <class Acc>
  int64_t excess(const Acc& acc, uint64_t p) const;
  // Smallest q > p with E(q) <= target, given E(p) > target; n+1 if none.
  template <class Acc>
  uint64_t fwd(const Acc& acc, uint64_t p, int64_t target) const { return fwd_from(acc, p, excess(acc, p), target); }
  // Same, with target E(p) + d; avoids computing E(p).
  template <class Acc>
  uint64_t fwd_rel(const Acc& acc, uint64_t p, int64_t d) const { return fwd_from(acc, p, 0, d); }
  // Largest q < p with E(q) <= target, given E(p-1) > target; -1 if none (E(0) counts).
  template <class Acc>
  int64_t bwd(const Acc& acc, uint64_t p, int64_t target) const {
    return bwd_from(acc, p, p == 0 ? 0 : excess(acc, p - 1), target);
  }
  // Same, with target E(p-1) + d.
  template <class Acc>
  int64_t bwd_rel(const Acc& acc, uint64_t p, int64_t d) const { return bwd_from(acc, p, 0, d); }
  // Leftmost argmin of E over [i, j].
  template <class Acc>
  uint64_t rmq(const Acc& acc, uint64_t i, uint64_t j) const;

  uint64_t bit_size() const;

 private:
  int64_t group_min(uint64_t g) const { return static_cast<int64_t>(gmin_.get(g)) - static_cast<int64_t>(n_); }
  int64_t heap_get(uint64_t v) const { return static_cast<int64_t>(heap_.get(v)) - static_cast<int64_t>(n_); }
  // Leftmost group > g whose min is <= target, or groups() if none.
  uint64_t next_group_at_most(uint64_t g, int64_t target) const;
  // Rightmost group < g whose min is <= target, or -1 if none.
  int64_t prev_group_at_most(uint64_t g, int64_t target) const;
  // Leftmost group in [a, b] with min < best; updates best and at.
  void group_range_min(uint64_t a, uint64_t b, int64_t& best, uint64_t& at) const;
  int64_t group_start_excess(uint64_t g) const { return static_cast<int64_t>(gabs_.get(g)) - static_cast<int64_t>(n_); }
  uint64_t groups() const { return ng_; }
  // cur is E(p) (resp. E(p-1)) shifted by any constant; target uses the same shift.
  template <class Acc>
  uint64_t fwd_from(const Acc& acc, uint64_t p, int64_t cur, int64_t target) const;
  template <class Acc>
  int64_t bwd_from(const Acc& acc, uint64_t p, int64_t cur, int64_t target) const;
  template <class Acc>
  uint64_t locate_min_in_block(const Acc& acc, uint64_t b, int64_t value) const;

  template <class Acc>
  bool scan_fwd(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t target, uint64_t& out) const;
  template <class Acc>
  bool scan_bwd(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t target, uint64_t& out) const;
  template <class Acc>
  void scan_min(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t& best, uint64_t& at) const;

  uint64_t n_ = 0;
  uint32_t block_len_ = 0;
  uint32_t words_per_block_ = 0;
  uint64_t nb_ = 0;
  uint64_t ng_ = 0;
  uint64_t leaves_ = 0;
  IntVector delta_;  // + block_len
  IntVector min_;    // + block_len
  IntVector gabs_;   // + n
  IntVector gmin_;   // + n
  IntVector heap_;   // + n, 1-based implicit heap over groups
};

// Supplies blocks of a virtual parenthesis sequence (1 = open).
class BpBlockDecoder {
 public:
  virtual ~BpBlockDecoder() = default;
  // Fills block_len/64 words for block b and the bit just after the block.
  virtual void decode(uint64_t b, uint64_t* words, bool& next_bit) const = 0;
};

// Balanced-parentheses support over explicit bits or a virtual decoder. Positions 1-based.
class BpSupport {
 public:
  BpSupport() = default;
  // Explicit sequence.
  BpSupport(const std::vector<bool>& bits, uint32_t block_len = 512);
  // Virtual sequence of length n; the decoder must outlive this object.
  BpSupport(std::shared_ptr<const BpBlockDecoder> dec, uint64_t n, uint32_t block_len);

  uint64_t size() const { return n_; }
  uint32_t block_len() const { return block_len_; }
  bool bit(uint64_t p) const;
  int64_t excess(uint64_t p) const;
  uint64_t findclose(uint64_t p) const;
  uint64_t findopen(uint64_t p) const;
  uint64_t enclose(uint64_t p) const;
  uint64_t rmq(uint64_t i, uint64_t j) const;

  uint64_t pattern_count() const { return patterns_; }
  uint64_t inorder_select(uint64_t k) const;
  uint64_t inorder_rank(uint64_t i) const;  // ")(" occurrences inside [1, i]
  // Block holding the k-th pattern start, and k's rank inside that block.
  void pattern_block(uint64_t k, uint64_t& block, uint64_t& local) const;

  uint64_t parent(uint64_t x) const;
  uint64_t first_child(uint64_t x) const;
  uint64_t last_child(uint64_t x) const;
  uint64_t next_sibling(uint64_t x) const;
  uint64_t subtree_size(uint64_t x) const;
  uint64_t leftmost_leaf(uint64_t x) const;
  uint64_t rightmost_leaf(uint64_t x) const;
  uint64_t lca(uint64_t x, uint64_t y) const;

  // Cartesian-tree queries on a dummy-augmented BP, in inorder coordinates.
  uint64_t rmq_inorder(uint64_t i, uint64_t j) const;
  uint64_t psv_inorder(uint64_t i) const;
  uint64_t nsv_inorder(uint64_t i) const;

  class Cursor;
  uint64_t findclose(Cursor& c, uint64_t p) const;
  uint64_t findopen(Cursor& c, uint64_t p) const;
  uint64_t enclose(Cursor& c, uint64_t p) const;
  uint64_t rmq(Cursor& c, uint64_t i, uint64_t j) const;
  uint64_t inorder_select(Cursor& c, uint64_t k) const;
  uint64_t inorder_rank(Cursor& c, uint64_t i) const;
  uint64_t rmq_inorder(Cursor& c, uint64_t i, uint64_t j) const;
  uint64_t psv_inorder(Cursor& c, uint64_t i) const;
  uint64_t nsv_inorder(Cursor& c, uint64_t i) const;

  std::vector<bool> materialize() const;
  uint64_t blocks_decoded() const { return decoded_.get(); }
  void reset_counters() const { decoded_.reset(); }
  uint64_t directory_bits() const;

  // Caches a few decoded blocks; a caller may keep one alive across several operations.
  class Cursor {
   public:
    explicit Cursor(const BpSupport& s) : s_(s) {}
    StepWord word(uint64_t w) const;
    bool bit(uint64_t p) const { return (raw(p) >> ((p - 1) & 63)) & 1; }
    uint64_t raw(uint64_t p) const;  // word containing position p
    bool next_bit_of(uint64_t b) const;

   private:
    const uint64_t* load(uint64_t b) const;
    const BpSupport& s_;
    static constexpr uint32_t kSlots = 4;
    mutable uint64_t tag_[kSlots] = {UINT64_MAX, UINT64_MAX, UINT64_MAX, UINT64_MAX};
    mutable bool next_[kSlots] = {};
    mutable std::vector<uint64_t> buf_[kSlots];
    mutable uint32_t victim_ = 0;
  };

 private:
  void build_directories();
  void check_pos(uint64_t p) const;

  uint64_t n_ = 0;
  uint32_t block_len_ = 0;
  std::vector<uint64_t> explicit_;  // empty for virtual sequences
  std::shared_ptr<const BpBlockDecoder> dec_;
  ExcessIndex ex_;
  IntVector pat_;    // per-block pattern starts
  IntVector gpat_;   // patterns before each group
  uint64_t patterns_ = 0;
  Counter decoded_;
};

}  // namespace spq

#include "spq/bits_impl.hpp"
