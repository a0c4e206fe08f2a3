#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spq/bits.hpp"
#include "spq/perm.hpp"

namespace spq {

constexpr uint32_t kNoNode = UINT32_MAX;

// Canonical separable tree: every non-leaf child of a plus node is a minus node and vice
// versa, so the tree of a separable permutation is unique.
struct SeparableTree {
  struct Node {
    uint32_t parent = kNoNode;
    uint32_t first = 0;  // children are kids[first .. first+count)
    uint32_t count = 0;
    uint32_t label = 0;  // leaves only
    bool plus = false;   // internal nodes only
    bool leaf() const { return count == 0; }
  };
  std::vector<Node> nodes;
  std::vector<uint32_t> kids;
  uint32_t root = 0;

  uint32_t child(uint32_t v, uint32_t k) const { return kids[nodes[v].first + k]; }
  uint64_t leaf_count() const;
  std::vector<uint32_t> leaf_labels() const;  // left to right
};

// Throws not_separable.
SeparableTree build_separable_tree(const Permutation& p);

// A covering subtree: the root, the subtrees of the root's children run_first..run_first+run_count-1,
// minus the subtree of `hole`. The hole hangs off a non-root member (`boundary`) and is that
// part's only outgoing edge away from the root. run_count = 0 for a bare root.
struct CoverPart {
  uint32_t root = kNoNode;
  uint32_t run_first = 0, run_count = 0;
  uint32_t hole = kNoNode;
  uint32_t boundary = kNoNode;
  uint32_t size = 0;  // members, root included
};

struct CoverDecomposition {
  uint32_t ell1 = 0, ell2 = 0;
  std::vector<CoverPart> minis;
  std::vector<CoverPart> micros;
  std::vector<uint32_t> micro_mini;  // owning mini of every micro
};

// Mini parts hold at most 2*ell1 nodes. Micro parts hold at most ell2 nodes and (ell2+1)/2 items,
// counting leaves and the hole. Requires 3 <= ell2 <= ell1.
CoverDecomposition cover(const SeparableTree& t, uint32_t ell1, uint32_t ell2);
// Empty when every covering condition holds, otherwise a description of the first failure.
std::string validate_cover(const SeparableTree& t, const CoverDecomposition& c);

// Every separable permutation with at most kMaxItems entries, ranked by size and then
// lexicographically, with all local answers precomputed. Codes 0 and 1 are the bare plus and
// minus roots, which own no leaves.
class MicroTable {
 public:
  static constexpr uint32_t kMaxItems = 8;
  static constexpr uint32_t kBarePlus = 0, kBareMinus = 1;

  static const MicroTable& instance();

  uint32_t entries() const { return static_cast<uint32_t>(off_.size()); }
  uint32_t code_of(const std::vector<uint8_t>& perm) const;  // throws not_found
  std::vector<uint8_t> perm(uint32_t code) const;

  // Items and values are 1-based; psv/plv give 0 and nsv/nlv give size+1 when absent.
  uint8_t size(uint32_t c) const { return bytes_[off_[c]]; }
  uint8_t rho(uint32_t c, uint32_t k) const { return at(c, 0, k); }
  uint8_t inv(uint32_t c, uint32_t v) const { return at(c, 1, v); }
  uint8_t psv(uint32_t c, uint32_t k) const { return at(c, 2, k); }
  uint8_t nsv(uint32_t c, uint32_t k) const { return at(c, 3, k); }
  uint8_t plv(uint32_t c, uint32_t k) const { return at(c, 4, k); }
  uint8_t nlv(uint32_t c, uint32_t k) const { return at(c, 5, k); }
  uint8_t rmin(uint32_t c, uint32_t i, uint32_t j) const { return tri(c, 0, i, j); }
  uint8_t rmax(uint32_t c, uint32_t i, uint32_t j) const { return tri(c, 1, i, j); }

  uint64_t bits() const { return 8 * (bytes_.size() + 4 * off_.size()); }

 private:
  MicroTable();
  uint8_t at(uint32_t c, uint32_t row, uint32_t k) const {
    const uint32_t o = off_[c];
    return bytes_[o + 1 + row * bytes_[o] + k - 1];
  }
  uint8_t tri(uint32_t c, uint32_t which, uint32_t i, uint32_t j) const {
    const uint32_t o = off_[c], m = bytes_[o];
    return bytes_[o + 1 + 6 * m + which * (m * (m + 1) / 2) + (j - 1) * j / 2 + (i - 1)];
  }

  std::vector<uint32_t> off_;
  std::vector<uint8_t> bytes_;
  std::vector<uint32_t> keys_;  // packed permutations of codes 2.., ascending
};

// Value intervals of one part: values below its hole, then values above it. In absolute values
// for minis; for micros, in ranks among the owning mini's values. Without a hole the upper
// interval is empty and min_r = max_l + 1. Empty intervals have max < min.
struct IntervalMeta {
  int64_t min_l = 0, max_l = -1;
  int64_t min_r = 0, max_r = -1;
  int64_t bsize = 0;  // leaves under the hole, in the same coordinates
  bool root_plus = false;
  bool boundary_plus = false;
};

// Tree-covering index of a separable permutation.
class SeparableIndex {
 public:
  static constexpr uint32_t kDefaultEll1 = 1024;
  static constexpr uint32_t kDefaultEll2 = 15;

  static SeparableIndex build(const Permutation& p, uint32_t ell1 = kDefaultEll1, uint32_t ell2 = kDefaultEll2);

  uint64_t size() const { return n_; }
  uint32_t ell1() const { return cover_.ell1; }
  uint32_t ell2() const { return cover_.ell2; }

  uint64_t rho(uint64_t i) const;
  uint64_t rho_inverse(uint64_t j) const;
  uint64_t range_min(uint64_t i, uint64_t j) const;
  uint64_t range_max(uint64_t i, uint64_t j) const;
  uint64_t psv(uint64_t i) const;
  uint64_t nsv(uint64_t i) const;
  uint64_t plv(uint64_t i) const;
  uint64_t nlv(uint64_t i) const;
  uint64_t query(Query q, uint64_t a, uint64_t b = 0) const;
  Permutation to_permutation() const;

  const CoverDecomposition& decomposition() const { return cover_; }
  IntervalMeta mini_meta(uint32_t k) const;
  IntervalMeta micro_meta(uint32_t k) const;
  uint32_t micro_code(uint32_t k) const { return micro_[k].code; }
  uint64_t mini_markers() const { return bv1_.ones(); }

  // Minimum of every mini-level position segment, and the parent of segment s in the tree whose
  // parent links are previous-smaller links over that sequence (kNoNode at a root).
  std::vector<uint64_t> mini_level_minima() const;
  uint32_t y_parent(uint32_t s) const;
  // Same for the micro-level segments of mini-level segment ms, in mini-local value ranks.
  std::vector<uint64_t> micro_level_minima(uint32_t ms) const;
  uint32_t yt_parent(uint32_t ms, uint32_t s) const;
  uint32_t mini_segments() const { return static_cast<uint32_t>(seg1p_.size()); }

  // Directory, metadata, table and sparse-table reads since the last reset.
  uint64_t probes() const { return probes_.get(); }
  void reset_counters() const { probes_.reset(); }
  uint64_t space_bits() const;

  friend void write_sep(std::ostream& out, const SeparableIndex& idx);
  friend SeparableIndex read_sep(std::istream& in);

 private:
  struct MiniRec {
    uint32_t plo = 0, clp = 0;  // first position; positions before the hole
    uint32_t vlo = 0, clv = 0;  // smallest value of the full interval; values below the hole
    uint32_t bsize = 0, leaves = 0, off = 0;
    uint8_t kind = 0;  // bit0 root is plus, bit1 boundary is plus
  };
  struct MicroRec {
    uint32_t code = 0, mini = 0;
    uint32_t s = 0, a = 0, g = 0;  // mini-local first position, first value rank, hole leaves
    uint8_t m = 0, h = 0, ph = 0;  // items, hole item, hole value (0 without a hole)
    uint8_t kind = 0;
  };
  struct Seg1 {
    uint32_t mini = 0, start = 0;
    uint32_t first = 0, last = 0;  // level-2 segments it spans
    uint8_t side = 0;
  };
  struct Seg2 {
    uint32_t micro = 0, start = 0;
    uint8_t side = 0;
  };
  struct Ext2 {
    uint32_t min_rank = 0, max_rank = 0;
    uint8_t min_k = 0, max_k = 0;
  };
  struct Ext1 {
    uint32_t min_val = 0, min_pos = 0, max_val = 0, max_pos = 0;
  };
  struct Loc {
    uint32_t ms, us, mini, micro, k;
    uint8_t side;
  };
  struct Sparse {
    std::vector<std::vector<uint32_t>> lv;
    uint64_t bits() const;
  };

  SeparableIndex() = default;
  void check_pos(uint64_t i) const;
  Loc locate(uint64_t i) const;
  uint32_t item_rank(const MicroRec& u, uint32_t k) const;
  uint64_t item_pos(const MicroRec& u, uint32_t k) const;
  uint64_t abs_value(const MiniRec& t, uint32_t r) const;
  uint32_t run_lo(const MicroRec& u, uint8_t side) const { return side ? u.h + 1 : 1; }
  uint32_t run_hi(const MicroRec& u, uint8_t side) const { return side || u.h == 0 ? u.m : u.h - 1; }
  uint32_t key2(uint32_t s, bool mx) const;
  uint32_t key1(uint32_t s, bool mx) const;
  uint32_t best2(uint32_t l, uint32_t r, bool mx) const;
  uint32_t best1(uint32_t l, uint32_t r, bool mx) const;
  // First segment in [lo, hi] from the right (or left) whose extreme beats thr.
  uint32_t search2(int64_t lo, int64_t hi, int64_t thr, bool mx, bool from_right) const;
  uint32_t search1(int64_t lo, int64_t hi, int64_t thr, bool mx, bool from_right) const;
  uint64_t range_extreme(uint64_t i, uint64_t j, bool mx) const;
  uint64_t nearest(uint64_t i, bool mx, bool prev) const;
  uint64_t scan_run(uint32_t us, int64_t thr, bool mx, bool prev) const;
  void probe(uint64_t d = 1) const { probes_.add(d); }

  uint64_t n_ = 0;
  CoverDecomposition cover_;
  std::vector<MiniRec> mini_;
  std::vector<MicroRec> micro_;
  RsBitvec bp1_, bp2_, bv1_, bv2_;
  std::vector<Seg1> seg1p_, seg1v_;
  std::vector<Seg2> seg2p_, seg2v_;
  std::vector<Ext1> ext1_;
  std::vector<Ext2> ext2_;
  Sparse sp1_min_, sp1_max_, sp2_min_, sp2_max_;
  Counter probes_;
};

// Binary container "SEP1"; see README for the layout.
void write_sep(std::ostream& out, const SeparableIndex& idx);
SeparableIndex read_sep(std::istream& in);

}  // namespace spq
