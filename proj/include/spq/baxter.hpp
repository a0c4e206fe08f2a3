#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "spq/bits.hpp"
#include "spq/perm.hpp"

namespace spq {

enum class Paren : uint8_t { undefined, open, close };

// lr/E payload of a Baxter permutation. Steps are 1..n-1; lr[i] says on which side of its
// parent node i+1 hangs in MinC, E[i] is the child set of node i (bit0 left, bit1 right).
struct BaxterCode {
  uint64_t n = 0;               // stored length (augmented length for alternating codes)
  std::vector<uint64_t> lr;     // bit i-1 set iff lr[i] = r; two zero words of padding
  PackedQuaternary E;           // n-1 symbols; empty for alternating codes
  std::vector<uint64_t> full;   // alternating only: bit i-1 set iff E[i] = 3
  bool alternating = false;
  bool left_dummy = false;      // alternating only: a maximum was prepended
  bool right_dummy = false;     // alternating only: a maximum was appended

  uint64_t steps() const { return n == 0 ? 0 : n - 1; }
  uint64_t original_size() const { return n - left_dummy - right_dummy; }
  uint8_t dummy_count() const { return static_cast<uint8_t>(left_dummy + right_dummy); }
  bool is_right(uint64_t i) const { return (lr[(i - 1) >> 6] >> ((i - 1) & 63)) & 1; }
  // E[i] for 1 <= i <= n; E[n] = 0 since the largest label is a leaf.
  uint8_t child_code(uint64_t i) const;
  // 64 values starting at 0-based step index s; indices outside [0, n-2] read as 0.
  uint64_t lr_bits(int64_t s) const;
  void e_planes(int64_t s, uint64_t& lo, uint64_t& hi) const;
  uint64_t core_bits() const { return alternating ? 2 * steps() : 3 * steps(); }
};

BaxterCode encode(const Permutation& p);
// Pads with maxima so that MinC is full, then stores one bit per node for E.
BaxterCode encode_alternating(const Permutation& p);
// Two-stack replay; throws not_baxter if the code is inconsistent.
Permutation decode(const BaxterCode& c);
// Same replay, returning the MinC parent of every label (0 for the root).
std::vector<uint32_t> replay_parents(const BaxterCode& c);

// Label-space view of MinC(pi), or of MaxC(pi) through the flip rule. In the max view,
// label k stands for value n+1-k.
class TreeView {
 public:
  TreeView(std::shared_ptr<const BaxterCode> code, bool max_view, uint32_t block_len, uint64_t first_val = 0,
           uint64_t last_val = 0);

  uint64_t size() const { return n_; }
  bool is_max() const { return max_; }
  const BaxterCode& code() const { return *c_; }

  bool is_right(uint64_t i) const;  // 1 <= i <= n-1
  uint8_t child_code(uint64_t v) const;
  bool has_left(uint64_t v) const { return child_code(v) & 1; }
  bool has_right(uint64_t v) const { return child_code(v) & 2; }
  // Step word w covers steps 64w+1..64w+64; bits past n-1 are zero.
  void step_word(uint64_t w, uint64_t& lr, uint64_t& e0, uint64_t& e1) const;

  // Direct-mapped memo of step words; matching searches issued from one walk overlap heavily.
  struct WordCache {
    static constexpr uint32_t kSlots = 64;
    uint64_t tag[kSlots];
    uint64_t lr[kSlots], e0[kSlots], e1[kSlots];
    WordCache() { std::fill(tag, tag + kSlots, UINT64_MAX); }
  };

  Paren lp_at(uint64_t i) const;
  Paren rp_at(uint64_t i) const;
  uint64_t lp_findopen(uint64_t i, WordCache* wc = nullptr) const;
  uint64_t lp_findclose(uint64_t i, WordCache* wc = nullptr) const;
  uint64_t rp_findopen(uint64_t i, WordCache* wc = nullptr) const;
  uint64_t rp_findclose(uint64_t i, WordCache* wc = nullptr) const;

  uint64_t parent_label(uint64_t v, WordCache* wc = nullptr) const;
  uint64_t left_child_label(uint64_t v, WordCache* wc = nullptr) const;
  uint64_t right_child_label(uint64_t v, WordCache* wc = nullptr) const;

  enum class Move : uint8_t { own_left, own_right, pop_left, pop_right };
  struct Step {
    Move move;
    uint64_t parent;  // node whose child is v+1
  };
  Step next(uint64_t v) const;

  // Merged parenthesis string over (), {}, [] and its per-step lengths U[i] in {1, 2}.
  uint64_t lrp_size() const { return steps() + rank_u2(steps()); }
  uint64_t rank_u2(uint64_t i) const;  // #{k <= i : U[k] = 2}
  // lrp[pos..pos+len-1], 1-based, clipped at the end.
  std::string lrp(uint64_t pos, uint64_t len) const;

  uint64_t aux_bits() const;

 private:
  struct LpAcc {
    const TreeView* t;
    WordCache* wc;
    StepWord word(uint64_t w) const;
  };
  struct RpAcc {
    const TreeView* t;
    WordCache* wc;
    StepWord word(uint64_t w) const;
  };
  void cached_word(uint64_t w, WordCache* wc, uint64_t& lr, uint64_t& e0, uint64_t& e1) const;
  uint64_t steps() const { return n_ == 0 ? 0 : n_ - 1; }
  uint64_t u2_word(uint64_t w) const;
  uint64_t step_of_lrp(uint64_t pos) const;

  std::shared_ptr<const BaxterCode> c_;
  bool max_ = false;
  uint64_t n_ = 0;
  uint64_t no_left_ = 0, no_right_ = 0;  // max view: labels whose flag is forced off
  ExcessIndex lp_, rp_;
  IntVector u_samples_;  // rank_u2 before every kUSample steps
  static constexpr uint64_t kUSample = 4096;
};

// Dummy-augmented BP of a view, produced block by block by a DFS from a stored anchor.
class VirtualCartesian : public BpBlockDecoder {
 public:
  // keep_samples adds the label samples and mid-block anchors used by pi and pi_inverse.
  VirtualCartesian(std::shared_ptr<const TreeView> view, uint32_t ell, bool keep_samples);

  uint64_t bp_size() const { return 4 * view_->size() + 2; }
  uint32_t block_bits() const { return 2 * ell_; }
  void decode(uint64_t b, uint64_t* words, bool& next_bit) const override;
  // Label of the node owning the local-th (1-based) pattern start of block b.
  uint64_t pattern_owner(uint64_t b, uint64_t local) const;
  // Opening position of the sampled label s*ell+1.
  uint64_t sample(uint64_t s) const { return samples_.get(s); }
  uint64_t ell() const { return ell_; }

  // Decodes counted in ell-bit units.
  uint64_t blocks_decoded() const { return decoded_.get(); }
  void reset_counters() const { decoded_.reset(); }
  uint64_t aux_bits() const {
    return labels_.bit_size() + codes_.bit_size() + samples_.bit_size() + mid_labels_.bit_size() +
           mid_codes_.bit_size() + mid_patterns_.bit_size();
  }

  const IntVector& anchor_labels() const { return labels_; }
  const IntVector& anchor_codes() const { return codes_; }
  const IntVector& samples() const { return samples_; }
  const IntVector& mid_labels() const { return mid_labels_; }
  const IntVector& mid_codes() const { return mid_codes_; }
  const IntVector& mid_patterns() const { return mid_patterns_; }

 private:
  template <class Emit>
  void walk(uint64_t label, uint8_t phase, Emit&& emit) const;

  std::shared_ptr<const TreeView> view_;
  uint32_t ell_;
  IntVector labels_;
  IntVector codes_;  // 0 own '(', 1-2 left dummy, 3-4 right dummy, 5 own ')'
  IntVector samples_;
  IntVector mid_labels_, mid_codes_;  // anchors at offset ell inside each block
  IntVector mid_patterns_;            // pattern starts in the first half of each block
  Counter decoded_;
};

struct SpaceReport {
  uint64_t core_bits = 0;
  uint64_t aux_bits = 0;
};

// All queries over one Baxter code. Positions and values refer to the original permutation.
class BaxterIndex {
 public:
  static constexpr uint32_t kDefaultEll = 1024;

  explicit BaxterIndex(BaxterCode code, uint32_t ell = kDefaultEll);
  static BaxterIndex build(const Permutation& p, uint32_t ell = kDefaultEll);

  uint64_t size() const { return code_->original_size(); }
  uint32_t ell() const { return ell_; }
  const BaxterCode& code() const { return *code_; }
  const TreeView& min_view() const { return *min_; }
  const TreeView& max_view() const { return *max_; }
  const BpSupport& min_bp() const { return *min_bp_; }
  const BpSupport& max_bp() const { return *max_bp_; }
  const VirtualCartesian& min_tree() const { return *min_dec_; }
  const VirtualCartesian& max_tree() const { return *max_dec_; }

  uint64_t pi(uint64_t i) const;
  uint64_t pi_inverse(uint64_t j) const;
  // pi(i) read from the MaxC structure instead.
  uint64_t pi_from_max(uint64_t i) const;
  uint64_t rmin(uint64_t i, uint64_t j) const;
  uint64_t rmax(uint64_t i, uint64_t j) const;
  uint64_t psv(uint64_t i) const;
  uint64_t nsv(uint64_t i) const;
  uint64_t plv(uint64_t i) const;
  uint64_t nlv(uint64_t i) const;
  uint64_t query(Query q, uint64_t a, uint64_t b = 0) const;
  Permutation to_permutation() const;

  SpaceReport space_report() const;
  uint64_t blocks_decoded() const;
  uint64_t next_steps() const { return steps_.get(); }
  void reset_counters() const;

 private:
  uint64_t off() const { return code_->left_dummy ? 1 : 0; }
  uint64_t aug_inverse(uint64_t j) const;
  uint64_t inorder_of(BpSupport::Cursor& cur, uint64_t label, uint64_t open) const;
  void check_pos(uint64_t i) const;
  uint64_t map_prev(uint64_t p) const;
  uint64_t map_next(uint64_t p) const;

  std::shared_ptr<const BaxterCode> code_;
  uint32_t ell_ = kDefaultEll;
  uint64_t first_val_ = 0, last_val_ = 0;
  std::shared_ptr<const TreeView> min_, max_;
  std::shared_ptr<const VirtualCartesian> min_dec_, max_dec_;
  std::unique_ptr<BpSupport> min_bp_, max_bp_;
  Counter steps_;
};

// Binary container "BXC1"; see README for the layout.
void write_bxc(std::ostream& out, const BaxterIndex& idx, bool include_aux);
BaxterIndex read_bxc(std::istream& in);

}  // namespace spq
