#pragma once

// Template bodies for ExcessIndex; included from bits.hpp.

#include <algorithm>
#include <limits>

namespace spq {

namespace detail {

inline uint64_t range_mask(uint32_t lo, uint32_t hi) {  // bits lo..hi inclusive
  return low_mask(hi + 1) & ~low_mask(lo);
}

#ifdef __BMI2__
// Forward over the defined steps of one word; on success u is the bit index reaching target.
inline bool word_fwd(uint64_t open, uint64_t close, int64_t& cur, int64_t target, uint32_t& u) {
  const uint64_t def = open | close;
  const uint64_t bits = _pext_u64(open, def);
  const uint32_t k = static_cast<uint32_t>(std::popcount(def));
  const auto& tab = byte_table();
  uint32_t t = 0;
  for (; t + 8 <= k; t += 8) {
    const ByteInfo& bi = tab[(bits >> t) & 0xff];
    if (cur + bi.min > target) {
      cur += bi.delta;
      continue;
    }
    break;
  }
  for (; t < k; ++t) {
    cur += ((bits >> t) & 1) ? 1 : -1;
    if (cur <= target) {
      u = select_in_word(def, t + 1);
      return true;
    }
  }
  return false;
}

// Backward from the top of one word; on success u is the defined bit whose removal reaches target.
inline bool word_bwd(uint64_t open, uint64_t close, int64_t& cur, int64_t target, uint32_t& u) {
  const uint64_t def = open | close;
  const uint64_t bits = _pext_u64(open, def);
  const uint32_t k = static_cast<uint32_t>(std::popcount(def));
  const auto& tab = byte_table();
  uint32_t t = k;
  for (; t >= 8; t -= 8) {
    const ByteInfo& bi = tab[(bits >> (t - 8)) & 0xff];
    if (cur - bi.max_suffix > target) {
      cur -= bi.delta;
      continue;
    }
    break;
  }
  for (; t > 0; --t) {
    cur -= ((bits >> (t - 1)) & 1) ? 1 : -1;
    if (cur <= target) {
      u = select_in_word(def, t);
      return true;
    }
  }
  return false;
}
#endif

}  // namespace detail

template <class Acc>
void ExcessIndex::build(const Acc& acc, uint64_t n, uint32_t block_len) {
  if (block_len == 0 || block_len % 64) fail(Errc::format, "block length must be a positive multiple of 64");
  const auto& tab = nibble_table();
  n_ = n;
  block_len_ = block_len;
  words_per_block_ = block_len / 64;
  nb_ = std::max<uint64_t>(1, (n + block_len - 1) / block_len);
  ng_ = (nb_ + kGroupBlocks - 1) / kGroupBlocks;
  const uint32_t bw = bits_for(2ull * block_len);
  delta_ = IntVector(nb_, bw);
  min_ = IntVector(nb_, bw);
  const uint32_t gw = bits_for(2 * n + 1);
  gabs_ = IntVector(ng_, gw);
  gmin_ = IntVector(ng_, gw);
  int64_t e = 0;
  int64_t gm = std::numeric_limits<int64_t>::max();
  for (uint64_t b = 0; b < nb_; ++b) {
    if (b % kGroupBlocks == 0) {
      gabs_.set(b / kGroupBlocks, static_cast<uint64_t>(e + static_cast<int64_t>(n)));
      gm = std::numeric_limits<int64_t>::max();
    }
    int64_t cur = 0, mn = std::numeric_limits<int64_t>::max();
    for (uint32_t k = 0; k < words_per_block_; ++k) {
      const uint64_t w = b * words_per_block_ + k;
      const StepWord sw = acc.word(w);
      for (uint32_t t = 0; t < 64; t += 4) {
        const NibbleInfo& ni = tab[((sw.open >> t) & 15) | (((sw.close >> t) & 15) << 4)];
        mn = std::min<int64_t>(mn, cur + ni.min);
        cur += ni.delta;
      }
    }
    delta_.set(b, static_cast<uint64_t>(cur + block_len));
    min_.set(b, static_cast<uint64_t>(mn + block_len));
    gm = std::min(gm, e + mn);
    e += cur;
    if (b % kGroupBlocks == kGroupBlocks - 1 || b + 1 == nb_)
      gmin_.set(b / kGroupBlocks, static_cast<uint64_t>(gm + static_cast<int64_t>(n)));
  }
  leaves_ = std::bit_ceil(ng_);
  heap_ = IntVector(2 * leaves_, gw);
  for (uint64_t v = 1; v < 2 * leaves_; ++v) heap_.set(v, 2 * n + 1);
  for (uint64_t g = 0; g < ng_; ++g) heap_.set(leaves_ + g, gmin_.get(g));
  for (uint64_t v = leaves_ - 1; v >= 1; --v) heap_.set(v, std::min(heap_.get(2 * v), heap_.get(2 * v + 1)));
}

template <class Acc>
int64_t ExcessIndex::excess(const Acc& acc, uint64_t p) const {
  if (p == 0) return 0;
  const uint64_t b = (p - 1) / block_len_;
  int64_t e = block_start_excess(b);
  const uint64_t last = (p - 1) >> 6;
  for (uint64_t w = b * words_per_block_; w < last; ++w) {
    const StepWord sw = acc.word(w);
    e += std::popcount(sw.open) - std::popcount(sw.close);
  }
  const StepWord sw = acc.word(last);
  const uint64_t m = low_mask(static_cast<uint32_t>(((p - 1) & 63) + 1));
  return e + std::popcount(sw.open & m) - std::popcount(sw.close & m);
}

template <class Acc>
bool ExcessIndex::scan_fwd(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t target,
                           uint64_t& out) const {
  const auto& tab = nibble_table();
  for (uint64_t w = (from - 1) >> 6; w <= (to - 1) >> 6; ++w) {
    const uint32_t lo = w == ((from - 1) >> 6) ? static_cast<uint32_t>((from - 1) & 63) : 0;
    const uint32_t hi = w == ((to - 1) >> 6) ? static_cast<uint32_t>((to - 1) & 63) : 63;
    const uint64_t m = detail::range_mask(lo, hi);
    StepWord sw = acc.word(w);
    sw.open &= m;
    sw.close &= m;
    if (cur - std::popcount(sw.close) > target) {
      cur += std::popcount(sw.open) - std::popcount(sw.close);
      continue;
    }
#ifdef __BMI2__
    uint32_t u;
    if (detail::word_fwd(sw.open, sw.close, cur, target, u)) {
      out = (w << 6) + u + 1;
      return true;
    }
    continue;
#endif
    for (uint32_t t = lo & ~3u; t <= hi; t += 4) {
      const NibbleInfo& ni = tab[((sw.open >> t) & 15) | (((sw.close >> t) & 15) << 4)];
      if (cur + ni.min > target) {
        cur += ni.delta;
        continue;
      }
      for (uint32_t u = t; u < t + 4; ++u) {
        cur += static_cast<int64_t>((sw.open >> u) & 1) - static_cast<int64_t>((sw.close >> u) & 1);
        if (cur <= target) {
          out = (w << 6) + u + 1;
          return true;
        }
      }
    }
  }
  return false;
}

template <class Acc>
bool ExcessIndex::scan_bwd(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t target,
                           uint64_t& out) const {
  const auto& tab = nibble_table();
  if (cur <= target) {
    out = to;
    return true;
  }
  const uint64_t wf = (from - 1) >> 6;
  for (uint64_t w = ((to - 1) >> 6) + 1; w-- > wf;) {
    const uint32_t lo = w == wf ? static_cast<uint32_t>((from - 1) & 63) : 0;
    const uint32_t hi = w == ((to - 1) >> 6) ? static_cast<uint32_t>((to - 1) & 63) : 63;
    const uint64_t m = detail::range_mask(lo, hi);
    StepWord sw = acc.word(w);
    sw.open &= m;
    sw.close &= m;
    // cur is E at bit 63 of this word (masked-out high bits are neutral).
    if (cur - std::popcount(sw.open) > target) {
      cur -= std::popcount(sw.open) - std::popcount(sw.close);
      continue;
    }
#ifdef __BMI2__
    uint32_t u;
    if (detail::word_bwd(sw.open, sw.close, cur, target, u)) {
      if (w == wf && u == lo) return false;
      out = (w << 6) + u;
      return true;
    }
    continue;
#endif
    for (int t = 60; t >= 0; t -= 4) {
      const NibbleInfo& ni = tab[((sw.open >> t) & 15) | (((sw.close >> t) & 15) << 4)];
      if (cur - ni.delta + ni.min > target) {
        cur -= ni.delta;
        continue;
      }
      for (int u = t + 3; u >= t; --u) {
        if (cur <= target) {
          if (static_cast<uint32_t>(u) < lo) return false;
          out = (w << 6) + static_cast<uint64_t>(u) + 1;
          return true;
        }
        cur -= static_cast<int64_t>((sw.open >> u) & 1) - static_cast<int64_t>((sw.close >> u) & 1);
      }
    }
  }
  return false;
}

template <class Acc>
void ExcessIndex::scan_min(const Acc& acc, uint64_t from, uint64_t to, int64_t& cur, int64_t& best,
                           uint64_t& at) const {
  const auto& tab = nibble_table();
  for (uint64_t w = (from - 1) >> 6; w <= (to - 1) >> 6; ++w) {
    const uint32_t lo = w == ((from - 1) >> 6) ? static_cast<uint32_t>((from - 1) & 63) : 0;
    const uint32_t hi = w == ((to - 1) >> 6) ? static_cast<uint32_t>((to - 1) & 63) : 63;
    StepWord sw = acc.word(w);
    if (lo != 0) {
      // Masked low positions would alias E(from-1); walk bit by bit instead.
      for (uint32_t u = lo; u <= hi; ++u) {
        cur += static_cast<int64_t>((sw.open >> u) & 1) - static_cast<int64_t>((sw.close >> u) & 1);
        if (cur < best) {
          best = cur;
          at = (w << 6) + u + 1;
        }
      }
      continue;
    }
    const uint64_t m = low_mask(hi + 1);
    sw.open &= m;
    sw.close &= m;
    if (cur - std::popcount(sw.close) >= best) {
      cur += std::popcount(sw.open) - std::popcount(sw.close);
      continue;
    }
    for (uint32_t t = 0; t <= hi; t += 4) {
      const NibbleInfo& ni = tab[((sw.open >> t) & 15) | (((sw.close >> t) & 15) << 4)];
      if (cur + ni.min < best) {
        best = cur + ni.min;
        at = (w << 6) + t + static_cast<uint64_t>(ni.argmin) + 1;
      }
      cur += ni.delta;
    }
  }
}

template <class Acc>
uint64_t ExcessIndex::fwd_from(const Acc& acc, uint64_t p, int64_t cur, int64_t target) const {
  if (p >= n_) return n_ + 1;
  uint64_t out = 0;
  const uint64_t b = p == 0 ? 0 : (p - 1) / block_len_;
  const uint64_t bend = std::min<uint64_t>((b + 1) * block_len_, n_);
  if (p + 1 <= bend && scan_fwd(acc, p + 1, bend, cur, target, out)) return out;
  // Switch to absolute excess at the block boundary.
  const int64_t abs_end = b + 1 < nb_ ? block_start_excess(b + 1) : total();
  target += abs_end - cur;
  cur = abs_end;
  auto run_blocks = [&](uint64_t first, uint64_t last, int64_t start) -> bool {
    int64_t e = start;
    for (uint64_t x = first; x <= last && x < nb_; ++x) {
      if (e + block_min(x) <= target) {
        const uint64_t s = x * block_len_ + 1, t = std::min<uint64_t>((x + 1) * block_len_, n_);
        if (scan_fwd(acc, s, t, e, target, out)) return true;
        fail(Errc::integrity, "excess directory disagrees with block contents");
      }
      e += block_delta(x);
    }
    return false;
  };
  const uint64_t g = b / kGroupBlocks;
  if (run_blocks(b + 1, (g + 1) * kGroupBlocks - 1, cur)) return out;
  const uint64_t g2 = next_group_at_most(g, target);
  if (g2 >= ng_) return n_ + 1;
  if (run_blocks(g2 * kGroupBlocks, (g2 + 1) * kGroupBlocks - 1, group_start_excess(g2))) return out;
  fail(Errc::integrity, "excess group directory disagrees with blocks");
}

template <class Acc>
int64_t ExcessIndex::bwd_from(const Acc& acc, uint64_t p, int64_t cur, int64_t target) const {
  if (p <= 1) return cur <= target ? 0 : -1;
  uint64_t out = 0;
  const uint64_t q = p - 1;
  const uint64_t b = (q - 1) / block_len_;
  if (scan_bwd(acc, b * block_len_ + 1, q, cur, target, out)) return static_cast<int64_t>(out);
  // cur is E(end of block b-1) in the caller's frame; make it absolute.
  const int64_t abs_start = block_start_excess(b);
  target += abs_start - cur;
  cur = abs_start;
  auto run_blocks = [&](int64_t first, int64_t last, int64_t end_excess) -> bool {
    int64_t e = end_excess;
    for (int64_t x = first; x >= last; --x) {
      const uint64_t ux = static_cast<uint64_t>(x);
      const int64_t start = e - block_delta(ux);
      if (start + block_min(ux) <= target) {
        const uint64_t s = ux * block_len_ + 1, t = std::min<uint64_t>((ux + 1) * block_len_, n_);
        if (scan_bwd(acc, s, t, e, target, out)) return true;
        fail(Errc::integrity, "excess directory disagrees with block contents");
      }
      e = start;
    }
    return false;
  };
  const uint64_t g = b / kGroupBlocks;
  if (run_blocks(static_cast<int64_t>(b) - 1, static_cast<int64_t>(g * kGroupBlocks), cur))
    return static_cast<int64_t>(out);
  const int64_t g2 = prev_group_at_most(g, target);
  if (g2 >= 0) {
    const uint64_t ug = static_cast<uint64_t>(g2);
    const uint64_t last = std::min<uint64_t>((ug + 1) * kGroupBlocks, nb_) - 1;
    const int64_t end_e = ug + 1 < ng_ ? group_start_excess(ug + 1) : total();
    if (run_blocks(static_cast<int64_t>(last), static_cast<int64_t>(ug * kGroupBlocks), end_e))
      return static_cast<int64_t>(out);
    fail(Errc::integrity, "excess group directory disagrees with blocks");
  }
  return target >= 0 ? 0 : -1;
}

template <class Acc>
uint64_t ExcessIndex::locate_min_in_block(const Acc& acc, uint64_t b, int64_t value) const {
  int64_t cur = block_start_excess(b), best = value + 1;
  uint64_t at = 0;
  scan_min(acc, b * block_len_ + 1, std::min<uint64_t>((b + 1) * block_len_, n_), cur, best, at);
  if (best != value) fail(Errc::integrity, "block minimum not found");
  return at;
}

template <class Acc>
uint64_t ExcessIndex::rmq(const Acc& acc, uint64_t i, uint64_t j) const {
  const uint64_t bi = (i - 1) / block_len_, bj = (j - 1) / block_len_;
  int64_t best = std::numeric_limits<int64_t>::max();
  uint64_t at = 0;
  int64_t cur = excess(acc, i - 1);
  if (bi == bj) {
    scan_min(acc, i, j, cur, best, at);
    return at;
  }
  scan_min(acc, i, (bi + 1) * block_len_, cur, best, at);
  // Winner among whole blocks or groups is resolved at the end.
  enum { none, block, group } kind = none;
  uint64_t which = 0;
  int64_t e = cur;
  const uint64_t gi = bi / kGroupBlocks, gj = bj / kGroupBlocks;
  const uint64_t first_tail_end = gi == gj ? bj : (gi + 1) * kGroupBlocks;
  for (uint64_t x = bi + 1; x < first_tail_end; ++x) {
    if (e + block_min(x) < best) {
      best = e + block_min(x);
      kind = block;
      which = x;
    }
    e += block_delta(x);
  }
  if (gj > gi + 1) {
    uint64_t g = 0;
    const int64_t before = best;
    group_range_min(gi + 1, gj - 1, best, g);
    if (best < before) {
      kind = group;
      which = g;
    }
  }
  if (gj > gi) {
    e = group_start_excess(gj);
    for (uint64_t x = gj * kGroupBlocks; x < bj; ++x) {
      if (e + block_min(x) < best) {
        best = e + block_min(x);
        kind = block;
        which = x;
      }
      e += block_delta(x);
    }
  }
  const int64_t before_tail = best;
  scan_min(acc, bj * block_len_ + 1, j, e, best, at);
  if (best < before_tail) return at;
  if (kind == block) return locate_min_in_block(acc, which, best);
  if (kind == group) {
    int64_t ge = group_start_excess(which);
    for (uint64_t x = which * kGroupBlocks; x < nb_; ++x) {
      if (ge + block_min(x) == best) return locate_min_in_block(acc, x, best);
      ge += block_delta(x);
    }
    fail(Errc::integrity, "group minimum not found");
  }
  return at;
}

}  // namespace spq
