#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spq/bits.hpp"

using namespace spq;
using spq::testing::augmented_bp;
using spq::testing::random_bp;
using spq::testing::stack_match;

namespace {

std::vector<bool> parse_bits(const std::string& s) {
  std::vector<bool> v;
  for (char c : s) v.push_back(c == '1' || c == '(');
  return v;
}

// Virtual decoder backed by an explicit string; used to compare both sources.
class CopyDecoder : public BpBlockDecoder {
 public:
  CopyDecoder(std::vector<bool> bits, uint32_t block_len) : bits_(std::move(bits)), len_(block_len) {}
  void decode(uint64_t b, uint64_t* words, bool& next_bit) const override {
    for (uint32_t k = 0; k < len_ / 64; ++k) words[k] = 0;
    for (uint64_t i = 0; i < len_; ++i) {
      const uint64_t p = b * len_ + i;
      if (p < bits_.size() && bits_[p]) words[i >> 6] |= 1ull << (i & 63);
    }
    const uint64_t after = (b + 1) * len_;
    next_bit = after < bits_.size() && bits_[after];
  }

 private:
  std::vector<bool> bits_;
  uint32_t len_;
};

}  // namespace

TEST_CASE("IntVector round trip") {
  std::mt19937_64 rng(1);
  for (uint32_t w : {1u, 7u, 13u, 31u, 64u}) {
    IntVector v(1000, w);
    std::vector<uint64_t> ref(1000);
    for (auto& x : ref) x = rng() & low_mask(w);
    for (uint64_t i = 0; i < 1000; ++i) v.set(i, ref[i]);
    for (uint64_t i = 0; i < 1000; ++i) REQUIRE(v.get(i) == ref[i]);
  }
}

TEST_CASE("select_in_word") {
  CHECK(select_in_word(0b1011, 1) == 0);
  CHECK(select_in_word(0b1011, 3) == 3);
  CHECK(select_in_word(1ull << 63, 1) == 63);
}

TEST_CASE("RsBitvec: examples") {
  RsBitvec v(parse_bits("101101"));
  CHECK(v.rank(1, 4) == 3);
  CHECK(v.select(0, 2) == 5);
  CHECK(v.rank(1, 0) == 0);
  CHECK_THROWS_AS(v.select(1, 5), Error);
}

TEST_CASE("RsBitvec: round-trip identities at random probes") {
  std::mt19937_64 rng(2);
  for (uint64_t len : {1ull, 63ull, 64ull, 65ull, 5000ull, 100000ull}) {
    std::vector<bool> bits(len);
    for (uint64_t i = 0; i < len; ++i) bits[i] = rng() % 3 == 0;
    RsBitvec v(bits);
    uint64_t ones = 0;
    for (bool b : bits) ones += b;
    REQUIRE(v.rank(1, len) == ones);
    const int probes = len < 1000 ? 200 : 100000 / 5;
    for (int t = 0; t < probes; ++t) {
      for (bool b : {true, false}) {
        const uint64_t tot = v.rank(b, len);
        if (tot == 0) continue;
        const uint64_t k = 1 + rng() % tot;
        const uint64_t s = v.select(b, k);
        REQUIRE(s <= len);
        REQUIRE(v[s] == b);
        REQUIRE(v.rank(b, s) == k);
      }
      const uint64_t i = rng() % (len + 1);
      uint64_t r = 0;
      if (len <= 5000) {
        for (uint64_t q = 0; q < i; ++q) r += bits[q];
        REQUIRE(v.rank1(i) == r);
      }
    }
  }
}

TEST_CASE("PackedQuaternary round trip and rank") {
  std::mt19937_64 rng(3);
  std::vector<uint8_t> sym(3001);
  for (auto& s : sym) s = rng() & 3;
  PackedQuaternary q(sym);
  CHECK(q.decode() == sym);
  uint64_t cnt[4] = {0, 0, 0, 0};
  for (uint64_t i = 1; i <= sym.size(); ++i) {
    ++cnt[sym[i - 1]];
    for (uint8_t c = 0; c < 4; ++c) REQUIRE(q.rank(c, i) == cnt[c]);
  }
  for (uint64_t i0 = 0; i0 + 64 <= sym.size(); i0 += 37) {
    uint64_t lo = 0, hi = 0;
    q.planes(i0, lo, hi);
    for (uint32_t t = 0; t < 64; ++t) {
      REQUIRE(((lo >> t) & 1) == (sym[i0 + t] & 1u));
      REQUIRE(((hi >> t) & 1) == ((sym[i0 + t] >> 1) & 1u));
    }
  }
  auto again = PackedQuaternary::from_words(q.words(), q.size(), true);
  CHECK(again.decode() == sym);
}

TEST_CASE("BpSupport: examples") {
  BpSupport s(parse_bits("(()())"), 64);
  CHECK(s.findclose(1) == 6);
  CHECK(s.findopen(5) == 4);
  CHECK(s.findopen(3) == 2);
  CHECK(s.inorder_select(1) == 3);
  CHECK(s.inorder_rank(6) == 1);
  CHECK(s.parent(3) == 1);
  CHECK(s.parent(4) == 1);
  CHECK(s.first_child(1) == 2);
  CHECK(s.next_sibling(2) == 4);
  CHECK(s.last_child(1) == 4);
  CHECK_THROWS_AS(s.parent(1), Error);
  CHECK_THROWS_AS(s.next_sibling(4), Error);
  BpSupport t(parse_bits("()()"), 64);
  CHECK(t.findclose(3) == 4);
  BpSupport u(parse_bits("()"), 64);
  CHECK(u.inorder_rank(2) == 0);
  CHECK(u.subtree_size(1) == 1);
  CHECK_THROWS_AS(BpSupport(parse_bits("(()"), 64), Error);
  CHECK_THROWS_AS(BpSupport(parse_bits("())("), 64), Error);
}

TEST_CASE("BpSupport: matching agrees with a stack scan on random strings") {
  std::mt19937_64 rng(4);
  for (uint64_t m : {1ull, 2ull, 31ull, 32ull, 33ull, 500ull, 4000ull, 32768ull}) {
    for (uint32_t bl : {64u, 256u}) {
      const auto bp = random_bp(m, rng);
      const auto match = stack_match(bp);
      BpSupport s(bp, bl);
      auto dec = std::make_shared<CopyDecoder>(bp, bl);
      BpSupport v(dec, bp.size(), bl);
      REQUIRE(v.materialize() == bp);
      const uint64_t step = bp.size() > 5000 ? 7 : 1;
      for (uint64_t i = 1; i <= bp.size(); i += step) {
        if (bp[i - 1]) {
          REQUIRE(s.findclose(i) == match[i]);
          REQUIRE(v.findclose(i) == match[i]);
          REQUIRE(s.findopen(match[i]) == i);
        } else {
          REQUIRE(s.findopen(i) == match[i]);
          REQUIRE(v.findopen(i) == match[i]);
        }
      }
    }
  }
}

TEST_CASE("BpSupport: enclose, rmq and navigation against brute force") {
  std::mt19937_64 rng(5);
  for (uint64_t m : {3ull, 40ull, 700ull, 3000ull}) {
    const auto bp = random_bp(m, rng);
    const auto match = stack_match(bp);
    const uint64_t n = bp.size();
    std::vector<int64_t> E(n + 1, 0);
    for (uint64_t i = 1; i <= n; ++i) E[i] = E[i - 1] + (bp[i - 1] ? 1 : -1);
    BpSupport s(bp, 128);
    auto dec = std::make_shared<CopyDecoder>(bp, 128);
    BpSupport v(dec, n, 128);
    std::vector<uint64_t> par(n + 1, 0), st;
    for (uint64_t i = 1; i <= n; ++i) {
      if (bp[i - 1]) {
        par[i] = st.empty() ? 0 : st.back();
        st.push_back(i);
      } else {
        st.pop_back();
      }
    }
    for (int t = 0; t < 400; ++t) {
      uint64_t i = 1 + rng() % n, j = 1 + rng() % n;
      if (i > j) std::swap(i, j);
      uint64_t best = i;
      for (uint64_t k = i; k <= j; ++k)
        if (E[k] < E[best]) best = k;
      REQUIRE(s.rmq(i, j) == best);
      REQUIRE(v.rmq(i, j) == best);
      REQUIRE(s.excess(j) == E[j]);
    }
    for (uint64_t x = 1; x <= n; ++x) {
      if (!bp[x - 1]) continue;
      if (par[x]) REQUIRE(s.enclose(x) == par[x]);
      else REQUIRE_THROWS_AS(s.enclose(x), Error);
      REQUIRE(s.subtree_size(x) == (match[x] - x + 1) / 2);
      // leftmost leaf: first open followed by a close at or after x
      uint64_t ll = x;
      while (bp[ll]) ++ll;
      REQUIRE(s.leftmost_leaf(x) == ll);
      uint64_t rl = match[x] - 1;
      while (!bp[rl - 1]) --rl;
      REQUIRE(s.rightmost_leaf(x) == rl);
    }
    for (int t = 0; t < 200; ++t) {
      uint64_t x = 1 + rng() % n, y = 1 + rng() % n;
      if (!bp[x - 1] || !bp[y - 1]) continue;
      // brute-force lca via ancestor sets
      std::vector<uint64_t> ax;
      for (uint64_t a = x; a; a = par[a]) ax.push_back(a);
      uint64_t l = 0;
      for (uint64_t b = y; b && !l; b = par[b])
        if (std::find(ax.begin(), ax.end(), b) != ax.end()) l = b;
      if (l == 0) {
        REQUIRE_THROWS_AS(s.lca(x, y), Error);
        continue;
      }
      REQUIRE(s.lca(x, y) == l);
      REQUIRE(v.lca(x, y) == l);
    }
  }
}

TEST_CASE("BpSupport: Cartesian-tree rmq/psv/nsv in inorder coordinates") {
  auto small = augmented_bp(*build_min_cartesian(Permutation({2, 1, 3})));
  BpSupport s(small, 64);
  CHECK(s.rmq_inorder(1, 3) == 2);
  CHECK(s.rmq_inorder(2, 2) == 2);
  auto path = augmented_bp(*build_min_cartesian(Permutation({1, 2, 3})));
  BpSupport t(path, 64);
  CHECK(t.rmq_inorder(2, 3) == 2);
  std::mt19937_64 rng(6);
  for (uint32_t n : {1u, 2u, 5u, 60u, 900u}) {
    std::vector<uint32_t> v(n);
    for (uint32_t i = 0; i < n; ++i) v[i] = i + 1;
    std::shuffle(v.begin(), v.end(), rng);
    const Permutation p(v);
    const auto bp = augmented_bp(*build_min_cartesian(p));
    REQUIRE(bp.size() == 4ull * n + 2);
    BpSupport b(bp, 64);
    REQUIRE(b.pattern_count() == n);
    for (uint32_t i = 1; i <= n; ++i) {
      REQUIRE(b.psv_inorder(i) == oracle::psv(p, i));
      REQUIRE(b.nsv_inorder(i) == oracle::nsv(p, i));
    }
    for (int q = 0; q < 300; ++q) {
      uint32_t i = 1 + rng() % n, j = 1 + rng() % n;
      if (i > j) std::swap(i, j);
      REQUIRE(b.rmq_inorder(i, j) == oracle::rmin(p, i, j));
    }
  }
}
