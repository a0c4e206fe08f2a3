#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "spq/baxter.hpp"

using namespace spq;
using spq::testing::augmented_bp;

namespace {

const Permutation kRunning({9, 8, 10, 1, 7, 4, 5, 6, 2, 3, 11});

// Algorithm 1 replayed on explicit child flags: matching push step for every pop step.
struct StackReplay {
  std::vector<uint64_t> lp_match, rp_match;  // indexed by step, 0 if undefined
  std::vector<char> lp, rp;                  // '(' ')' or 0
};

StackReplay replay(const TreeView& t) {
  const uint64_t n = t.size();
  StackReplay r;
  r.lp_match.assign(n + 1, 0);
  r.rp_match.assign(n + 1, 0);
  r.lp.assign(n + 1, 0);
  r.rp.assign(n + 1, 0);
  std::vector<uint64_t> L, R;
  for (uint64_t i = 1; i < n; ++i) {
    const bool right = t.is_right(i);
    if (!right && !t.has_left(i)) {
      r.lp[i] = ')';
      r.lp_match[i] = L.back();
      r.lp_match[L.back()] = i;
      L.pop_back();
    }
    if (right && !t.has_right(i)) {
      r.rp[i] = ')';
      r.rp_match[i] = R.back();
      r.rp_match[R.back()] = i;
      R.pop_back();
    }
    if (!right && t.has_right(i)) {
      r.rp[i] = '(';
      R.push_back(i);
    }
    if (right && t.has_left(i)) {
      r.lp[i] = '(';
      L.push_back(i);
    }
  }
  REQUIRE(L.empty());
  REQUIRE(R.empty());
  return r;
}

// lrp built directly from the seven-case table.
std::string table_lrp(const TreeView& t) {
  std::string s;
  for (uint64_t i = 1; i < t.size(); ++i) {
    const bool r = t.is_right(i);
    const uint8_t e = t.child_code(i);
    if (r && e == 3) s += "(";
    else if (!r && e == 0) s += ")";
    else if (!r && e == 3) s += "{";
    else if (r && e == 0) s += "}";
    else if (r && e == 1) s += "(}";
    else if (!r && e == 2) s += "{)";
    else s += "[]";
  }
  return s;
}

// Child flags and sides of an explicit Cartesian tree, keyed by view label.
void check_view_against_tree(const TreeView& v, const CartesianTree& t, bool max_view) {
  const uint64_t n = v.size();
  auto view_label = [&](uint64_t value) { return max_view ? n + 1 - value : value; };
  for (const auto& x : t.nodes) {
    const uint64_t k = view_label(x.label);
    const uint8_t flags = static_cast<uint8_t>((x.left ? 1 : 0) | (x.right ? 2 : 0));
    REQUIRE(v.child_code(k) == flags);
    if (x.parent) {
      REQUIRE(v.is_right(k - 1) == (x.parent->right == &x));
      REQUIRE(v.parent_label(k) == view_label(x.parent->label));
    } else {
      REQUIRE(k == 1);
    }
    if (x.left) REQUIRE(v.left_child_label(k) == view_label(x.left->label));
    if (x.right) REQUIRE(v.right_child_label(k) == view_label(x.right->label));
  }
}

void check_all_queries(const BaxterIndex& idx, const Permutation& p) {
  const uint32_t n = p.size();
  for (uint32_t i = 1; i <= n; ++i) {
    REQUIRE(idx.pi(i) == p(i));
    REQUIRE(idx.pi_from_max(i) == p(i));
    REQUIRE(idx.pi_inverse(i) == oracle::pi_inverse(p, i));
    REQUIRE(idx.psv(i) == oracle::psv(p, i));
    REQUIRE(idx.nsv(i) == oracle::nsv(p, i));
    REQUIRE(idx.plv(i) == oracle::plv(p, i));
    REQUIRE(idx.nlv(i) == oracle::nlv(p, i));
    for (uint32_t j = i; j <= n; ++j) {
      REQUIRE(idx.rmin(i, j) == oracle::rmin(p, i, j));
      REQUIRE(idx.rmax(i, j) == oracle::rmax(p, i, j));
    }
  }
}

}  // namespace

TEST_CASE("encode: running example") {
  const BaxterCode c = encode(kRunning);
  const char* lr = "rrlrrlllrr";
  const uint8_t e[] = {3, 3, 2, 3, 2, 0, 0, 3, 0, 0};
  REQUIRE(c.n == 11);
  for (uint64_t i = 1; i <= 10; ++i) {
    CHECK(c.is_right(i) == (lr[i - 1] == 'r'));
    CHECK(c.child_code(i) == e[i - 1]);
  }
  CHECK(c.core_bits() == 30);
  CHECK(decode(c) == kRunning);
}

TEST_CASE("encode: trivial and rejected inputs") {
  const BaxterCode one = encode(Permutation({1}));
  CHECK(one.steps() == 0);
  CHECK(one.core_bits() == 0);
  CHECK(decode(one) == Permutation({1}));
  try {
    encode(Permutation({3, 5, 2, 1, 4}));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_baxter);
  }
}

TEST_CASE("encode: corrupted codes are detected by the replay") {
  BaxterCode c = encode(kRunning);
  c.lr[0] ^= 1ull << 2;  // flip lr[3]
  CHECK_THROWS_AS(decode(c), Error);
  CHECK_THROWS_AS(BaxterIndex(c, 64), Error);
}

TEST_CASE("encode_alternating: dummies and layout") {
  const BaxterCode a = encode_alternating(Permutation({2, 1, 3}));
  CHECK(a.dummy_count() == 0);
  CHECK(a.n == 3);
  CHECK(a.child_code(1) == 3);
  const BaxterCode b = encode_alternating(Permutation({1, 2}));
  CHECK(b.left_dummy);
  CHECK_FALSE(b.right_dummy);
  CHECK(b.n == 3);
  const BaxterCode c = encode_alternating(Permutation({2, 1}));
  CHECK_FALSE(c.left_dummy);
  CHECK(c.right_dummy);
  CHECK(c.n == 3);
  CHECK(c.core_bits() == 2 * (c.n - 1));
  CHECK(decode(c) == Permutation({2, 1}));
  try {
    encode_alternating(Permutation({1, 2, 3}));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_alternating);
  }
}

TEST_CASE("alternating codes answer the same queries, n <= 8") {
  for (uint32_t n = 1; n <= 8; ++n) {
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      if (!is_alternating(p.values())) return;
      const BaxterIndex idx(encode_alternating(p), 64);
      REQUIRE(idx.size() == n);
      REQUIRE(idx.space_report().core_bits == 2 * (idx.code().n - 1));
      REQUIRE(idx.to_permutation() == p);
      check_all_queries(idx, p);
    });
  }
}

TEST_CASE("lp/rp access and matching: running example") {
  const BaxterIndex idx = BaxterIndex::build(kRunning, 64);
  const TreeView& t = idx.min_view();
  CHECK(t.lp_at(3) == Paren::close);
  CHECK(t.rp_at(3) == Paren::open);
  CHECK(t.lp_at(5) == Paren::undefined);
  CHECK(t.lp_findopen(6) == 4);
  CHECK(t.lp_findopen(3) == 2);
  CHECK(t.rp_findopen(10) == 3);
  CHECK_THROWS_AS(t.lp_findopen(5), Error);
  // lrp coordinates used by the worked example
  CHECK(t.rank_u2(6) == 2);
  CHECK(t.rank_u2(4) == 1);
  const std::string lrp = t.lrp(1, t.lrp_size());
  CHECK(lrp == table_lrp(t));
  CHECK(lrp[8 - 1] == ')');
  CHECK(lrp[5 - 1] == '(');
  CHECK(5 - t.rank_u2(5 - 1) == 4);
}

TEST_CASE("label navigation: running example") {
  const BaxterIndex idx = BaxterIndex::build(kRunning, 64);
  const TreeView& t = idx.min_view();
  CHECK(t.parent_label(4) == 2);
  CHECK(t.left_child_label(1) == 8);
  CHECK(t.right_child_label(5) == 6);
  CHECK_THROWS_AS(t.parent_label(1), Error);
  CHECK_THROWS_AS(t.left_child_label(11), Error);
  auto s3 = t.next(3);
  CHECK(s3.move == TreeView::Move::pop_left);
  CHECK(s3.parent == 2);
  auto s9 = t.next(9);
  CHECK(s9.move == TreeView::Move::pop_right);
  CHECK(s9.parent == 8);
  auto s1 = t.next(1);
  CHECK(s1.move == TreeView::Move::own_right);
  CHECK(s1.parent == 1);
}

TEST_CASE("queries: running example") {
  const BaxterIndex idx = BaxterIndex::build(kRunning, 64);
  CHECK(idx.pi(4) == 1);
  CHECK(idx.pi(1) == 9);
  CHECK(idx.pi_inverse(1) == 4);
  CHECK(idx.pi_inverse(7) == 5);
  CHECK(idx.rmin(5, 8) == 6);
  CHECK(idx.nsv(5) == oracle::nsv(kRunning, 5));
  CHECK(idx.rmin(3, 3) == 3);
  CHECK(idx.rmax(5, 8) == 5);
  CHECK(idx.plv(2) == 1);
  CHECK(idx.space_report().core_bits == 30);
  CHECK_THROWS_AS(idx.pi(12), Error);
  CHECK_THROWS_AS(idx.rmin(4, 3), Error);
  const BaxterIndex one = BaxterIndex::build(Permutation({1}), 64);
  CHECK(one.pi(1) == 1);
  CHECK(one.pi_inverse(1) == 1);
  CHECK(one.nsv(1) == 2);
}

TEST_CASE("max view: flag rule with boundary corrections") {
  const BaxterIndex idx = BaxterIndex::build(Permutation({2, 1, 3}), 64);
  // value 2 is view label 2; in MaxC it only has a right child
  CHECK(idx.max_view().child_code(2) == 2);
}

TEST_CASE("views, lp/rp matching and lrp agree with explicit replays, n <= 9") {
  for (uint32_t n = 1; n <= 9; ++n) {
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      auto code = std::make_shared<BaxterCode>(encode(p));
      const TreeView mn(code, false, 64);
      const TreeView mx(code, true, 64, p(1), p(n));
      check_view_against_tree(mn, *build_min_cartesian(p), false);
      check_view_against_tree(mx, *build_max_cartesian(p), true);
      for (const TreeView* t : {&mn, &mx}) {
        const StackReplay r = replay(*t);
        for (uint64_t i = 1; i < n; ++i) {
          if (r.lp[i] == '(') REQUIRE(t->lp_findclose(i) == r.lp_match[i]);
          if (r.lp[i] == ')') REQUIRE(t->lp_findopen(i) == r.lp_match[i]);
          if (r.rp[i] == '(') REQUIRE(t->rp_findclose(i) == r.rp_match[i]);
          if (r.rp[i] == ')') REQUIRE(t->rp_findopen(i) == r.rp_match[i]);
          REQUIRE((t->lp_at(i) == Paren::undefined) == (r.lp[i] == 0));
          REQUIRE((t->rp_at(i) == Paren::undefined) == (r.rp[i] == 0));
        }
        const std::string full = table_lrp(*t);
        REQUIRE(t->lrp_size() == full.size());
        REQUIRE(t->lrp_size() == (n - 1) + t->rank_u2(n - 1));
        for (uint64_t pos = 1; pos <= full.size(); pos += 3) REQUIRE(t->lrp(pos, 4) == full.substr(pos - 1, 4));
      }
    });
  }
}

TEST_CASE("all queries equal the oracles, every Baxter permutation n <= 7") {
  for (uint32_t n = 1; n <= 7; ++n) {
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      const BaxterIndex idx = BaxterIndex::build(p, 64);
      REQUIRE(idx.to_permutation() == p);
      REQUIRE(idx.min_bp().materialize() == augmented_bp(*build_min_cartesian(p)));
      REQUIRE(idx.max_bp().materialize() == augmented_bp(*build_max_cartesian(p)));
      check_all_queries(idx, p);
    });
  }
}

TEST_CASE("random Baxter permutations: virtual trees and queries") {
  std::mt19937_64 rng(11);
  for (uint32_t n : {100u, 1000u, 5000u, 20000u}) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
      const Permutation p = random_baxter_walk(n, seed * 7 + n);
      const BaxterIndex idx = BaxterIndex::build(p, 64);
      REQUIRE(idx.min_bp().materialize() == augmented_bp(*build_min_cartesian(p)));
      REQUIRE(idx.max_bp().materialize() == augmented_bp(*build_max_cartesian(p)));
      for (int t = 0; t < 200; ++t) {
        const uint32_t i = 1 + rng() % n;
        uint32_t a = 1 + rng() % n, b = 1 + rng() % n;
        if (a > b) std::swap(a, b);
        REQUIRE(idx.pi(i) == p(i));
        REQUIRE(idx.pi_inverse(i) == oracle::pi_inverse(p, i));
        REQUIRE(idx.psv(i) == oracle::psv(p, i));
        REQUIRE(idx.nsv(i) == oracle::nsv(p, i));
        REQUIRE(idx.plv(i) == oracle::plv(p, i));
        REQUIRE(idx.nlv(i) == oracle::nlv(p, i));
        REQUIRE(idx.rmin(a, b) == oracle::rmin(p, a, b));
        REQUIRE(idx.rmax(a, b) == oracle::rmax(p, a, b));
      }
    }
  }
}

TEST_CASE("query cost counters") {
  const uint32_t n = 1 << 14;
  const Permutation p = random_baxter_walk(n, 5);
  const BaxterIndex idx = BaxterIndex::build(p, 256);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const uint32_t i = 1 + rng() % n;
    idx.reset_counters();
    REQUIRE(idx.pi(i) == p(i));
    REQUIRE(idx.blocks_decoded() <= 4);
    idx.reset_counters();
    REQUIRE(idx.pi_inverse(i) == oracle::pi_inverse(p, i));
    REQUIRE(idx.next_steps() <= idx.ell());
  }
}

TEST_CASE("space: core payload and auxiliary share") {
  const Permutation p = random_baxter_walk(1 << 14, 9);
  const BaxterIndex idx = BaxterIndex::build(p);
  const SpaceReport r = idx.space_report();
  CHECK(r.core_bits == 3ull * ((1 << 14) - 1));
  CHECK(r.aux_bits > 0);
}

TEST_CASE("BXC1 round trip") {
  const Permutation p = random_baxter_walk(3000, 4);
  const BaxterIndex idx = BaxterIndex::build(p, 128);
  for (bool aux : {false, true}) {
    std::stringstream ss;
    write_bxc(ss, idx, aux);
    const BaxterIndex back = read_bxc(ss);
    CHECK(back.to_permutation() == p);
    CHECK(back.ell() == 128);
    CHECK(back.pi(17) == p(17));
  }
  const BaxterIndex alt(encode_alternating(Permutation({1, 3, 2})), 64);
  std::stringstream sa;
  write_bxc(sa, alt, true);
  const BaxterIndex alt_back = read_bxc(sa);
  CHECK(alt_back.to_permutation() == Permutation({1, 3, 2}));
  CHECK(alt_back.code().alternating);

  std::stringstream bad("BXC2");
  CHECK_THROWS_AS(read_bxc(bad), Error);
  std::stringstream full;
  write_bxc(full, idx, false);
  std::string bytes = full.str();
  std::stringstream cut(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(read_bxc(cut), Error);
  std::string corrupt = bytes;
  corrupt[21] ^= 0x10;
  std::stringstream cs(corrupt);
  try {
    const BaxterIndex x = read_bxc(cs);
    CHECK_FALSE(x.to_permutation() == p);
  } catch (const Error&) {
  }
}
