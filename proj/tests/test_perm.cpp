#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "spq/perm.hpp"

using namespace spq;

namespace {

const Permutation kRunning({9, 8, 10, 1, 7, 4, 5, 6, 2, 3, 11});

}  // namespace

TEST_CASE("classify: worked examples") {
  CHECK_FALSE(classify(Permutation({3, 5, 2, 1, 4})).is_baxter);
  const PermClass c = classify(Permutation({2, 5, 6, 3, 1, 4, 8, 7}));
  CHECK(c.is_baxter);
  CHECK_FALSE(c.is_separable);
  const PermClass one = classify(Permutation({1}));
  CHECK(one.is_baxter);
  CHECK(one.is_separable);
  CHECK(one.is_alternating);
}

TEST_CASE("classify: separable implies baxter, fast check agrees, n <= 8") {
  for (uint32_t n = 1; n <= 8; ++n) {
    enumerate_class(n, PermKind::any, [&](const Permutation& p) {
      const bool bx = is_baxter(p.values());
      REQUIRE(bx == is_baxter_fast(p.values()));
      REQUIRE(is_separable(p.values()) == is_separable_fast(p.values()));
      if (is_separable(p.values())) REQUIRE(bx);
    });
  }
}

TEST_CASE("enumerate_class: counts and stability") {
  const uint64_t baxter[] = {1, 2, 6, 22, 92, 422, 2074, 10754};
  const uint64_t separable[] = {1, 2, 6, 22, 90, 394, 1806};
  for (uint32_t n = 1; n <= 8; ++n) {
    CHECK(count_class(n, PermKind::baxter) == baxter[n - 1]);
    CHECK(count_class(n, PermKind::baxter) == baxter[n - 1]);
  }
  for (uint32_t n = 1; n <= 7; ++n) CHECK(count_class(n, PermKind::separable) == separable[n - 1]);
  CHECK(count_class(4, PermKind::baxter) == 22);
  CHECK(count_class(5, PermKind::separable) == 90);
  std::vector<Permutation> ones;
  enumerate_class(1, PermKind::separable, [&](const Permutation& p) { ones.push_back(p); });
  REQUIRE(ones.size() == 1);
  CHECK(ones[0] == Permutation({1}));
  CHECK_THROWS_AS(count_class(10, PermKind::any), Error);
}

TEST_CASE("enumerate_class: lexicographic order") {
  std::vector<std::vector<uint32_t>> seen;
  enumerate_class(5, PermKind::baxter, [&](const Permutation& p) { seen.push_back(p.values()); });
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("cartesian trees") {
  auto t = build_min_cartesian(kRunning);
  CHECK(t->root->label == 1);
  CHECK(t->root->left->label == 8);
  CHECK(t->root->right->label == 2);
  auto path = build_min_cartesian(Permutation({1, 2, 3}));
  CHECK(path->root->label == 1);
  CHECK(path->root->left == nullptr);
  CHECK(path->root->right->label == 2);
  CHECK(path->root->right->right->label == 3);
  auto mx = build_max_cartesian(Permutation({2, 1, 3}));
  CHECK(mx->root->label == 3);
  CHECK(mx->root->left->label == 2);
  CHECK(mx->root->left->right->label == 1);
}

TEST_CASE("cartesian trees: inorder recovers the sequence, heap order holds, n <= 8") {
  for (uint32_t n = 1; n <= 8; ++n) {
    enumerate_class(n, PermKind::any, [&](const Permutation& p) {
      auto mn = build_min_cartesian(p);
      auto mx = build_max_cartesian(p);
      REQUIRE(mn->inorder_labels() == p.values());
      REQUIRE(mx->inorder_labels() == p.values());
      for (const auto& x : mn->nodes)
        if (x.parent) REQUIRE(x.parent->label < x.label);
      for (const auto& x : mx->nodes)
        if (x.parent) REQUIRE(x.parent->label > x.label);
    });
  }
}

TEST_CASE("oracles") {
  CHECK(oracle::rmin(kRunning, 5, 8) == 6);
  CHECK(oracle::psv(kRunning, 5) == 4);
  CHECK(oracle::nlv(kRunning, 9) == 10);
  // 4 at position 6 is the first smaller value after 7.
  CHECK(oracle::nsv(kRunning, 5) == 6);
  CHECK(oracle::rmax(kRunning, 5, 8) == 5);
  CHECK(oracle::plv(kRunning, 2) == 1);
  CHECK(oracle::pi_inverse(kRunning, 7) == 5);
  CHECK_THROWS_AS(oracle::pi(kRunning, 12), Error);
  for (uint32_t n = 1; n <= 6; ++n) {
    enumerate_class(n, PermKind::any, [&](const Permutation& p) {
      const uint32_t amin = oracle::pi_inverse(p, 1), amax = oracle::pi_inverse(p, n);
      REQUIRE(oracle::psv(p, amin) == 0);
      REQUIRE(oracle::nsv(p, amin) == n + 1);
      REQUIRE(oracle::nlv(p, amax) == n + 1);
      REQUIRE(oracle::plv(p, amax) == 0);
    });
  }
}

TEST_CASE("random generators") {
  CHECK(random_baxter(1, 7) == Permutation({1}));
  CHECK(random_separable(1, 7) == Permutation({1}));
  CHECK(random_baxter(6, 42) == random_baxter(6, 42));
  CHECK(random_separable(6, 42) == random_separable(6, 42));
  CHECK(random_baxter_walk(6, 42) == random_baxter_walk(6, 42));
  CHECK(is_baxter_fast(random_baxter(200, 3).values()));
  CHECK(classify(random_baxter(200, 3)).is_baxter);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    CHECK(classify(random_separable(60, seed)).is_separable);
    CHECK(is_baxter_fast(random_baxter_walk(300, seed).values()));
  }
}

TEST_CASE("random_baxter_walk reaches every Baxter permutation of size 5") {
  std::set<std::vector<uint32_t>> seen;
  for (uint64_t seed = 0; seed < 4000; ++seed) seen.insert(random_baxter_walk(5, seed).values());
  CHECK(seen.size() == 92);
}

TEST_CASE("permutation text format") {
  std::stringstream ss("5\n3 5 2 1 4\n");
  const Permutation p = read_permutation(ss);
  CHECK(p == Permutation({3, 5, 2, 1, 4}));
  std::stringstream out;
  write_permutation(out, p);
  CHECK(out.str() == "5\n3 5 2 1 4\n");
  std::stringstream bad1("3\n1 1 2\n"), bad2("x\n"), bad3("2\n1\n"), bad4("2\n1 2 3\n");
  CHECK_THROWS_AS(read_permutation(bad1), Error);
  CHECK_THROWS_AS(read_permutation(bad2), Error);
  CHECK_THROWS_AS(read_permutation(bad3), Error);
  CHECK_THROWS_AS(read_permutation(bad4), Error);
}
