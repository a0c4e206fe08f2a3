// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "spq/baxter.hpp"
#include "spq/bipolar.hpp"
#include "spq/floorplan.hpp"
#include "spq/separable.hpp"

using namespace spq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// A criterion body fills `o`; exceptions count as failures with their message.
int report(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

// Mismatches of all eight queries against the scan oracle, every argument.
template <class Index>
uint64_t exhaustive_mismatches(const Index& idx, const Permutation& p) {
  uint64_t bad = 0;
  const uint32_t n = p.size();
  for (uint32_t i = 1; i <= n; ++i) {
    for (Query q : {Query::pi, Query::inv, Query::psv, Query::nsv, Query::plv, Query::nlv})
      bad += idx.query(q, i) != oracle::query(p, q, i);
    for (uint32_t j = i; j <= n; ++j)
      for (Query q : {Query::rmin, Query::rmax}) bad += idx.query(q, i, j) != oracle::query(p, q, i, j);
  }
  return bad;
}

const std::vector<uint64_t> kBaxterCounts = {1, 2, 6, 22, 92, 422, 2074, 10754};
const std::vector<uint64_t> kSeparableCounts = {1, 2, 6, 22, 90, 394, 1806, 8558};

void criterion1(Outcome& o) {
  uint64_t perms = 0, bad = 0, wrong_counts = 0;
  for (uint32_t n = 1; n <= 8; ++n) {
    uint64_t count = 0;
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      ++count;
      const BaxterCode c = encode(p);
      bad += !(decode(c) == p);
      const BaxterIndex idx(c, 64);
      std::stringstream ss;
      write_bxc(ss, idx, false);
      const BaxterIndex back = read_bxc(ss);
      bad += !(back.to_permutation() == p);
      bad += exhaustive_mismatches(idx, p) + exhaustive_mismatches(back, p);
    });
    wrong_counts += count != kBaxterCounts[n - 1];
    perms += count;
  }
  o.pass = bad == 0 && wrong_counts == 0;
  o.detail = std::to_string(perms) + " permutations, " + std::to_string(bad) + " mismatches, " +
             std::to_string(wrong_counts) + " wrong class counts";
}

void criterion2(Outcome& o) {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failed.push_back(what);
  };
  const Permutation running({9, 8, 10, 1, 7, 4, 5, 6, 2, 3, 11});
  const BaxterIndex r = BaxterIndex::build(running, 64);
  expect(r.min_view().lp_at(3) == Paren::close, "lp[3]");
  expect(r.min_view().lp_findopen(6) == 4, "lp_findopen(6)");
  expect(r.min_view().parent_label(4) == 2, "parent_label(4)");

  const Permutation fig3({2, 1, 9, 10, 11, 12, 8, 4, 6, 5, 7, 3});
  const SeparableIndex s = SeparableIndex::build(fig3);
  expect(s.rho(4) == 10, "rho(4)");
  expect(s.rho_inverse(6) == 9, "rho_inverse(6)");
  expect(s.range_min(3, 9) == 8, "range_min(3,9)");
  expect(s.psv(8) == 2, "psv(8)");

  const Permutation fig5({3, 1, 2, 5, 6, 4});
  const BaxterIndex b = BaxterIndex::build(fig5, 64);
  const BipolarView v = BipolarView::over(b);
  expect(v.edges_adjacent(3, 6), "edges_adjacent(3,6)");
  expect(!v.edges_adjacent(4, 6), "edges_adjacent(4,6)");
  const std::vector<uint64_t> nb = v.edge_neighbors(3);
  expect(nb == std::vector<uint64_t>{4, 6}, "edge_neighbors(3)");
  std::vector<uint64_t> values;
  for (uint64_t e : nb) values.push_back(b.pi(e));
  expect(values == std::vector<uint64_t>{5, 4}, "edge_neighbors(3) values");

  expect(to_baxter(testing::pinwheel8()) == Permutation({2, 5, 6, 3, 1, 4, 8, 7}), "to_baxter(pin-wheel)");

  o.pass = failed.empty();
  o.detail = failed.empty() ? "all 13 values reproduced" : "wrong:";
  for (const std::string& f : failed) o.detail += " " + f;
}

void criterion3(Outcome& o) {
  bool core_ok = true;
  std::vector<double> ratio;
  for (uint32_t lg : {14u, 17u, 20u}) {
    const uint32_t n = 1u << lg;
    const BaxterIndex idx = BaxterIndex::build(random_baxter_walk(n, lg), 1024);
    const SpaceReport r = idx.space_report();
    core_ok &= r.core_bits == 3ull * (n - 1);
    ratio.push_back(static_cast<double>(r.aux_bits) / n);
  }
  uint64_t alt = 0, alt_bad = 0;
  for (uint32_t n = 1; n <= 9; ++n)
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      if (!is_alternating(p.values())) return;
      ++alt;
      const BaxterIndex idx(encode_alternating(p), 64);
      alt_bad += idx.space_report().core_bits != 2 * (idx.code().n - 1) || !(idx.to_permutation() == p);
    });
  // A large alternating instance: consecutive descents 2 1 4 3 ... are alternating and separable.
  std::vector<uint32_t> zig(1u << 14);
  for (uint32_t i = 0; i < zig.size(); ++i) zig[i] = (i ^ 1) + 1;
  const BaxterIndex big(encode_alternating(Permutation(zig)), 1024);
  alt_bad += big.space_report().core_bits != 2 * (big.code().n - 1);

  const bool decreasing = ratio[0] > ratio[1] && ratio[1] > ratio[2];
  o.pass = core_ok && alt_bad == 0 && decreasing && ratio[2] < 0.5;
  char buf[200];
  std::snprintf(buf, sizeof buf, "core 3(n-1) %s, alternating 2(n'-1) %s on %llu, aux/n %.4f %.4f %.4f",
                core_ok ? "exact" : "WRONG", alt_bad ? "WRONG" : "exact", static_cast<unsigned long long>(alt + 1),
                ratio[0], ratio[1], ratio[2]);
  o.detail = buf;
}

void criterion4(Outcome& o) {
  const uint32_t n = 1u << 20;
  const Permutation p = random_baxter_walk(n, 4);
  const BaxterIndex idx = BaxterIndex::build(p, 1024);
  std::mt19937_64 rng(4);
  uint64_t worst_blocks = 0, worst_steps = 0, wrong = 0;
  std::vector<double> pi_us;
  for (int t = 0; t < 1000; ++t) {
    const uint32_t i = 1 + rng() % n;
    idx.reset_counters();
    const auto t0 = Clock::now();
    const uint64_t v = idx.pi(i);
    pi_us.push_back(std::chrono::duration<double, std::micro>(Clock::now() - t0).count());
    worst_blocks = std::max(worst_blocks, idx.blocks_decoded());
    wrong += v != p(i);
    idx.reset_counters();
    wrong += idx.pi_inverse(v) != i;
    worst_steps = std::max(worst_steps, idx.next_steps());
  }
  std::nth_element(pi_us.begin(), pi_us.begin() + pi_us.size() / 2, pi_us.end());
  const double median = pi_us[pi_us.size() / 2];
  o.pass = worst_blocks <= 4 && worst_steps <= idx.ell() && median < 50.0 && wrong == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max blocks per pi %llu (<= 4), max next-steps per inverse %llu (<= %u), "
                "median pi %.1f us (< 50), %llu wrong answers",
                static_cast<unsigned long long>(worst_blocks), static_cast<unsigned long long>(worst_steps), idx.ell(),
                median, static_cast<unsigned long long>(wrong));
  o.detail = buf;
}

void criterion5(Outcome& o) {
  // Fixed per-query budgets, independent of n: rho, rho_inverse, range_min/range_max.
  const uint64_t budget[3] = {8, 8, 36};
  uint64_t worst[2][3] = {};
  const uint32_t sizes[2] = {1u << 10, 1u << 18};
  uint64_t wrong = 0;
  for (int z = 0; z < 2; ++z) {
    const uint32_t n = sizes[z];
    const Permutation p = random_separable(n, 50 + z);
    const SeparableIndex s = SeparableIndex::build(p);
    std::mt19937_64 rng(z);
    for (int t = 0; t < 20000; ++t) {
      const uint32_t i = 1 + rng() % n;
      uint32_t a = 1 + rng() % n, b = 1 + rng() % n;
      if (a > b) std::swap(a, b);
      s.reset_counters();
      wrong += s.rho(i) != p(i);
      worst[z][0] = std::max(worst[z][0], s.probes());
      s.reset_counters();
      wrong += s.rho_inverse(i) != oracle::pi_inverse(p, i);
      worst[z][1] = std::max(worst[z][1], s.probes());
      s.reset_counters();
      const uint64_t m = s.range_min(a, b);
      worst[z][2] = std::max(worst[z][2], s.probes());
      if (t < 200) wrong += m != oracle::rmin(p, a, b);
    }
  }
  bool bounded = true;
  for (int q = 0; q < 3; ++q) bounded &= worst[0][q] <= budget[q] && worst[1][q] <= budget[q];

  uint64_t perms = 0, bad = 0, wrong_counts = 0;
  for (uint32_t n = 1; n <= 8; ++n) {
    uint64_t count = 0;
    enumerate_class(n, PermKind::separable, [&](const Permutation& p) {
      ++count;
      bad += exhaustive_mismatches(SeparableIndex::build(p, 4, 3), p);
      bad += exhaustive_mismatches(SeparableIndex::build(p), p);
    });
    wrong_counts += count != kSeparableCounts[n - 1];
    perms += count;
  }
  o.pass = bounded && wrong == 0 && bad == 0 && wrong_counts == 0;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "max probes rho %llu/%llu inv %llu/%llu range %llu/%llu at n=2^10/2^18 (budgets 8, 8, 36); "
                "%llu separable permutations, %llu mismatches, %llu wrong class counts",
                static_cast<unsigned long long>(worst[0][0]), static_cast<unsigned long long>(worst[1][0]),
                static_cast<unsigned long long>(worst[0][1]), static_cast<unsigned long long>(worst[1][1]),
                static_cast<unsigned long long>(worst[0][2]), static_cast<unsigned long long>(worst[1][2]),
                static_cast<unsigned long long>(perms), static_cast<unsigned long long>(bad + wrong),
                static_cast<unsigned long long>(wrong_counts));
  o.detail = buf;
}

void criterion6(Outcome& o) {
  const Side sides[] = {Side::above, Side::below, Side::left, Side::right};
  uint64_t pairs = 0, pair_bad = 0, sets = 0, set_bad = 0, anti_bad = 0, contact_only = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const uint32_t n = 2 + static_cast<uint32_t>(seed * 2);  // 2 .. 200
    const Floorplan f = in_bottom_left_order(random_slicing(n, 600 + seed));
    const Permutation p = to_baxter(f);
    const FloorplanGeometry geo(f);
    const SeparableIndex sep = SeparableIndex::build(p, 16, 5);
    const BaxterIndex bax = BaxterIndex::build(p, 64);
    const FloorplanView vs = FloorplanView::over(sep), vb = FloorplanView::over(bax);
    for (Side s : sides)
      for (uint32_t i = 1; i <= n; ++i) {
        std::vector<uint64_t> want;
        for (uint32_t j = 1; j <= n; ++j) {
          const bool g = geo.adjacent(s, i - 1, j - 1);
          contact_only += g && !geo.contact(s, i - 1, j - 1);
          ++pairs;
          pair_bad += vs.adjacent(s, i, j) != g;
          if (g) want.push_back(j);
        }
        for (const FloorplanView* v : {&vs, &vb}) {
          std::vector<uint64_t> got = v->adjacent_set(s, i);
          std::sort(got.begin(), got.end());
          ++sets;
          set_bad += got != want;
        }
      }
    // Antisymmetry: each relation is the converse of its mirror, and never holds both ways.
    for (uint32_t i = 1; i <= n; ++i)
      for (uint32_t j = 1; j <= n; ++j) {
        anti_bad += vb.adjacent(Side::above, i, j) != vb.adjacent(Side::below, j, i);
        anti_bad += vb.adjacent(Side::left, i, j) != vb.adjacent(Side::right, j, i);
        anti_bad += vs.adjacent(Side::above, i, j) && vs.adjacent(Side::above, j, i);
        anti_bad += vs.adjacent(Side::left, i, j) && vs.adjacent(Side::left, j, i);
      }
  }
  o.pass = pair_bad == 0 && set_bad == 0 && anti_bad == 0;
  o.detail = std::to_string(pairs) + " pairs with " + std::to_string(pair_bad) + " mismatches, " + std::to_string(sets) +
             " sets with " + std::to_string(set_bad) + " mismatches, " + std::to_string(anti_bad) +
             " antisymmetry violations; " + std::to_string(contact_only) +
             " segment-adjacent pairs have no boundary overlap";
}

// Degree invariants, orientation, and both queries against the contraction.
uint64_t bipolar_mismatches(const Permutation& p) {
  const EmbeddedBipolarGraph g = build_embedded(p);
  uint64_t bad = !check_degrees(g).empty();
  const BipolarOrientation b = contract(g);
  bad += !check_orientation(b).empty();
  const BaxterIndex idx = BaxterIndex::build(p, 64);
  const BipolarView v = BipolarView::over(idx);
  const uint32_t n = p.size();
  for (uint32_t i = 1; i <= n; ++i) {
    for (uint32_t j = i + 1; j <= n; ++j) bad += v.edges_adjacent(i, j) != oracle_edges_adjacent(b, i, j);
    const std::vector<uint32_t> want = oracle_edge_neighbors(b, i);
    bad += v.edge_neighbors(i) != std::vector<uint64_t>(want.begin(), want.end());
  }
  return bad;
}

void criterion7(Outcome& o) {
  uint64_t small = 0, bad = 0;
  for (uint32_t n = 1; n <= 8; ++n)
    enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
      ++small;
      bad += bipolar_mismatches(p);
    });
  for (uint64_t seed = 0; seed < 100; ++seed) bad += bipolar_mismatches(random_baxter_walk(512, 700 + seed));
  o.pass = bad == 0;
  o.detail = std::to_string(small) + " exhaustive and 100 random n=512 permutations, " + std::to_string(bad) +
             " mismatches";
}

void criterion8(Outcome& o) {
  uint64_t perms = 0, bad = 0;
  auto compare = [&](const Permutation& p, uint64_t probes) {
    ++perms;
    const BaxterIndex b = BaxterIndex::build(p, 64);
    const SeparableIndex s = SeparableIndex::build(p, 16, 5);
    const uint32_t n = p.size();
    if (probes == 0) {
      for (uint32_t i = 1; i <= n; ++i) {
        for (Query q : {Query::pi, Query::inv, Query::psv, Query::nsv, Query::plv, Query::nlv})
          bad += b.query(q, i) != s.query(q, i);
        for (uint32_t j = i; j <= n; ++j)
          for (Query q : {Query::rmin, Query::rmax}) bad += b.query(q, i, j) != s.query(q, i, j);
      }
      return;
    }
    std::mt19937_64 rng(n);
    for (uint64_t t = 0; t < probes; ++t) {
      const Query q = static_cast<Query>(rng() % 8);
      uint32_t a = 1 + rng() % n, c = 1 + rng() % n;
      if (a > c) std::swap(a, c);
      bad += b.query(q, a, c) != s.query(q, a, c);
    }
  };
  for (uint32_t n = 1; n <= 8; ++n) enumerate_class(n, PermKind::separable, [&](const Permutation& p) { compare(p, 0); });
  for (uint64_t seed = 0; seed < 20; ++seed) compare(random_separable(4096, 800 + seed), 5000);
  for (uint64_t seed = 0; seed < 20; ++seed) compare(to_baxter(random_slicing(200, 600 + seed)), 0);
  o.pass = bad == 0;
  o.detail = std::to_string(perms) + " separable permutations, " + std::to_string(bad) + " disagreements";
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, "exhaustive Baxter correctness n<=8", criterion1);
  failed += report(2, "worked examples", criterion2);
  failed += report(3, "space", criterion3);
  failed += report(4, "query cost at n=2^20", criterion4);
  failed += report(5, "separable constant probes and exhaustive n<=8", criterion5);
  failed += report(6, "floorplan formulas vs geometry", criterion6);
  failed += report(7, "bipolar invariants and queries", criterion7);
  failed += report(8, "Baxter and separable structures agree", criterion8);
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
