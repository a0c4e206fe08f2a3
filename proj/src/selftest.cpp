#include "spq/selftest.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "spq/baxter.hpp"
#include "spq/bipolar.hpp"
#include "spq/floorplan.hpp"
#include "spq/separable.hpp"

namespace spq {
namespace {

template <class Index>
bool all_queries_match(const Index& idx, const Permutation& p) {
  const uint32_t n = p.size();
  if (idx.size() != n) return false;
  for (uint32_t i = 1; i <= n; ++i) {
    for (Query q : {Query::pi, Query::inv, Query::psv, Query::nsv, Query::plv, Query::nlv})
      if (idx.query(q, i) != oracle::query(p, q, i)) return false;
    for (uint32_t j = i; j <= n; ++j)
      for (Query q : {Query::rmin, Query::rmax})
        if (idx.query(q, i, j) != oracle::query(p, q, i, j)) return false;
  }
  return true;
}

template <class Index>
bool sampled_queries_match(const Index& idx, const Permutation& p, uint64_t seed, int probes) {
  std::mt19937_64 rng(seed);
  const uint32_t n = p.size();
  for (int k = 0; k < probes; ++k) {
    const Query q = static_cast<Query>(rng() % 8);
    uint32_t a = 1 + rng() % n, b = 1 + rng() % n;
    if (a > b) std::swap(a, b);
    if (idx.query(q, a, b) != oracle::query(p, q, a, b)) return false;
  }
  return true;
}

bool bxc_round_trip(const BaxterIndex& idx, bool aux) {
  std::stringstream ss;
  write_bxc(ss, idx, aux);
  return read_bxc(ss).to_permutation() == idx.to_permutation();
}

bool sep_round_trip(const SeparableIndex& idx, const Permutation& p) {
  std::stringstream ss;
  write_sep(ss, idx);
  return all_queries_match(read_sep(ss), p);
}

bool bipolar_matches(const Permutation& p, const BaxterIndex& idx) {
  const EmbeddedBipolarGraph g = build_embedded(p);
  const BipolarOrientation b = contract(g);
  if (!check_orientation(b).empty()) return false;
  const BipolarView v = BipolarView::over(idx);
  for (uint32_t i = 1; i <= p.size(); ++i) {
    for (uint32_t j = i + 1; j <= p.size(); ++j)
      if (v.edges_adjacent(i, j) != oracle_edges_adjacent(b, i, j)) return false;
    const std::vector<uint32_t> want = oracle_edge_neighbors(b, i);
    if (v.edge_neighbors(i) != std::vector<uint64_t>(want.begin(), want.end())) return false;
  }
  return true;
}

bool floorplan_matches(const Floorplan& raw) {
  const Floorplan f = in_bottom_left_order(raw);
  const Permutation p = to_baxter(f);
  const BaxterIndex idx = BaxterIndex::build(p, 64);
  const FloorplanView v = FloorplanView::over(idx);
  const FloorplanGeometry geo(f);
  const uint32_t n = p.size();
  for (Side s : {Side::above, Side::below, Side::left, Side::right}) {
    for (uint32_t i = 1; i <= n; ++i) {
      std::vector<uint64_t> want;
      for (uint32_t j = 1; j <= n; ++j) {
        const bool g = geo.adjacent(s, i - 1, j - 1);
        if (v.adjacent(s, i, j) != g) return false;
        if (g) want.push_back(j);
      }
      std::vector<uint64_t> got = v.adjacent_set(s, i);
      std::sort(got.begin(), got.end());
      if (got != want) return false;
    }
  }
  return true;
}

class Suite {
 public:
  Suite(std::string name, SelftestCounts& total, const std::function<void(const std::string&)>& line)
      : name_(std::move(name)), total_(total), line_(line) {}
  ~Suite() {
    if (line_) line_(name_ + ": pass " + std::to_string(c_.passed) + " fail " + std::to_string(c_.failed));
    total_.passed += c_.passed;
    total_.failed += c_.failed;
  }

  template <class F>
  void run(F&& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception&) {
      ok = false;
    }
    ++(ok ? c_.passed : c_.failed);
  }

 private:
  std::string name_;
  SelftestCounts c_;
  SelftestCounts& total_;
  const std::function<void(const std::string&)>& line_;
};

}  // namespace

SelftestCounts run_selftest(uint32_t max_n, uint64_t random_n, const std::function<void(const std::string&)>& line) {
  if (max_n > kEnumerationCap) fail(Errc::cap_exceeded, "max-n above the enumeration cap");
  SelftestCounts total;
  const std::string upto = " n<=" + std::to_string(max_n);
  {
    Suite s("baxter" + upto, total, line);
    for (uint32_t n = 1; n <= max_n; ++n)
      enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
        s.run([&] {
          const BaxterIndex idx = BaxterIndex::build(p, 64);
          if (!all_queries_match(idx, p) || !bxc_round_trip(idx, true) || !bxc_round_trip(idx, false)) return false;
          if (!is_alternating(p.values())) return true;
          const BaxterIndex alt(encode_alternating(p), 64);
          return alt.space_report().core_bits == 2 * (alt.code().n - 1) && all_queries_match(alt, p);
        });
      });
  }
  {
    Suite s("separable" + upto, total, line);
    for (uint32_t n = 1; n <= max_n; ++n)
      enumerate_class(n, PermKind::separable, [&](const Permutation& p) {
        s.run([&] {
          const SeparableIndex small = SeparableIndex::build(p, 4, 3);
          return all_queries_match(small, p) && sep_round_trip(small, p) &&
                 all_queries_match(SeparableIndex::build(p), p);
        });
      });
  }
  {
    Suite s("bipolar" + upto, total, line);
    for (uint32_t n = 1; n <= max_n; ++n)
      enumerate_class(n, PermKind::baxter, [&](const Permutation& p) {
        s.run([&] { return bipolar_matches(p, BaxterIndex::build(p, 64)); });
      });
  }
  {
    Suite s("floorplan slicing", total, line);
    for (uint64_t seed = 0; seed < 20; ++seed)
      s.run([&] { return floorplan_matches(random_slicing(static_cast<uint32_t>(2 + seed * 3), seed)); });
  }
  if (random_n > 0) {
    Suite s("random n=" + std::to_string(random_n), total, line);
    const uint32_t n = static_cast<uint32_t>(random_n);
    for (uint64_t seed = 0; seed < 8; ++seed) {
      s.run([&] {
        const Permutation p = random_baxter_walk(n, seed);
        const BaxterIndex idx = BaxterIndex::build(p, 64);
        return sampled_queries_match(idx, p, seed, 2000) && bxc_round_trip(idx, false);
      });
      s.run([&] {
        const Permutation p = random_separable(n, seed);
        return sampled_queries_match(SeparableIndex::build(p, 64, 7), p, seed, 2000);
      });
    }
  }
  return total;
}

}  // namespace spq
