#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "spq/spq.h"

namespace {

spq_perm* make(std::vector<uint32_t> v) {
  spq_perm* p = nullptr;
  REQUIRE(spq_perm_from_array(v.data(), v.size(), &p) == SPQ_OK);
  return p;
}

std::string temp_path(const char* name) { return std::string("capi_test_") + name; }

}  // namespace

TEST_CASE("c api: classify and error reporting") {
  spq_perm* p = make({3, 5, 2, 1, 4});
  int b = -1, s = -1, a = -1;
  CHECK(spq_perm_classify(p, &b, &s, &a) == SPQ_OK);
  CHECK((b == 0 && s == 0 && a == 0));
  spq_index* x = nullptr;
  CHECK(spq_index_build_baxter(p, 1024, 0, &x) == SPQ_NOT_BAXTER);
  CHECK(x == nullptr);
  CHECK(std::string(spq_last_error()).find("2-41-3") != std::string::npos);
  spq_perm_free(p);

  spq_perm* bad = nullptr;
  const uint32_t dup[] = {1, 1};
  CHECK(spq_perm_from_array(dup, 2, &bad) != SPQ_OK);
  CHECK(spq_perm_classify(nullptr, &b, &s, &a) == SPQ_BAD_ARGUMENT);
  CHECK(spq_perm_read("no/such/file", &bad) == SPQ_IO);
  CHECK(std::string(spq_status_name(SPQ_NOT_FOUND)) == "not_found");
}

TEST_CASE("c api: queries, space and containers") {
  spq_perm* p = make({9, 8, 10, 1, 7, 4, 5, 6, 2, 3, 11});
  spq_index* x = nullptr;
  REQUIRE(spq_index_build_baxter(p, 64, 0, &x) == SPQ_OK);
  CHECK(spq_index_kind(x) == SPQ_KIND_BAXTER);
  CHECK(spq_index_size(x) == 11);
  uint64_t v = 0;
  CHECK(spq_index_query(x, SPQ_Q_PI, 4, 0, &v) == SPQ_OK);
  CHECK(v == 1);
  CHECK(spq_index_query(x, SPQ_Q_RMIN, 5, 9, &v) == SPQ_OK);
  CHECK(v == 9);
  CHECK(spq_index_query(x, SPQ_Q_PSV, 1, 0, &v) == SPQ_OK);
  CHECK(v == 0);
  CHECK(spq_index_query(x, SPQ_Q_PI, 12, 0, &v) == SPQ_OUT_OF_RANGE);
  uint64_t core = 0, aux = 0;
  CHECK(spq_index_space(x, &core, &aux) == SPQ_OK);
  CHECK(core == 30);

  const std::string path = temp_path("running.bxc");
  REQUIRE(spq_index_save(x, path.c_str(), 0) == SPQ_OK);
  spq_index* y = nullptr;
  REQUIRE(spq_index_open(path.c_str(), 1024, &y) == SPQ_OK);
  for (uint64_t i = 1; i <= 11; ++i) {
    uint64_t a = 0, b = 0;
    CHECK(spq_index_query(x, SPQ_Q_INV, i, 0, &a) == SPQ_OK);
    CHECK(spq_index_query(y, SPQ_Q_INV, i, 0, &b) == SPQ_OK);
    CHECK(a == b);
  }
  spq_index_free(y);
  std::remove(path.c_str());

  spq_index_free(x);
  spq_perm_free(p);

  // Baxter but not separable: the pin-wheel.
  p = make({2, 5, 6, 3, 1, 4, 8, 7});
  spq_index* s = nullptr;
  CHECK(spq_index_build_separable(p, 1024, 15, &s) == SPQ_NOT_SEPARABLE);
  CHECK(spq_index_build_baxter(p, 64, 0, &s) == SPQ_OK);
  spq_index_free(s);
  spq_perm_free(p);

  FILE* f = std::fopen(path.c_str(), "wb");
  std::fputs("BXC1garbage", f);
  std::fclose(f);
  CHECK(spq_index_open(path.c_str(), 1024, &y) == SPQ_FORMAT);
  std::remove(path.c_str());
}

TEST_CASE("c api: separable container and both query layers") {
  spq_perm* p = make({3, 1, 2, 5, 6, 4});
  spq_index* s = nullptr;
  REQUIRE(spq_index_build_separable(p, 4, 3, &s) == SPQ_OK);
  CHECK(spq_index_kind(s) == SPQ_KIND_SEPARABLE);
  int adj = -1;
  CHECK(spq_bp_edges_adjacent(s, 3, 6, &adj) == SPQ_OK);
  CHECK(adj == 1);
  CHECK(spq_bp_edges_adjacent(s, 4, 6, &adj) == SPQ_OK);
  CHECK(adj == 0);
  CHECK(spq_bp_edges_adjacent(s, 6, 4, &adj) == SPQ_OUT_OF_RANGE);
  uint64_t count = 0;
  CHECK(spq_bp_edge_neighbors(s, 3, nullptr, 0, &count) == SPQ_OK);
  REQUIRE(count == 2);
  uint64_t one[1];
  CHECK(spq_bp_edge_neighbors(s, 3, one, 1, &count) == SPQ_BUFFER_TOO_SMALL);
  uint64_t two[2];
  CHECK(spq_bp_edge_neighbors(s, 3, two, 2, &count) == SPQ_OK);
  CHECK((two[0] == 4 && two[1] == 6));

  const std::string path = temp_path("fig.sep");
  REQUIRE(spq_index_save(s, path.c_str(), 1) == SPQ_OK);
  spq_index* t = nullptr;
  REQUIRE(spq_index_open(path.c_str(), 1024, &t) == SPQ_OK);
  CHECK(spq_index_kind(t) == SPQ_KIND_SEPARABLE);
  spq_perm* back = nullptr;
  REQUIRE(spq_index_to_perm(t, &back) == SPQ_OK);
  uint32_t vals[6];
  CHECK(spq_perm_values(back, vals, 6) == SPQ_OK);
  CHECK(std::vector<uint32_t>(vals, vals + 6) == std::vector<uint32_t>{3, 1, 2, 5, 6, 4});
  std::remove(path.c_str());
  spq_perm_free(back);
  spq_index_free(t);
  spq_index_free(s);
  spq_perm_free(p);
}

TEST_CASE("c api: floorplans keep their block ids") {
  const std::string path = temp_path("pinwheel.txt");
  FILE* f = std::fopen(path.c_str(), "w");
  // The pin-wheel with ids shuffled and lines out of order.
  std::fputs("8 5 4\n15 4 3 5 4\n11 1 0 2 1\n13 1 1 3 2\n10 0 0 1 2\n12 2 0 4 1\n14 0 2 3 4\n17 3 1 4 4\n16 4 0 5 3\n",
             f);
  std::fclose(f);
  spq_floorplan* fp = nullptr;
  REQUIRE(spq_floorplan_read(path.c_str(), &fp) == SPQ_OK);
  std::remove(path.c_str());
  CHECK(spq_floorplan_size(fp) == 8);
  spq_perm* p = nullptr;
  REQUIRE(spq_floorplan_to_perm(fp, &p) == SPQ_OK);
  uint32_t vals[8];
  REQUIRE(spq_perm_values(p, vals, 8) == SPQ_OK);
  CHECK(std::vector<uint32_t>(vals, vals + 8) == std::vector<uint32_t>{2, 5, 6, 3, 1, 4, 8, 7});
  uint32_t id = 0;
  CHECK(spq_floorplan_block_id(fp, 1, &id) == SPQ_OK);
  CHECK(id == 10);
  uint64_t pos = 0;
  CHECK(spq_floorplan_position(fp, 13, &pos) == SPQ_OK);
  CHECK(pos == 4);
  CHECK(spq_floorplan_position(fp, 99, &pos) == SPQ_NOT_FOUND);

  spq_index* x = nullptr;
  REQUIRE(spq_index_build_baxter(p, 64, 0, &x) == SPQ_OK);
  int adj = 0;
  // Block 11 (position 2) sits directly below block 13 (position 4).
  CHECK(spq_fp_adjacent(x, SPQ_SIDE_BELOW, 2, 4, &adj) == SPQ_OK);
  CHECK(adj == 1);
  uint64_t count = 0;
  CHECK(spq_fp_adjacent_set(x, SPQ_SIDE_ABOVE, 4, nullptr, 0, &count) == SPQ_OK);
  CHECK(count == 2);
  spq_index_free(x);
  spq_perm_free(p);
  spq_floorplan_free(fp);

  REQUIRE(spq_floorplan_random_slicing(1, 0, &fp) == SPQ_OK);
  spq_floorplan_free(fp);
  spq_floorplan* bad = nullptr;
  f = std::fopen(path.c_str(), "w");
  std::fputs("2 2 1\n1 0 0 1 1\n2 0 0 2 1\n", f);
  std::fclose(f);
  CHECK(spq_floorplan_read(path.c_str(), &bad) == SPQ_PARSE);
  std::remove(path.c_str());
}

TEST_CASE("c api: parsing helpers and self-test") {
  spq_query q;
  CHECK(spq_parse_query("nlv", &q) == SPQ_OK);
  CHECK(q == SPQ_Q_NLV);
  CHECK(spq_query_arity(SPQ_Q_RMAX) == 2);
  CHECK(spq_parse_query("median", &q) == SPQ_PARSE);
  spq_side s;
  CHECK(spq_parse_side("left", &s) == SPQ_OK);
  CHECK(s == SPQ_SIDE_LEFT);

  std::vector<std::string> lines;
  auto collect = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
  uint64_t passed = 0, failed = 0;
  CHECK(spq_selftest(5, 300, collect, &lines, &passed, &failed) == SPQ_OK);
  CHECK(failed == 0);
  CHECK(passed > 0);
  CHECK(lines.size() == 5);
  CHECK(spq_selftest(10, 0, nullptr, nullptr, &passed, &failed) == SPQ_CAP_EXCEEDED);
}
