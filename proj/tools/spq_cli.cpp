// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spq/spq.h"

namespace {

// Exit 1 for domain errors, 2 for anything wrong with the input itself.
struct Failure {
  int code;
  std::string what;
};

int exit_code(spq_status s) {
  switch (s) {
    case SPQ_NOT_BAXTER:
    case SPQ_NOT_SEPARABLE:
    case SPQ_NOT_ALTERNATING:
    case SPQ_NOT_FOUND:
    case SPQ_OUT_OF_RANGE:
    case SPQ_UNDEFINED:
    case SPQ_CAP_EXCEEDED:
    case SPQ_MICRO_TOO_LARGE:
      return 1;
    default:
      return 2;
  }
}

void check(spq_status s) {
  if (s != SPQ_OK) throw Failure{exit_code(s), std::string(spq_status_name(s)) + ": " + spq_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Perm = std::unique_ptr<spq_perm, Deleter<spq_perm, spq_perm_free>>;
using Index = std::unique_ptr<spq_index, Deleter<spq_index, spq_index_free>>;
using Plan = std::unique_ptr<spq_floorplan, Deleter<spq_floorplan, spq_floorplan_free>>;

Perm read_perm(const std::string& path) {
  spq_perm* p = nullptr;
  check(spq_perm_read(path.c_str(), &p));
  return Perm(p);
}

Index open_index(const std::string& path, uint32_t block_len) {
  spq_index* x = nullptr;
  check(spq_index_open(path.c_str(), block_len, &x));
  return Index(x);
}

Plan read_plan(const std::string& path) {
  spq_floorplan* f = nullptr;
  check(spq_floorplan_read(path.c_str(), &f));
  return Plan(f);
}

uint64_t parse_u64(const std::string& s) {
  size_t used = 0;
  uint64_t v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Failure{2, "not a non-negative integer: " + s};
  return v;
}

const char* yes_no(int b) { return b ? "true" : "false"; }

struct Options {
  std::string input, output, op, side;
  std::vector<std::string> args;
  uint32_t block_len = 1024, ell1 = 1024, ell2 = 15, max_n = 8;
  uint64_t random_n = 2000, seed = 1, queries = 20000;
  uint32_t runs = 5;
  bool alternating = false, separable = false, no_aux = false, values = false, timing = false;
  std::vector<uint64_t> sizes, block_lens;
};

void run_classify(const Options& o) {
  const Perm p = read_perm(o.input);
  int b = 0, s = 0, a = 0;
  check(spq_perm_classify(p.get(), &b, &s, &a));
  std::printf("baxter=%s separable=%s alternating=%s\n", yes_no(b), yes_no(s), yes_no(a));
}

void run_encode(const Options& o) {
  const Perm p = read_perm(o.input);
  spq_index* x = nullptr;
  if (o.separable)
    check(spq_index_build_separable(p.get(), o.ell1, o.ell2, &x));
  else
    check(spq_index_build_baxter(p.get(), o.block_len, o.alternating, &x));
  const Index idx(x);
  check(spq_index_save(idx.get(), o.output.c_str(), !o.no_aux));
}

void run_query(const Options& o) {
  const Index idx = open_index(o.input, o.block_len);
  spq_query q;
  check(spq_parse_query(o.op.c_str(), &q));
  const size_t arity = static_cast<size_t>(spq_query_arity(q));
  if (o.args.size() % arity) throw Failure{2, o.op + " takes arguments in pairs"};
  std::string out;
  for (size_t k = 0; k < o.args.size(); k += arity) {
    const uint64_t a = parse_u64(o.args[k]), b = arity == 2 ? parse_u64(o.args[k + 1]) : 0;
    uint64_t r = 0;
    check(spq_index_query(idx.get(), q, a, b, &r));
    out += std::to_string(r) + '\n';
  }
  std::fputs(out.c_str(), stdout);
}

// Floorplan blocks are named by their ids in the file; the index works on bottom-left positions.
struct PlanIndex {
  Plan plan;
  Index idx;
};

PlanIndex plan_index(const Options& o) {
  PlanIndex r{read_plan(o.input), nullptr};
  spq_perm* p = nullptr;
  check(spq_floorplan_to_perm(r.plan.get(), &p));
  const Perm perm(p);
  spq_index* x = nullptr;
  check(spq_index_build_baxter(perm.get(), o.block_len, 0, &x));
  r.idx.reset(x);
  return r;
}

uint64_t position_of(const spq_floorplan* f, const std::string& id) {
  const uint64_t v = parse_u64(id);
  if (v > UINT32_MAX) throw Failure{1, "no block with id " + id};
  uint64_t pos = 0;
  check(spq_floorplan_position(f, static_cast<uint32_t>(v), &pos));
  return pos;
}

void run_floorplan(const std::string& sub, const Options& o) {
  if (sub == "random") {
    if (o.args.size() != 1) throw Failure{2, "floorplan random takes the block count"};
    spq_floorplan* f = nullptr;
    check(spq_floorplan_random_slicing(parse_u64(o.args[0]), o.seed, &f));
    const Plan plan(f);
    check(spq_floorplan_write(plan.get(), "-"));
    return;
  }
  if (sub == "to-perm") {
    const Plan plan = read_plan(o.input);
    spq_perm* p = nullptr;
    check(spq_floorplan_to_perm(plan.get(), &p));
    const Perm perm(p);
    check(spq_perm_write(perm.get(), "-"));
    return;
  }
  spq_side side;
  check(spq_parse_side(o.side.c_str(), &side));
  const PlanIndex pi = plan_index(o);
  if (sub == "adjacent") {
    if (o.args.size() != 2) throw Failure{2, "floorplan adjacent takes two block ids"};
    int r = 0;
    check(spq_fp_adjacent(pi.idx.get(), side, position_of(pi.plan.get(), o.args[0]),
                          position_of(pi.plan.get(), o.args[1]), &r));
    std::printf("%s\n", yes_no(r));
    return;
  }
  if (o.args.size() != 1) throw Failure{2, "floorplan set takes one block id"};
  uint64_t count = 0;
  const uint64_t i = position_of(pi.plan.get(), o.args[0]);
  check(spq_fp_adjacent_set(pi.idx.get(), side, i, nullptr, 0, &count));
  std::vector<uint64_t> v(count);
  check(spq_fp_adjacent_set(pi.idx.get(), side, i, v.data(), v.size(), &count));
  for (uint64_t pos : v) {
    uint32_t id = 0;
    check(spq_floorplan_block_id(pi.plan.get(), pos, &id));
    std::printf("%u\n", id);
  }
}

void run_bipolar(const std::string& sub, const Options& o) {
  if (sub == "dump") {
    const Perm p = read_perm(o.input);
    check(spq_bp_dump(p.get(), o.output.empty() ? "-" : o.output.c_str()));
    return;
  }
  const Index idx = open_index(o.input, o.block_len);
  if (sub == "adjacent") {
    if (o.args.size() != 2) throw Failure{2, "bipolar adjacent takes two edge positions"};
    int r = 0;
    check(spq_bp_edges_adjacent(idx.get(), parse_u64(o.args[0]), parse_u64(o.args[1]), &r));
    std::printf("%s\n", yes_no(r));
    return;
  }
  if (o.args.size() != 1) throw Failure{2, "bipolar neighbors takes one edge position"};
  const uint64_t i = parse_u64(o.args[0]);
  uint64_t count = 0;
  check(spq_bp_edge_neighbors(idx.get(), i, nullptr, 0, &count));
  std::vector<uint64_t> v(count);
  check(spq_bp_edge_neighbors(idx.get(), i, v.data(), v.size(), &count));
  for (uint64_t e : v) {
    uint64_t label = e;
    if (o.values) check(spq_index_query(idx.get(), SPQ_Q_PI, e, 0, &label));
    std::printf("%llu\n", static_cast<unsigned long long>(label));
  }
}

int run_selftest(const Options& o) {
  uint64_t passed = 0, failed = 0;
  auto print = [](const char* line, void*) { std::printf("%s\n", line); };
  check(spq_selftest(o.max_n, o.random_n, print, nullptr, &passed, &failed));
  std::printf("PASS %llu\nFAIL %llu\n", static_cast<unsigned long long>(passed),
              static_cast<unsigned long long>(failed));
  return failed == 0 ? 0 : 1;
}

// Median over runs of the mean time per query, each run answering the same random arguments.
double time_query(const spq_index* x, spq_query q, const Options& o, std::mt19937_64& rng) {
  const uint64_t n = spq_index_size(x);
  std::vector<std::pair<uint64_t, uint64_t>> args(o.queries);
  for (auto& [a, b] : args) {
    a = 1 + rng() % n;
    b = 1 + rng() % n;
    if (a > b) std::swap(a, b);
  }
  std::vector<double> per_op;
  volatile uint64_t sink = 0;  // keeps the loop observable
  for (uint32_t r = 0; r < o.runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [a, b] : args) {
      uint64_t v = 0;
      check(spq_index_query(x, q, a, b, &v));
      sink = sink + v;
    }
    const auto t1 = std::chrono::steady_clock::now();
    per_op.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(args.size()));
  }
  std::nth_element(per_op.begin(), per_op.begin() + per_op.size() / 2, per_op.end());
  return per_op[per_op.size() / 2];
}

void run_bench(const Options& o) {
  if (o.sizes.empty() || o.block_lens.empty()) throw Failure{2, "bench needs --sizes and --block-lens"};
  if (o.runs < 5) throw Failure{2, "bench needs at least 5 runs"};
  const spq_query all[] = {SPQ_Q_PI, SPQ_Q_INV, SPQ_Q_RMIN, SPQ_Q_RMAX, SPQ_Q_PSV, SPQ_Q_NSV, SPQ_Q_PLV, SPQ_Q_NLV};
  const char* names[] = {"pi", "inv", "rmin", "rmax", "psv", "nsv", "plv", "nlv"};
  std::printf("n\tell\tcore_bits\taux_bits");
  if (o.timing)
    for (const char* nm : names) std::printf("\t%s_ns", nm);
  std::printf("\n");
  for (uint64_t n : o.sizes) {
    spq_perm* p = nullptr;
    check(spq_perm_random(o.separable ? SPQ_KIND_SEPARABLE : SPQ_KIND_BAXTER, n, o.seed, &p));
    const Perm perm(p);
    for (uint64_t ell : o.block_lens) {
      if (ell > UINT32_MAX) throw Failure{2, "block length too large"};
      spq_index* x = nullptr;
      if (o.separable)
        check(spq_index_build_separable(perm.get(), static_cast<uint32_t>(ell), o.ell2, &x));
      else
        check(spq_index_build_baxter(perm.get(), static_cast<uint32_t>(ell), 0, &x));
      const Index idx(x);
      uint64_t core = 0, aux = 0;
      check(spq_index_space(idx.get(), &core, &aux));
      std::printf("%llu\t%llu\t%llu\t%llu", static_cast<unsigned long long>(n), static_cast<unsigned long long>(ell),
                  static_cast<unsigned long long>(core), static_cast<unsigned long long>(aux));
      if (o.timing) {
        std::mt19937_64 rng(o.seed);
        for (spq_query q : all) std::printf("\t%.1f", time_query(idx.get(), q, o, rng));
      }
      std::printf("\n");
      std::fflush(stdout);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Succinct Baxter and separable permutation queries"};
  app.require_subcommand(1, 1);
  Options o;

  auto* classify = app.add_subcommand("classify", "Print Baxter, separable and alternating membership");
  classify->add_option("file", o.input, "Permutation text, or - for standard input")->required();

  auto* encode = app.add_subcommand("encode", "Write a BXC1 or SEP1 container");
  encode->add_option("file", o.input)->required();
  encode->add_option("out", o.output)->required();
  encode->add_flag("--alternating", o.alternating, "Use the two-bit alternating code");
  encode->add_option("--block-len", o.block_len, "Baxter sampling length")->capture_default_str();
  encode->add_flag("--separable", o.separable, "Write SEP1 instead of BXC1");
  encode->add_option("--ell1", o.ell1, "Mini tree size for SEP1")->capture_default_str();
  encode->add_option("--ell2", o.ell2, "Micro tree size for SEP1")->capture_default_str();
  encode->add_flag("--no-aux", o.no_aux, "Omit auxiliary sections from BXC1");

  auto* query = app.add_subcommand("query", "Answer queries, one integer per line");
  query->add_option("struct", o.input, "BXC1, SEP1 or permutation text")->required();
  query->add_option("--op", o.op, "pi, inv, rmin, rmax, psv, nsv, plv or nlv")->required();
  query->add_option("args", o.args, "Positions; rmin and rmax take pairs");
  query->add_option("--block-len", o.block_len, "Sampling length when indexing permutation text");

  auto* floorplan = app.add_subcommand("floorplan", "Mosaic floorplan queries");
  floorplan->require_subcommand(1, 1);
  auto* fp_perm = floorplan->add_subcommand("to-perm", "Print the floorplan's Baxter permutation");
  fp_perm->add_option("file", o.input)->required();
  auto* fp_adj = floorplan->add_subcommand("adjacent", "Does block I lie on side S of block J");
  auto* fp_set = floorplan->add_subcommand("set", "Blocks lying on side S of block I");
  for (auto* c : {fp_adj, fp_set}) {
    c->add_option("file", o.input)->required();
    c->add_option("--side", o.side, "above, below, left or right")->required();
    c->add_option("ids", o.args, "Block ids from the file");
  }
  auto* fp_random = floorplan->add_subcommand("random", "Print a random slicing floorplan");
  fp_random->add_option("n", o.args)->required();
  fp_random->add_option("--seed", o.seed)->capture_default_str();

  auto* bipolar = app.add_subcommand("bipolar", "Plane bipolar orientation queries");
  bipolar->require_subcommand(1, 1);
  auto* bp_adj = bipolar->add_subcommand("adjacent", "Does edge I end where edge J starts");
  auto* bp_nb = bipolar->add_subcommand("neighbors", "Edges leaving the end of edge I");
  for (auto* c : {bp_adj, bp_nb}) {
    c->add_option("struct", o.input, "BXC1, SEP1 or permutation text")->required();
    c->add_option("edges", o.args, "Edge positions");
    c->add_option("--block-len", o.block_len);
  }
  bp_nb->add_flag("--values", o.values, "Print pi of each neighbour instead of its position");
  auto* bp_dump = bipolar->add_subcommand("dump", "Write the embedded graph");
  bp_dump->add_option("file", o.input)->required();
  bp_dump->add_option("out", o.output, "Defaults to standard output");

  auto* selftest = app.add_subcommand("selftest", "Compare every structure with the oracles");
  selftest->add_option("--max-n", o.max_n, "Exhaustive size limit")->capture_default_str();
  selftest->add_option("--random-n", o.random_n, "Random instance size, 0 to skip")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Space and query time table");
  bench->add_option("--sizes", o.sizes)->delimiter(',')->required();
  bench->add_option("--block-lens", o.block_lens)->delimiter(',')->required();
  bench->add_flag("--timing", o.timing, "Add median ns/op columns; output then varies between runs");
  bench->add_flag("--separable", o.separable, "Bench the separable index; block lengths set ell1");
  bench->add_option("--ell2", o.ell2)->capture_default_str();
  bench->add_option("--seed", o.seed)->capture_default_str();
  bench->add_option("--runs", o.runs)->capture_default_str();
  bench->add_option("--queries", o.queries)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*classify) run_classify(o);
    if (*encode) run_encode(o);
    if (*query) run_query(o);
    if (*floorplan) {
      for (auto* c : {fp_perm, fp_adj, fp_set, fp_random})
        if (*c) run_floorplan(c->get_name(), o);
    }
    if (*bipolar) {
      for (auto* c : {bp_adj, bp_nb, bp_dump})
        if (*c) run_bipolar(c->get_name(), o);
    }
    if (*selftest) return run_selftest(o);
    if (*bench) run_bench(o);
  } catch (const Failure& f) {
    std::fflush(stdout);
    std::fprintf(stderr, "spq: %s\n", f.what.c_str());
    return f.code;
  }
  return 0;
}
