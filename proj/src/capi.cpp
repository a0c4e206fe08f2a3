#include "spq/spq.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <random>
#include <sstream>
#include <variant>

#include "spq/baxter.hpp"
#include "spq/bipolar.hpp"
#include "spq/floorplan.hpp"
#include "spq/selftest.hpp"
#include "spq/separable.hpp"

struct spq_perm {
  spq::Permutation p;
};

struct spq_index {
  std::variant<spq::BaxterIndex, spq::SeparableIndex> x;

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), x);
  }
};

struct spq_floorplan {
  spq::Floorplan f;                 // bottom-left order, ids as given
  std::vector<uint32_t> ids;        // ids[pos - 1]
};

namespace {

thread_local std::string last_error;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

spq_status set_error(spq_status s, const std::string& what) {
  last_error = what;
  return s;
}

spq_status from_errc(spq::Errc e) {
  using spq::Errc;
  switch (e) {
    case Errc::ok: return SPQ_OK;
    case Errc::not_baxter: return SPQ_NOT_BAXTER;
    case Errc::not_separable: return SPQ_NOT_SEPARABLE;
    case Errc::not_alternating: return SPQ_NOT_ALTERNATING;
    case Errc::not_found: return SPQ_NOT_FOUND;
    case Errc::out_of_range: return SPQ_OUT_OF_RANGE;
    case Errc::undefined: return SPQ_UNDEFINED;
    case Errc::integrity: return SPQ_INTEGRITY;
    case Errc::parse: return SPQ_PARSE;
    case Errc::format: return SPQ_FORMAT;
    case Errc::micro_too_large: return SPQ_MICRO_TOO_LARGE;
    case Errc::cap_exceeded: return SPQ_CAP_EXCEEDED;
  }
  return SPQ_INTERNAL;
}

// Exceptions never cross the C boundary.
template <class F>
spq_status guard(F&& f) {
  try {
    f();
    return SPQ_OK;
  } catch (const spq::Error& e) {
    return set_error(from_errc(e.code()), e.what());
  } catch (const IoError& e) {
    return set_error(SPQ_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SPQ_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SPQ_INTERNAL, e.what());
  }
}

spq_status null_arg() { return set_error(SPQ_BAD_ARGUMENT, "null argument"); }

// Binary mode so containers survive; "-" maps to the standard streams.
std::unique_ptr<std::istream> open_in(const char* path) {
  if (std::strcmp(path, "-") == 0) {
    auto ss = std::make_unique<std::stringstream>();
    *ss << std::cin.rdbuf();
    return ss;
  }
  auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*f) throw IoError(std::string("cannot open ") + path);
  return f;
}

template <class F>
void with_out(const char* path, F&& f) {
  if (std::strcmp(path, "-") == 0) {
    f(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot write ") + path);
  f(out);
  if (!out.flush()) throw IoError(std::string("write failed: ") + path);
}

// Bottom-left order, keeping the caller's ids.
spq_floorplan adopt(const spq::Floorplan& raw) {
  spq_floorplan f{{raw.width, raw.height, {}}, {}};
  for (uint32_t k : spq::deletion_order(raw, spq::Corner::bottom_left)) {
    f.f.blocks.push_back(raw.blocks[k]);
    f.ids.push_back(raw.blocks[k].id);
  }
  return f;
}

spq_status copy_out(const std::vector<uint64_t>& v, uint64_t* out, uint64_t cap, uint64_t* count) {
  if (!count) return null_arg();
  *count = v.size();
  if (!out) return SPQ_OK;
  if (cap < v.size()) return set_error(SPQ_BUFFER_TOO_SMALL, "buffer holds fewer entries than the result");
  std::copy(v.begin(), v.end(), out);
  return SPQ_OK;
}

}  // namespace

extern "C" {

const char* spq_last_error(void) { return last_error.c_str(); }

const char* spq_status_name(spq_status s) {
  switch (s) {
    case SPQ_OK: return "ok";
    case SPQ_NOT_BAXTER: return "not_baxter";
    case SPQ_NOT_SEPARABLE: return "not_separable";
    case SPQ_NOT_ALTERNATING: return "not_alternating";
    case SPQ_NOT_FOUND: return "not_found";
    case SPQ_OUT_OF_RANGE: return "out_of_range";
    case SPQ_UNDEFINED: return "undefined";
    case SPQ_INTEGRITY: return "integrity";
    case SPQ_PARSE: return "parse";
    case SPQ_FORMAT: return "format";
    case SPQ_MICRO_TOO_LARGE: return "micro_too_large";
    case SPQ_CAP_EXCEEDED: return "cap_exceeded";
    case SPQ_IO: return "io";
    case SPQ_BAD_ARGUMENT: return "bad_argument";
    case SPQ_BUFFER_TOO_SMALL: return "buffer_too_small";
    case SPQ_NO_MEMORY: return "no_memory";
    case SPQ_INTERNAL: return "internal";
  }
  return "unknown";
}

spq_status spq_parse_query(const char* name, spq_query* out) {
  if (!name || !out) return null_arg();
  spq::Query q;
  if (!spq::parse_query(name, q)) return set_error(SPQ_PARSE, std::string("unknown query: ") + name);
  *out = static_cast<spq_query>(q);
  return SPQ_OK;
}

spq_status spq_parse_side(const char* name, spq_side* out) {
  if (!name || !out) return null_arg();
  spq::Side s;
  if (!spq::parse_side(name, s)) return set_error(SPQ_PARSE, std::string("unknown side: ") + name);
  *out = static_cast<spq_side>(s);
  return SPQ_OK;
}

int spq_query_arity(spq_query q) { return q == SPQ_Q_RMIN || q == SPQ_Q_RMAX ? 2 : 1; }

spq_status spq_perm_from_array(const uint32_t* values, uint64_t n, spq_perm** out) {
  if ((!values && n) || !out) return null_arg();
  return guard([&] {
    *out = new spq_perm{spq::Permutation(std::vector<uint32_t>(values, values + n))};
  });
}

spq_status spq_perm_read(const char* path, spq_perm** out) {
  if (!path || !out) return null_arg();
  return guard([&] {
    auto in = open_in(path);
    *out = new spq_perm{spq::read_permutation(*in)};
  });
}

spq_status spq_perm_write(const spq_perm* p, const char* path) {
  if (!p || !path) return null_arg();
  return guard([&] { with_out(path, [&](std::ostream& o) { spq::write_permutation(o, p->p); }); });
}

spq_status spq_perm_random(int kind, uint64_t n, uint64_t seed, spq_perm** out) {
  if (!out) return null_arg();
  if (n == 0 || n > UINT32_MAX) return set_error(SPQ_OUT_OF_RANGE, "size must lie in [1, 2^32)");
  return guard([&] {
    const uint32_t m = static_cast<uint32_t>(n);
    switch (kind) {
      case SPQ_KIND_BAXTER: *out = new spq_perm{spq::random_baxter_walk(m, seed)}; break;
      case SPQ_KIND_SEPARABLE: *out = new spq_perm{spq::random_separable(m, seed)}; break;
      case 0: {
        std::vector<uint32_t> v(m);
        for (uint32_t i = 0; i < m; ++i) v[i] = i + 1;
        std::mt19937_64 rng(seed);
        std::shuffle(v.begin(), v.end(), rng);
        *out = new spq_perm{spq::Permutation(std::move(v))};
        break;
      }
      default: spq::fail(spq::Errc::out_of_range, "unknown permutation kind");
    }
  });
}

uint64_t spq_perm_size(const spq_perm* p) { return p ? p->p.size() : 0; }

spq_status spq_perm_values(const spq_perm* p, uint32_t* out, uint64_t cap) {
  if (!p || !out) return null_arg();
  if (cap < p->p.size()) return set_error(SPQ_BUFFER_TOO_SMALL, "buffer shorter than the permutation");
  std::copy(p->p.values().begin(), p->p.values().end(), out);
  return SPQ_OK;
}

spq_status spq_perm_classify(const spq_perm* p, int* baxter, int* separable, int* alternating) {
  if (!p || !baxter || !separable || !alternating) return null_arg();
  return guard([&] {
    const spq::PermClass c = spq::classify(p->p);
    *baxter = c.is_baxter;
    *separable = c.is_separable;
    *alternating = c.is_alternating;
  });
}

void spq_perm_free(spq_perm* p) { delete p; }

spq_status spq_index_build_baxter(const spq_perm* p, uint32_t block_len, int alternating, spq_index** out) {
  if (!p || !out) return null_arg();
  return guard([&] {
    spq::BaxterCode c = alternating ? spq::encode_alternating(p->p) : spq::encode(p->p);
    *out = new spq_index{spq::BaxterIndex(std::move(c), block_len)};
  });
}

spq_status spq_index_build_separable(const spq_perm* p, uint32_t ell1, uint32_t ell2, spq_index** out) {
  if (!p || !out) return null_arg();
  return guard([&] { *out = new spq_index{spq::SeparableIndex::build(p->p, ell1, ell2)}; });
}

spq_status spq_index_open(const char* path, uint32_t block_len, spq_index** out) {
  if (!path || !out) return null_arg();
  return guard([&] {
    auto in = open_in(path);
    char magic[4] = {};
    in->read(magic, 4);
    const std::string m(magic, static_cast<size_t>(in->gcount()));
    in->clear();
    in->seekg(0);
    if (m == "BXC1")
      *out = new spq_index{spq::read_bxc(*in)};
    else if (m == "SEP1")
      *out = new spq_index{spq::read_sep(*in)};
    else
      *out = new spq_index{spq::BaxterIndex::build(spq::read_permutation(*in), block_len)};
  });
}

spq_status spq_index_save(const spq_index* x, const char* path, int include_aux) {
  if (!x || !path) return null_arg();
  return guard([&] {
    with_out(path, [&](std::ostream& o) {
      if (auto* b = std::get_if<spq::BaxterIndex>(&x->x))
        spq::write_bxc(o, *b, include_aux != 0);
      else
        spq::write_sep(o, std::get<spq::SeparableIndex>(x->x));
    });
  });
}

spq_kind spq_index_kind(const spq_index* x) {
  return x && std::holds_alternative<spq::SeparableIndex>(x->x) ? SPQ_KIND_SEPARABLE : SPQ_KIND_BAXTER;
}

uint64_t spq_index_size(const spq_index* x) {
  return x ? x->visit([](const auto& i) -> uint64_t { return i.size(); }) : 0;
}

uint32_t spq_index_block_len(const spq_index* x) {
  if (!x) return 0;
  if (auto* b = std::get_if<spq::BaxterIndex>(&x->x)) return b->ell();
  return std::get<spq::SeparableIndex>(x->x).ell1();
}

spq_status spq_index_query(const spq_index* x, spq_query q, uint64_t a, uint64_t b, uint64_t* out) {
  if (!x || !out) return null_arg();
  if (q < SPQ_Q_PI || q > SPQ_Q_NLV) return set_error(SPQ_BAD_ARGUMENT, "unknown query");
  return guard([&] { *out = x->visit([&](const auto& i) { return i.query(static_cast<spq::Query>(q), a, b); }); });
}

spq_status spq_index_space(const spq_index* x, uint64_t* core_bits, uint64_t* aux_bits) {
  if (!x || !core_bits || !aux_bits) return null_arg();
  if (auto* b = std::get_if<spq::BaxterIndex>(&x->x)) {
    const spq::SpaceReport r = b->space_report();
    *core_bits = r.core_bits;
    *aux_bits = r.aux_bits;
  } else {
    // The separable index has no separate payload; all of it counts as core.
    *core_bits = std::get<spq::SeparableIndex>(x->x).space_bits();
    *aux_bits = 0;
  }
  return SPQ_OK;
}

spq_status spq_index_to_perm(const spq_index* x, spq_perm** out) {
  if (!x || !out) return null_arg();
  return guard([&] { *out = new spq_perm{x->visit([](const auto& i) { return i.to_permutation(); })}; });
}

void spq_index_free(spq_index* x) { delete x; }

spq_status spq_floorplan_read(const char* path, spq_floorplan** out) {
  if (!path || !out) return null_arg();
  return guard([&] {
    auto in = open_in(path);
    *out = new spq_floorplan{adopt(spq::read_floorplan(*in))};
  });
}

spq_status spq_floorplan_random_slicing(uint64_t n, uint64_t seed, spq_floorplan** out) {
  if (!out) return null_arg();
  if (n == 0 || n > UINT32_MAX) return set_error(SPQ_OUT_OF_RANGE, "size must lie in [1, 2^32)");
  return guard([&] { *out = new spq_floorplan{adopt(spq::random_slicing(static_cast<uint32_t>(n), seed))}; });
}

spq_status spq_floorplan_write(const spq_floorplan* f, const char* path) {
  if (!f || !path) return null_arg();
  return guard([&] { with_out(path, [&](std::ostream& o) { spq::write_floorplan(o, f->f); }); });
}

uint64_t spq_floorplan_size(const spq_floorplan* f) { return f ? f->f.size() : 0; }

spq_status spq_floorplan_to_perm(const spq_floorplan* f, spq_perm** out) {
  if (!f || !out) return null_arg();
  return guard([&] { *out = new spq_perm{spq::to_baxter(f->f)}; });
}

spq_status spq_floorplan_block_id(const spq_floorplan* f, uint64_t pos, uint32_t* id) {
  if (!f || !id) return null_arg();
  if (pos < 1 || pos > f->f.size()) return set_error(SPQ_OUT_OF_RANGE, "position outside [1, n]");
  *id = f->f.blocks[pos - 1].id;
  return SPQ_OK;
}

spq_status spq_floorplan_position(const spq_floorplan* f, uint32_t id, uint64_t* pos) {
  if (!f || !pos) return null_arg();
  for (uint64_t k = 0; k < f->f.size(); ++k)
    if (f->f.blocks[k].id == id) {
      *pos = k + 1;
      return SPQ_OK;
    }
  return set_error(SPQ_NOT_FOUND, "no block with id " + std::to_string(id));
}

void spq_floorplan_free(spq_floorplan* f) { delete f; }

spq_status spq_fp_adjacent(const spq_index* x, spq_side s, uint64_t i, uint64_t j, int* out) {
  if (!x || !out) return null_arg();
  return guard([&] {
    *out = x->visit([&](const auto& idx) { return spq::FloorplanView::over(idx).adjacent(static_cast<spq::Side>(s), i, j); });
  });
}

spq_status spq_fp_adjacent_set(const spq_index* x, spq_side s, uint64_t i, uint64_t* out, uint64_t cap,
                               uint64_t* count) {
  if (!x) return null_arg();
  std::vector<uint64_t> v;
  const spq_status st = guard([&] {
    v = x->visit([&](const auto& idx) { return spq::FloorplanView::over(idx).adjacent_set(static_cast<spq::Side>(s), i); });
  });
  return st != SPQ_OK ? st : copy_out(v, out, cap, count);
}

spq_status spq_bp_edges_adjacent(const spq_index* x, uint64_t i, uint64_t j, int* out) {
  if (!x || !out) return null_arg();
  return guard([&] {
    *out = x->visit([&](const auto& idx) { return spq::BipolarView::over(idx).edges_adjacent(i, j); });
  });
}

spq_status spq_bp_edge_neighbors(const spq_index* x, uint64_t i, uint64_t* out, uint64_t cap, uint64_t* count) {
  if (!x) return null_arg();
  std::vector<uint64_t> v;
  const spq_status st = guard([&] {
    v = x->visit([&](const auto& idx) { return spq::BipolarView::over(idx).edge_neighbors(i); });
  });
  return st != SPQ_OK ? st : copy_out(v, out, cap, count);
}

spq_status spq_bp_dump(const spq_perm* p, const char* path) {
  if (!p || !path) return null_arg();
  return guard([&] {
    const spq::EmbeddedBipolarGraph g = spq::build_embedded(p->p);
    with_out(path, [&](std::ostream& o) { spq::write_graph_dump(o, g); });
  });
}

spq_status spq_selftest(uint32_t max_n, uint64_t random_n, spq_line_fn fn, void* user, uint64_t* passed,
                        uint64_t* failed) {
  if (!passed || !failed) return null_arg();
  if (random_n > UINT32_MAX) return set_error(SPQ_OUT_OF_RANGE, "random size must be below 2^32");
  return guard([&] {
    std::function<void(const std::string&)> line;
    if (fn) line = [&](const std::string& s) { fn(s.c_str(), user); };
    const spq::SelftestCounts c = spq::run_selftest(max_n, random_n, line);
    *passed = c.passed;
    *failed = c.failed;
  });
}

}  // extern "C"
