#ifndef SPQ_SPQ_H
#define SPQ_SPQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPQ_API __declspec(dllexport)
#else
#define SPQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure spq_last_error() holds a one-line diagnostic for the
   calling thread until its next failing call. Handles are opaque and owned by the caller. */
typedef enum spq_status {
  SPQ_OK = 0,
  SPQ_NOT_BAXTER = 1,
  SPQ_NOT_SEPARABLE = 2,
  SPQ_NOT_ALTERNATING = 3,
  SPQ_NOT_FOUND = 4,
  SPQ_OUT_OF_RANGE = 5,
  SPQ_UNDEFINED = 6,
  SPQ_INTEGRITY = 7,
  SPQ_PARSE = 8,
  SPQ_FORMAT = 9,
  SPQ_MICRO_TOO_LARGE = 10,
  SPQ_CAP_EXCEEDED = 11,
  SPQ_IO = 12,
  SPQ_BAD_ARGUMENT = 13,
  SPQ_BUFFER_TOO_SMALL = 14,
  SPQ_NO_MEMORY = 15,
  SPQ_INTERNAL = 16
} spq_status;

typedef enum spq_query {
  SPQ_Q_PI = 0,
  SPQ_Q_INV,
  SPQ_Q_RMIN,
  SPQ_Q_RMAX,
  SPQ_Q_PSV,
  SPQ_Q_NSV,
  SPQ_Q_PLV,
  SPQ_Q_NLV
} spq_query;

typedef enum spq_kind { SPQ_KIND_BAXTER = 1, SPQ_KIND_SEPARABLE = 2 } spq_kind;
typedef enum spq_side { SPQ_SIDE_ABOVE = 0, SPQ_SIDE_BELOW, SPQ_SIDE_LEFT, SPQ_SIDE_RIGHT } spq_side;

typedef struct spq_perm spq_perm;
typedef struct spq_index spq_index;
typedef struct spq_floorplan spq_floorplan;

SPQ_API const char* spq_last_error(void);
SPQ_API const char* spq_status_name(spq_status s);
/* Parses "pi", "inv", "rmin", ... and "above", "below", "left", "right". */
SPQ_API spq_status spq_parse_query(const char* name, spq_query* out);
SPQ_API spq_status spq_parse_side(const char* name, spq_side* out);
/* Queries taking a second argument: rmin and rmax. */
SPQ_API int spq_query_arity(spq_query q);

/* Permutations. Paths of "-" mean standard input or output. */
SPQ_API spq_status spq_perm_from_array(const uint32_t* values, uint64_t n, spq_perm** out);
SPQ_API spq_status spq_perm_read(const char* path, spq_perm** out);
SPQ_API spq_status spq_perm_write(const spq_perm* p, const char* path);
/* kind 0 gives any permutation; generators are seeded and deterministic, not uniform. */
SPQ_API spq_status spq_perm_random(int kind, uint64_t n, uint64_t seed, spq_perm** out);
SPQ_API uint64_t spq_perm_size(const spq_perm* p);
SPQ_API spq_status spq_perm_values(const spq_perm* p, uint32_t* out, uint64_t cap);
SPQ_API spq_status spq_perm_classify(const spq_perm* p, int* baxter, int* separable, int* alternating);
SPQ_API void spq_perm_free(spq_perm* p);

/* Indexes. block_len is the Baxter sampling length, a power of two of at least 64. */
SPQ_API spq_status spq_index_build_baxter(const spq_perm* p, uint32_t block_len, int alternating, spq_index** out);
SPQ_API spq_status spq_index_build_separable(const spq_perm* p, uint32_t ell1, uint32_t ell2, spq_index** out);
/* Reads BXC1 or SEP1 by magic. Anything else is parsed as permutation text and indexed as a
   Baxter permutation with the given block_len. */
SPQ_API spq_status spq_index_open(const char* path, uint32_t block_len, spq_index** out);
SPQ_API spq_status spq_index_save(const spq_index* x, const char* path, int include_aux);
SPQ_API spq_kind spq_index_kind(const spq_index* x);
SPQ_API uint64_t spq_index_size(const spq_index* x);
SPQ_API uint32_t spq_index_block_len(const spq_index* x);
/* b is ignored unless the query takes two arguments. Absent neighbours are 0 or n+1. */
SPQ_API spq_status spq_index_query(const spq_index* x, spq_query q, uint64_t a, uint64_t b, uint64_t* out);
SPQ_API spq_status spq_index_space(const spq_index* x, uint64_t* core_bits, uint64_t* aux_bits);
SPQ_API spq_status spq_index_to_perm(const spq_index* x, spq_perm** out);
SPQ_API void spq_index_free(spq_index* x);

/* Floorplans in the text format: "n width height", then one "id x1 y1 x2 y2" line per block. */
SPQ_API spq_status spq_floorplan_read(const char* path, spq_floorplan** out);
SPQ_API spq_status spq_floorplan_random_slicing(uint64_t n, uint64_t seed, spq_floorplan** out);
SPQ_API spq_status spq_floorplan_write(const spq_floorplan* f, const char* path);
SPQ_API uint64_t spq_floorplan_size(const spq_floorplan* f);
SPQ_API spq_status spq_floorplan_to_perm(const spq_floorplan* f, spq_perm** out);
/* Id of the block at bottom-left position pos, and the inverse lookup. */
SPQ_API spq_status spq_floorplan_block_id(const spq_floorplan* f, uint64_t pos, uint32_t* id);
SPQ_API spq_status spq_floorplan_position(const spq_floorplan* f, uint32_t id, uint64_t* pos);
SPQ_API void spq_floorplan_free(spq_floorplan* f);

/* Floorplan and bipolar queries run on any index of the underlying permutation and name blocks
   and edges by position. Sets use two calls: pass out = NULL to learn *count. */
SPQ_API spq_status spq_fp_adjacent(const spq_index* x, spq_side s, uint64_t i, uint64_t j, int* out);
SPQ_API spq_status spq_fp_adjacent_set(const spq_index* x, spq_side s, uint64_t i, uint64_t* out, uint64_t cap,
                                       uint64_t* count);
SPQ_API spq_status spq_bp_edges_adjacent(const spq_index* x, uint64_t i, uint64_t j, int* out);
SPQ_API spq_status spq_bp_edge_neighbors(const spq_index* x, uint64_t i, uint64_t* out, uint64_t cap,
                                         uint64_t* count);
/* Embedded graph in the dump format, built from the explicit permutation. */
SPQ_API spq_status spq_bp_dump(const spq_perm* p, const char* path);

/* Oracle self-test. Each summary line goes to the callback when one is given. */
typedef void (*spq_line_fn)(const char* line, void* user);
SPQ_API spq_status spq_selftest(uint32_t max_n, uint64_t random_n, spq_line_fn fn, void* user, uint64_t* passed,
                                uint64_t* failed);

#ifdef __cplusplus
}
#endif

#endif
