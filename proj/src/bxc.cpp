#include <istream>
#include <ostream>

#include "spq/baxter.hpp"
#include "stream_io.hpp"

namespace spq {

namespace {

using namespace io;

constexpr char kMagic[4] = {'B', 'X', 'C', '1'};
constexpr uint8_t kAlternating = 1, kAux = 2, kLeftDummy = 4, kRightDummy = 8;
enum AuxTag : uint8_t {
  min_labels = 1,
  min_codes = 2,
  min_samples = 3,
  max_labels = 4,
  max_codes = 5,
  min_mid_labels = 6,
  min_mid_codes = 7,
  min_mid_patterns = 8
};

}  // namespace

void write_bxc(std::ostream& out, const BaxterIndex& idx, bool include_aux) {
  const BaxterCode& c = idx.code();
  out.write(kMagic, 4);
  put_u64(out, c.n);
  put_u64(out, idx.ell());
  uint8_t flags = 0;
  if (c.alternating) flags |= kAlternating;
  if (include_aux) flags |= kAux;
  if (c.left_dummy) flags |= kLeftDummy;
  if (c.right_dummy) flags |= kRightDummy;
  out.put(static_cast<char>(flags));
  const uint64_t m = c.steps();
  put_bits(out, c.lr, m);
  if (c.alternating) put_bits(out, c.full, m);
  else put_bits(out, c.E.words(), 2 * m);
  if (include_aux) {
    put_intvector(out, min_labels, idx.min_tree().anchor_labels());
    put_intvector(out, min_codes, idx.min_tree().anchor_codes());
    put_intvector(out, min_samples, idx.min_tree().samples());
    put_intvector(out, max_labels, idx.max_tree().anchor_labels());
    put_intvector(out, max_codes, idx.max_tree().anchor_codes());
    put_intvector(out, min_mid_labels, idx.min_tree().mid_labels());
    put_intvector(out, min_mid_codes, idx.min_tree().mid_codes());
    put_intvector(out, min_mid_patterns, idx.min_tree().mid_patterns());
  }
  if (!out) fail(Errc::format, "write failed");
}

BaxterIndex read_bxc(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) fail(Errc::format, "not a BXC1 stream");
  BaxterCode c;
  c.n = get_u64(in);
  const uint64_t ell = get_u64(in);
  const uint8_t flags = get_u8(in);
  if (c.n == 0 || c.n > (1ull << 32)) fail(Errc::format, "BXC1 size out of range");
  if (ell < 64 || ell > (1ull << 30) || (ell & (ell - 1))) fail(Errc::format, "BXC1 block parameter invalid");
  if (flags & ~(kAlternating | kAux | kLeftDummy | kRightDummy)) fail(Errc::format, "unknown BXC1 flags");
  c.alternating = flags & kAlternating;
  c.left_dummy = flags & kLeftDummy;
  c.right_dummy = flags & kRightDummy;
  if (!c.alternating && (c.left_dummy || c.right_dummy)) fail(Errc::format, "dummy flags without alternating flag");
  if (c.n <= c.dummy_count()) fail(Errc::format, "BXC1 size smaller than its dummies");
  const uint64_t m = c.steps();
  c.lr = get_bits(in, m);
  if (c.alternating) c.full = get_bits(in, m);
  else c.E = PackedQuaternary::from_words(get_bits(in, 2 * m), m, false);
  BaxterIndex idx(std::move(c), static_cast<uint32_t>(ell));
  if (flags & kAux) {
    // Stored auxiliaries must agree with the rebuilt ones; unknown tags are skipped.
    while (in.peek() != std::char_traits<char>::eof()) {
      const uint8_t tag = get_u8(in);
      const uint64_t nbytes = get_u64(in);
      const IntVector* want = nullptr;
      switch (tag) {
        case min_labels: want = &idx.min_tree().anchor_labels(); break;
        case min_codes: want = &idx.min_tree().anchor_codes(); break;
        case min_samples: want = &idx.min_tree().samples(); break;
        case max_labels: want = &idx.max_tree().anchor_labels(); break;
        case max_codes: want = &idx.max_tree().anchor_codes(); break;
        case min_mid_labels: want = &idx.min_tree().mid_labels(); break;
        case min_mid_codes: want = &idx.min_tree().mid_codes(); break;
        case min_mid_patterns: want = &idx.min_tree().mid_patterns(); break;
        default: break;
      }
      if (!want) {
        in.ignore(static_cast<std::streamsize>(nbytes));
        if (!in) fail(Errc::format, "truncated aux section");
        continue;
      }
      if (!(parse_intvector(in, nbytes) == *want)) fail(Errc::integrity, "stored auxiliary data does not match the code");
    }
  }
  return idx;
}

}  // namespace spq
