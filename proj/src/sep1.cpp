#include <istream>
#include <map>
#include <ostream>

#include "spq/separable.hpp"
#include "stream_io.hpp"

namespace spq {

namespace {

using namespace io;

constexpr char kMagic[4] = {'S', 'E', 'P', '1'};
enum Tag : uint8_t {
  micro_codes = 1,
  micro_holes = 2,
  micro_pos = 3,
  micro_val = 4,
  micro_gap = 5,
  micro_owner = 6,
  mini_pos = 7,
  mini_pos_split = 8,
  mini_val = 9,
  mini_val_split = 10,
  mini_hole = 11,
  mini_leaves = 12,
  last_tag = mini_leaves
};

template <class Rec, class Get>
IntVector column(const std::vector<Rec>& recs, Get&& get) {
  uint64_t mx = 0;
  for (const Rec& r : recs) mx = std::max<uint64_t>(mx, get(r));
  IntVector v(recs.size(), bits_for(mx));
  for (size_t i = 0; i < recs.size(); ++i) v.set(i, get(recs[i]));
  return v;
}

}  // namespace

void write_sep(std::ostream& out, const SeparableIndex& idx) {
  using Mi = SeparableIndex::MiniRec;
  using Mu = SeparableIndex::MicroRec;
  out.write(kMagic, 4);
  put_u64(out, idx.n_);
  put_u64(out, idx.ell1());
  put_u64(out, idx.ell2());
  const auto& u = idx.micro_;
  const auto& m = idx.mini_;
  put_intvector(out, micro_codes, column(u, [](const Mu& r) { return r.code; }));
  put_intvector(out, micro_holes, column(u, [](const Mu& r) { return r.h; }));
  put_intvector(out, micro_pos, column(u, [](const Mu& r) { return r.s; }));
  put_intvector(out, micro_val, column(u, [](const Mu& r) { return r.a; }));
  put_intvector(out, micro_gap, column(u, [](const Mu& r) { return r.g; }));
  put_intvector(out, micro_owner, column(u, [](const Mu& r) { return r.mini; }));
  put_intvector(out, mini_pos, column(m, [](const Mi& r) { return r.plo; }));
  put_intvector(out, mini_pos_split, column(m, [](const Mi& r) { return r.clp; }));
  put_intvector(out, mini_val, column(m, [](const Mi& r) { return r.vlo; }));
  put_intvector(out, mini_val_split, column(m, [](const Mi& r) { return r.clv; }));
  put_intvector(out, mini_hole, column(m, [](const Mi& r) { return r.bsize; }));
  put_intvector(out, mini_leaves, column(m, [](const Mi& r) { return r.leaves; }));
  if (!out) fail(Errc::format, "write failed");
}

SeparableIndex read_sep(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) fail(Errc::format, "not a SEP1 stream");
  const uint64_t n = get_u64(in), ell1 = get_u64(in), ell2 = get_u64(in);
  if (n == 0 || n >= (1ull << 32)) fail(Errc::format, "SEP1 size out of range");
  if (ell2 < 3 || ell1 < ell2 || ell1 >= (1ull << 31)) fail(Errc::format, "SEP1 cover parameters invalid");
  std::map<uint8_t, IntVector> sec;
  while (in.peek() != std::char_traits<char>::eof()) {
    const uint8_t tag = get_u8(in);
    const uint64_t nbytes = get_u64(in);
    if (tag < micro_codes || tag > last_tag) {
      in.ignore(static_cast<std::streamsize>(nbytes));
      if (!in) fail(Errc::format, "truncated section");
      continue;
    }
    sec[tag] = parse_intvector(in, nbytes);
  }
  for (uint8_t tag = micro_codes; tag <= last_tag; ++tag)
    if (!sec.count(tag)) fail(Errc::format, "SEP1 section missing");
  const uint64_t nu = sec[micro_codes].size(), nm = sec[mini_pos].size();
  // Parts own disjoint non-root members or are a bare root, so there are fewer than 2n of them.
  if (nu > 2 * n + 1 || nm > 2 * n + 1) fail(Errc::format, "SEP1 record count out of range");
  for (uint8_t tag = micro_codes; tag <= micro_owner; ++tag)
    if (sec[tag].size() != nu) fail(Errc::format, "SEP1 micro sections disagree in length");
  for (uint8_t tag = mini_pos; tag <= last_tag; ++tag)
    if (sec[tag].size() != nm) fail(Errc::format, "SEP1 mini sections disagree in length");

  // Replay every item through the stored skeleton, then rebuild and compare.
  const MicroTable& tab = MicroTable::instance();
  std::vector<uint32_t> vals(n, 0);
  for (uint64_t k = 0; k < nu; ++k) {
    const uint64_t code = sec[micro_codes].get(k), h = sec[micro_holes].get(k), mk = sec[micro_owner].get(k);
    if (code >= tab.entries() || mk >= nm) fail(Errc::integrity, "SEP1 micro record out of range");
    const uint64_t mm = tab.size(static_cast<uint32_t>(code));
    if (h > mm) fail(Errc::integrity, "SEP1 hole index out of range");
    const uint64_t s = sec[micro_pos].get(k), a = sec[micro_val].get(k), g = sec[micro_gap].get(k);
    const uint64_t plo = sec[mini_pos].get(mk), clp = sec[mini_pos_split].get(mk), vlo = sec[mini_val].get(mk),
                   clv = sec[mini_val_split].get(mk), bs = sec[mini_hole].get(mk), lv = sec[mini_leaves].get(mk);
    const uint64_t ph = h ? tab.rho(static_cast<uint32_t>(code), static_cast<uint32_t>(h)) : 0;
    for (uint64_t q = 1; q <= mm; ++q) {
      if (q == h) continue;
      const uint64_t v = tab.rho(static_cast<uint32_t>(code), static_cast<uint32_t>(q));
      const uint64_t tl = (h == 0 || q < h) ? s + q - 1 : s + q - 2 + g;
      const uint64_t r = (h == 0 || v < ph) ? a + v - 1 : a + v - 2 + g;
      if (tl >= lv || r >= lv) fail(Errc::integrity, "SEP1 item outside its mini");
      const uint64_t pos = plo + tl + (tl < clp ? 0 : bs), val = vlo + r + (r < clv ? 0 : bs);
      if (pos < 1 || pos > n || val < 1 || val > n || vals[pos - 1]) fail(Errc::integrity, "SEP1 items collide");
      vals[pos - 1] = static_cast<uint32_t>(val);
    }
  }
  for (uint32_t v : vals)
    if (v == 0) fail(Errc::integrity, "SEP1 skeleton leaves positions unassigned");
  Permutation p;
  try {
    p = Permutation(std::move(vals));
  } catch (const Error&) {
    fail(Errc::integrity, "SEP1 skeleton does not describe a permutation");
  }
  SeparableIndex idx = SeparableIndex::build(p, static_cast<uint32_t>(ell1), static_cast<uint32_t>(ell2));
  using Mi = SeparableIndex::MiniRec;
  using Mu = SeparableIndex::MicroRec;
  const auto& u = idx.micro_;
  const auto& m = idx.mini_;
  const IntVector rebuilt[] = {
      column(u, [](const Mu& r) { return r.code; }),    column(u, [](const Mu& r) { return r.h; }),
      column(u, [](const Mu& r) { return r.s; }),       column(u, [](const Mu& r) { return r.a; }),
      column(u, [](const Mu& r) { return r.g; }),       column(u, [](const Mu& r) { return r.mini; }),
      column(m, [](const Mi& r) { return r.plo; }),     column(m, [](const Mi& r) { return r.clp; }),
      column(m, [](const Mi& r) { return r.vlo; }),     column(m, [](const Mi& r) { return r.clv; }),
      column(m, [](const Mi& r) { return r.bsize; }),   column(m, [](const Mi& r) { return r.leaves; }),
  };
  for (uint8_t tag = micro_codes; tag <= last_tag; ++tag)
    if (!(rebuilt[tag - 1] == sec[tag])) fail(Errc::integrity, "SEP1 sections do not match the rebuilt cover");
  return idx;
}

}  // namespace spq
