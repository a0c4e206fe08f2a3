#pragma once

// Little-endian framing shared by the BXC1 and SEP1 containers.

#include <istream>
#include <ostream>
#include <vector>

#include "spq/bits.hpp"
#include "spq/error.hpp"

namespace spq::io {

inline void put_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) fail(Errc::format, "truncated stream");
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline uint8_t get_u8(std::istream& in) {
  char c;
  if (!in.get(c)) fail(Errc::format, "truncated stream");
  return static_cast<uint8_t>(c);
}

// Bit string of `bits` bits, LSB-first, padded with zeros to a whole byte.
inline void put_bits(std::ostream& out, const std::vector<uint64_t>& words, uint64_t bits) {
  for (uint64_t k = 0; k < (bits + 7) / 8; ++k) {
    uint8_t byte = static_cast<uint8_t>(words[k >> 3] >> (8 * (k & 7)));
    if (8 * k + 8 > bits) byte &= static_cast<uint8_t>(low_mask(static_cast<uint32_t>(bits - 8 * k)));
    out.put(static_cast<char>(byte));
  }
}

inline std::vector<uint64_t> get_bits(std::istream& in, uint64_t bits) {
  std::vector<uint64_t> words((bits + 63) / 64 + 2, 0);
  for (uint64_t k = 0; k < (bits + 7) / 8; ++k) words[k >> 3] |= static_cast<uint64_t>(get_u8(in)) << (8 * (k & 7));
  if (bits & 63) words[bits >> 6] &= low_mask(static_cast<uint32_t>(bits & 63));
  return words;
}

// Section: tag byte, u64 byte length, then u64 count, width byte and the packed values.
inline void put_intvector(std::ostream& out, uint8_t tag, const IntVector& v) {
  out.put(static_cast<char>(tag));
  const uint64_t nbytes = 8 + 1 + (v.bit_size() + 7) / 8;
  put_u64(out, nbytes);
  put_u64(out, v.size());
  out.put(static_cast<char>(v.width()));
  put_bits(out, v.words(), v.bit_size());
}

inline IntVector parse_intvector(std::istream& in, uint64_t nbytes) {
  if (nbytes < 9) fail(Errc::format, "short section");
  const uint64_t size = get_u64(in);
  const uint32_t width = get_u8(in);
  if (width > 64 || (size * width + 7) / 8 != nbytes - 9) fail(Errc::format, "section length mismatch");
  if (width == 0 && size >= (1ull << 40)) fail(Errc::format, "section count out of range");
  const auto words = get_bits(in, size * width);
  IntVector v(size, width);
  if (width == 0) return v;
  for (uint64_t i = 0; i < size; ++i) v.set(i, width ? read64(words.data(), i * width) & low_mask(width) : 0);
  return v;
}

}  // namespace spq::io
