#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace spq {

struct SelftestCounts {
  uint64_t passed = 0, failed = 0;
};

// Exhaustive oracle comparison for every Baxter and separable permutation up to max_n, plus
// seeded random instances of size random_n and random slicing floorplans. A case is one
// permutation or floorplan; it fails on the first disagreement or exception. One summary line
// per suite goes to `line`.
SelftestCounts run_selftest(uint32_t max_n, uint64_t random_n, const std::function<void(const std::string&)>& line);

}  // namespace spq
