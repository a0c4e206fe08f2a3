#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spq/perm.hpp"

namespace spq::testing {

// Random balanced parenthesis string with m pairs (true = open).
inline std::vector<bool> random_bp(uint64_t m, std::mt19937_64& rng) {
  std::vector<bool> out;
  out.reserve(2 * m);
  uint64_t opens = m, depth = 0;
  while (out.size() < 2 * m) {
    const bool open = opens > 0 && (depth == 0 || (rng() % 2));
    out.push_back(open);
    if (open) {
      --opens;
      ++depth;
    } else {
      --depth;
    }
  }
  return out;
}

// Matching partner of every position, 1-based.
inline std::vector<uint64_t> stack_match(const std::vector<bool>& bp) {
  std::vector<uint64_t> m(bp.size() + 1, 0), st;
  for (uint64_t i = 1; i <= bp.size(); ++i) {
    if (bp[i - 1]) {
      st.push_back(i);
    } else {
      m[i] = st.back();
      m[st.back()] = i;
      st.pop_back();
    }
  }
  return m;
}

// Dummy-augmented BP of a Cartesian tree: leaves get two "()" children, one-child nodes one.
inline std::vector<bool> augmented_bp(const CartesianTree& t) {
  std::vector<bool> out;
  struct Frame {
    const CartesianNode* x;
    int phase;
  };
  std::vector<Frame> st{{t.root, 0}};
  while (!st.empty()) {
    Frame& f = st.back();
    if (f.phase == 0) {
      out.push_back(true);
      f.phase = 1;
      if (f.x->left) {
        st.push_back({f.x->left, 0});
      } else {
        out.push_back(true);
        out.push_back(false);
      }
    } else if (f.phase == 1) {
      f.phase = 2;
      if (f.x->right) {
        st.push_back({f.x->right, 0});
      } else {
        out.push_back(true);
        out.push_back(false);
      }
    } else {
      out.push_back(false);
      st.pop_back();
    }
  }
  return out;
}

}  // namespace spq::testing
