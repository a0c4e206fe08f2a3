#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "spq/error.hpp"

namespace spq {

// 1-based bijection on [n]. values()[0] is pi(1).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<uint32_t> values);

  static Permutation identity(uint32_t n);

  uint32_t size() const { return static_cast<uint32_t>(v_.size()); }
  uint32_t operator()(uint32_t i) const { return v_[i - 1]; }
  const std::vector<uint32_t>& values() const { return v_; }
  std::vector<uint32_t> inverse() const;

  bool operator==(const Permutation& o) const { return v_ == o.v_; }

 private:
  std::vector<uint32_t> v_;
};

struct PermClass {
  bool is_baxter = false;
  bool is_separable = false;
  bool is_alternating = false;
};

enum class PermKind { any, baxter, separable };

// Direct pattern scans; this is the trusted oracle.
bool is_baxter(const std::vector<uint32_t>& v);
bool is_separable(const std::vector<uint32_t>& v);
bool is_alternating(const std::vector<uint32_t>& v);
PermClass classify(const Permutation& p);

// O(n log n) Baxter test and linear separability test, cross-checked against the scans in
// tests. classify uses these.
bool is_baxter_fast(const std::vector<uint32_t>& v);
bool is_separable_fast(const std::vector<uint32_t>& v);

struct CartesianNode {
  uint32_t label = 0;
  uint32_t inorder = 0;
  CartesianNode* left = nullptr;
  CartesianNode* right = nullptr;
  CartesianNode* parent = nullptr;
};

// Explicit Cartesian tree; nodes[i-1] is the node with inorder i.
struct CartesianTree {
  std::vector<CartesianNode> nodes;
  CartesianNode* root = nullptr;

  const CartesianNode& at_inorder(uint32_t i) const { return nodes[i - 1]; }
  std::vector<uint32_t> inorder_labels() const;
};

std::unique_ptr<CartesianTree> build_min_cartesian(const Permutation& p);
std::unique_ptr<CartesianTree> build_max_cartesian(const Permutation& p);

enum class Query { pi, inv, rmin, rmax, psv, nsv, plv, nlv };

const char* query_name(Query q);
bool parse_query(const std::string& s, Query& out);

// Linear-scan answers. PSV/PLV give 0 and NSV/NLV give n+1 when absent.
namespace oracle {
uint32_t pi(const Permutation& p, uint32_t i);
uint32_t pi_inverse(const Permutation& p, uint32_t j);
uint32_t rmin(const Permutation& p, uint32_t i, uint32_t j);
uint32_t rmax(const Permutation& p, uint32_t i, uint32_t j);
uint32_t psv(const Permutation& p, uint32_t i);
uint32_t nsv(const Permutation& p, uint32_t i);
uint32_t plv(const Permutation& p, uint32_t i);
uint32_t nlv(const Permutation& p, uint32_t i);
uint32_t query(const Permutation& p, Query q, uint32_t a, uint32_t b = 0);
}  // namespace oracle

constexpr uint32_t kEnumerationCap = 9;

// Lexicographic order. Throws cap_exceeded above `cap`.
void enumerate_class(uint32_t n, PermKind kind, const std::function<void(const Permutation&)>& fn,
                     uint32_t cap = kEnumerationCap);
uint64_t count_class(uint32_t n, PermKind kind, uint32_t cap = kEnumerationCap);

// Insertion with validation. Class membership only; not uniform.
Permutation random_baxter(uint32_t n, uint64_t seed);
// Random valid two-stack code decoded to a permutation; linear time, not uniform.
Permutation random_baxter_walk(uint32_t n, uint64_t seed);
// Random alternating plus/minus recursive splits.
Permutation random_separable(uint32_t n, uint64_t seed);

Permutation read_permutation(std::istream& in);
void write_permutation(std::ostream& out, const Permutation& p);

}  // namespace spq
