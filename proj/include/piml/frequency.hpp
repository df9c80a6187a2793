#pragma once
// Frequency lattice enumeration.
//
// Plane-wave modes on the periodic box are indexed by integer frequency
// vectors k.  A single global ordering (non-decreasing l1 norm, ties broken
// lexicographically) fixes what "the first n modes" means everywhere:
// truncation sets, eigenvalue indexing and file layouts all refer to it.
//
// In one dimension the sequence runs 0, -1, 1, -2, 2, ...

#include <cstdint>
#include <vector>

namespace piml {

using Frequency = std::vector<std::int32_t>;

int norm1(const Frequency& k);
Frequency negate(const Frequency& k);

class FrequencyOrdering {
 public:
  explicit FrequencyOrdering(int d);

  // j-th frequency (0-based).
  Frequency at(std::size_t j) const;

  // First `count` frequencies in order.
  std::vector<Frequency> prefix(std::size_t count) const;

  // Strict "comes before" predicate of the global ordering.
  static bool before(const Frequency& a, const Frequency& b);

  int dimension() const { return d_; }

 private:
  int d_;
};

// Convenience wrapper used throughout: j-th frequency in dimension d.
Frequency index_map(std::size_t j, int d);

// All multi-indices alpha in N^d with |alpha|_1 <= s, in lexicographic
// order.  Shared by the Sobolev weight, operator symbols and weak-form
// assembly.
std::vector<std::vector<int>> multi_indices_up_to(int d, int s);

}  // namespace piml
