#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "virtperm/point_process.hpp"

namespace virtperm {

using ElementId = int;

// Canonical form: each cycle is rotated so its minimal element comes first,
// and cycles are sorted by that first element.
using CycleDecomposition = std::vector<std::vector<ElementId>>;

// A bijection of a finite set of non-negative element ids onto itself.
//
// Elements are stored sorted; images are kept as indices into that array so
// that whole-permutation operations are linear-time.  All id-based lookups
// are logarithmic.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::vector<ElementId> elements);

  // image[i] is the image of elements[i]; the two arrays must describe a
  // bijection of the element set.
  static Permutation from_image(std::vector<ElementId> elements,
                                const std::vector<ElementId>& image);

  // Cycles must be disjoint; their union is the element set.
  static Permutation from_cycles(const CycleDecomposition& cycles);

  // Text form: one cycle per line, ids separated by single spaces.
  static Permutation parse_cycles(std::string_view text);
  std::string to_cycle_text() const;

  const std::vector<ElementId>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(ElementId x) const;
  ElementId apply(ElementId x) const;

  // Index-based access for hot loops: image_index(i) is the index of the
  // image of elements()[i].
  int image_index(int i) const { return img_[i]; }

  bool operator==(const Permutation& other) const = default;

 private:
  std::vector<ElementId> elems_;  // sorted, unique, non-negative
  std::vector<int> img_;          // img_[i] = index of image of elems_[i]

  int index_of(ElementId x) const;  // -1 when absent
  int require_index(ElementId x) const;
};

CycleDecomposition cycle_decomposition(const Permutation& p);

// Restriction of p to keep: images are rerouted along p's cycles past the
// removed elements.  keep must be a subset of p's elements.
Permutation project(const Permutation& p, std::span<const ElementId> keep);

// p composed with itself k times; k may be negative or zero.
Permutation power(const Permutation& p, long long k);

// g o p o g^{-1}; p and g must act on the same element set.
Permutation conjugate(const Permutation& p, const Permutation& g);

bool same_cycle(const Permutation& p, ElementId x, ElementId y);

// The unique k in {0,...,len-1} with p^k(x) == y where len is the length of
// the cycle through x.  Throws std::domain_error when x and y lie in
// different cycles (distinct from std::invalid_argument for unknown ids) so
// callers can branch on equivalence.
long long shift_count(const Permutation& p, ElementId x, ElementId y);

// Log-probability of p under the Ewens measure with parameter theta on the
// symmetric group over p's elements:
//   theta^(n-1) / ((theta+1)...(theta+N-1)),  n = number of cycles.
// theta == 0 is the limit: probability 1/(N-1)! per single N-cycle, zero
// otherwise.  theta < 0 is rejected.
double ewens_log_pmf(const Permutation& p, double theta);

// Eigenangles of the permutation matrix of p, each taken in (-pi, pi] and
// multiplied by N = |elements|, restricted to [-window, window].  A cycle of
// length l contributes 2*pi*m*N/l for integer -l/2 < m <= l/2; the
// multiplicity at zero is the number of cycles.
PointProcess rescaled_eigenangles(const Permutation& p, double window);

// Rank of p's image sequence in lexicographic order among all permutations
// of its element set (0-based); size must be at most 20.
std::int64_t lexicographic_rank(const Permutation& p);

}  // namespace virtperm
