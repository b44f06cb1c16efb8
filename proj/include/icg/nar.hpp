// Nontrivial additive relations (NARs) on indexed value vectors.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "icg/checked.hpp"

namespace icg {

/// Longest vector accepted by the subset-sum searches.
inline constexpr std::size_t kMaxNarLength = 30;

/// sum_{i in s1} v[i] = sum_{i in s2} v[i] over an indexed vector.
/// Index lists are ascending and duplicate-free.
struct AdditiveRelation {
  std::vector<std::size_t> s1;
  std::vector<std::size_t> s2;

  bool nontrivial() const { return s1 != s2; }
  bool disjoint() const;

  /// Exact balance check (modulus 0 means plain integers).
  bool balanced(std::span<const Int> values, Int modulus = 0) const;

  /// One-sided view: +1 for s1-only, -1 for s2-only, 0 otherwise.
  std::vector<int> coefficients(std::size_t length) const;

  friend bool operator==(const AdditiveRelation&, const AdditiveRelation&) = default;
};

/// Decides whether a NAR exists and returns its reduction if so. Values must
/// be nonnegative; length <= kMaxNarLength.
std::optional<AdditiveRelation> has_nar(std::span<const Int> values);

/// Same, with sums compared modulo `modulus` (>= 2). A value congruent to 0
/// yields ({i}, {}).
std::optional<AdditiveRelation> has_nar_mod(std::span<const Int> values, Int modulus);

/// Drops the shared indices. Rejects trivial relations.
AdditiveRelation reduce(const AdditiveRelation& rel);

/// Strictly increasing with every term above the sum of its predecessors.
bool is_super_sequence(std::span<const Int> values);

/// True iff the multiset can be ordered into a super sequence.
bool super_sequence_orderable(std::span<const Int> values);

/// Multiset of all k-wise products, first factor outermost. At most 4 factors
/// and 10^4 products.
std::vector<Int> tensor_multiset(std::span<const std::vector<Int>> factors);

}  // namespace icg
