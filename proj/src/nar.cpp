#include "icg/nar.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>

namespace icg {

bool AdditiveRelation::disjoint() const {
  if (s1.empty() || s2.empty()) return false;
  std::vector<std::size_t> shared;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(shared));
  return shared.empty();
}

bool AdditiveRelation::balanced(std::span<const Int> values, Int modulus) const {
  auto side_sum = [&](const std::vector<std::size_t>& side) {
    Int total = 0;
    for (std::size_t i : side) total = checked_add(total, values[i]);
    return total;
  };
  for (const auto* side : {&s1, &s2}) {
    for (std::size_t i : *side) {
      if (i >= values.size()) return false;
    }
  }
  Int diff = checked_sub(side_sum(s1), side_sum(s2));
  return modulus == 0 ? diff == 0 : diff % modulus == 0;
}

std::vector<int> AdditiveRelation::coefficients(std::size_t length) const {
  std::vector<int> out(length, 0);
  for (std::size_t i : s1) out.at(i) += 1;
  for (std::size_t i : s2) out.at(i) -= 1;
  return out;
}

AdditiveRelation reduce(const AdditiveRelation& rel) {
  if (!rel.nontrivial()) throw InvalidInput("reduce: relation is trivial (S1 = S2)");
  AdditiveRelation out;
  std::set_difference(rel.s1.begin(), rel.s1.end(), rel.s2.begin(), rel.s2.end(), std::back_inserter(out.s1));
  std::set_difference(rel.s2.begin(), rel.s2.end(), rel.s1.begin(), rel.s1.end(), std::back_inserter(out.s2));
  return out;
}

namespace {

constexpr Int kDenseLimit = Int{1} << 24;
constexpr std::size_t kSparseLimit = std::size_t{1} << 24;
constexpr std::uint32_t kEmpty = UINT32_MAX;

// Reachable subset sums, each with the first subset (as a bitmask) that hit it.
class SumTable {
 public:
  explicit SumTable(Int domain) : dense_(domain <= kDenseLimit) {
    if (dense_) slots_.assign(static_cast<std::size_t>(domain), kEmpty);
  }

  std::optional<std::uint32_t> find(Int sum) const {
    if (dense_) {
      std::uint32_t m = slots_[static_cast<std::size_t>(sum)];
      return m == kEmpty ? std::nullopt : std::optional<std::uint32_t>(m);
    }
    auto it = sparse_.find(key(sum));
    return it == sparse_.end() ? std::nullopt : std::optional<std::uint32_t>(it->second);
  }

  void insert(Int sum, std::uint32_t mask) {
    if (dense_) {
      slots_[static_cast<std::size_t>(sum)] = mask;
    } else {
      if (sparse_.size() >= kSparseLimit) throw GuardExceeded("subset-sum table exceeds 2^24 entries");
      sparse_.emplace(key(sum), mask);
    }
  }

 private:
  // Sparse sums are bounded by 30 values of < 2^63 each, so they fit 64+5 bits;
  // the table is only used when the sum also fits below 2^64.
  static std::uint64_t key(Int sum) { return static_cast<std::uint64_t>(sum); }

  bool dense_;
  std::vector<std::uint32_t> slots_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
};

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 32; ++i) {
    if ((mask >> i) & 1u) out.push_back(i);
  }
  return out;
}

// Items are added in index order. For item i, pre-existing sums are scanned in
// descending order; the first s with s + v[i] already reachable is the
// collision, giving (subset(s) + {i}) vs subset(s + v[i]).
std::optional<AdditiveRelation> first_collision(std::span<const Int> values, Int modulus) {
  if (values.size() > kMaxNarLength) {
    throw GuardExceeded("NAR search limited to " + std::to_string(kMaxNarLength) + " values");
  }
  std::vector<Int> work;
  Int domain = 1;
  for (Int v : values) {
    if (modulus == 0) {
      if (v < 0) throw InvalidInput("NAR search expects nonnegative values");
      work.push_back(v);
      domain = checked_add(domain, v);
    } else {
      Int r = v % modulus;
      work.push_back(r < 0 ? r + modulus : r);
    }
  }
  if (modulus != 0) domain = modulus;
  if (domain > kDenseLimit && domain > static_cast<Int>(UINT64_MAX)) {
    throw GuardExceeded("NAR search: value sum exceeds 2^64");
  }

  SumTable table(domain);
  table.insert(0, 0);
  std::vector<Int> sums{0};  // ascending
  std::vector<Int> shifted, merged;
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto shift = [&](Int s) { return modulus == 0 ? s + work[i] : (s + work[i]) % modulus; };
    for (auto it = sums.rbegin(); it != sums.rend(); ++it) {
      if (auto hit = table.find(shift(*it))) {
        std::uint32_t fresh = *table.find(*it) | (std::uint32_t{1} << i);
        return AdditiveRelation{mask_indices(fresh), mask_indices(*hit)};
      }
    }
    shifted.clear();
    for (Int s : sums) {
      shifted.push_back(shift(s));
      table.insert(shifted.back(), *table.find(s) | (std::uint32_t{1} << i));
    }
    // Modular shifts wrap once, leaving two ascending runs.
    auto wrap = std::is_sorted_until(shifted.begin(), shifted.end());
    std::rotate(shifted.begin(), wrap, shifted.end());
    merged.clear();
    std::merge(sums.begin(), sums.end(), shifted.begin(), shifted.end(), std::back_inserter(merged));
    sums.swap(merged);
  }
  return std::nullopt;
}

}  // namespace

std::optional<AdditiveRelation> has_nar(std::span<const Int> values) {
  auto rel = first_collision(values, 0);
  if (!rel) return std::nullopt;
  return reduce(*rel);
}

std::optional<AdditiveRelation> has_nar_mod(std::span<const Int> values, Int modulus) {
  if (modulus < 2) throw InvalidInput("modulus must be >= 2");
  auto rel = first_collision(values, modulus);
  if (!rel) return std::nullopt;
  return reduce(*rel);
}

bool is_super_sequence(std::span<const Int> values) {
  Int prefix = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= prefix) return false;  // also rejects a leading 0
    prefix = checked_add(prefix, values[i]);
  }
  return true;
}

bool super_sequence_orderable(std::span<const Int> values) {
  std::vector<Int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return is_super_sequence(sorted);
}

std::vector<Int> tensor_multiset(std::span<const std::vector<Int>> factors) {
  if (factors.size() > 4) throw GuardExceeded("tensor_multiset: at most 4 factors");
  std::size_t size = 1;
  for (const auto& f : factors) {
    size *= f.size();
    if (size > 10'000) throw GuardExceeded("tensor_multiset: more than 10^4 products");
  }
  std::vector<Int> out{1};
  for (const auto& f : factors) {
    std::vector<Int> next;
    next.reserve(out.size() * f.size());
    for (Int a : out) {
      for (Int b : f) next.push_back(checked_mul(a, b));
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace icg
