// Compact spectral matrix M(N) of integral circulant graphs and exact spectra.
//
// Rows and columns of M(N) share the index set I(N) = prod {0..n_i}, ordered
// lexicographically. As a column label, (m_1..m_r) stands for the divisor
// d = prod p_i^(n_i - m_i), i.e. the basic symbol G_N(d); (0..0) is d = N and
// never belongs to a symbol. As a row label it stands for the residues t with
// p_i^(m_i) exactly dividing t (capped at n_i, so t = 0 is row (n_1..n_r)).

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icg/checked.hpp"
#include "icg/numtheory.hpp"

namespace icg {

struct ExponentIndex {
  std::vector<int> exponents;

  /// "(2,1)" style label.
  std::string label() const;

  friend auto operator<=>(const ExponentIndex&, const ExponentIndex&) = default;
};

/// All of I(N) in lexicographic order.
std::vector<ExponentIndex> exponent_indices(const PrimeFactorization& f);

/// Position of `m` in lexicographic order (mixed radix, last coordinate fastest).
std::size_t index_position(const PrimeFactorization& f, const ExponentIndex& m);

/// Column label of divisor d, and back.
ExponentIndex column_of_divisor(const PrimeFactorization& f, Int d);
Int divisor_of_column(const PrimeFactorization& f, const ExponentIndex& column);

/// Row label of residue t (0 <= t < N).
ExponentIndex row_of_residue(const PrimeFactorization& f, Int t);

class CompactMatrix {
 public:
  const PrimeFactorization& factorization() const { return factorization_; }
  Int order() const { return factorization_.value(); }
  std::size_t size() const { return index_.size(); }
  const std::vector<ExponentIndex>& index() const { return index_; }

  Int entry(std::size_t row, std::size_t col) const { return entries_[row * index_.size() + col]; }
  Int entry(const ExponentIndex& row, const ExponentIndex& col) const;
  Int row_multiplicity(std::size_t row) const { return row_mult_[row]; }
  const std::vector<Int>& row_multiplicities() const { return row_mult_; }

  friend bool operator==(const CompactMatrix&, const CompactMatrix&) = default;

 private:
  friend CompactMatrix compact_prime_power(Int p, int n);
  friend CompactMatrix compact_matrix(const PrimeFactorization& f);

  PrimeFactorization factorization_;
  std::vector<ExponentIndex> index_;
  std::vector<Int> entries_;  // row-major, size() x size()
  std::vector<Int> row_mult_;
};

/// An integral symbol: a set of column positions of M(N), never position 0.
class SymbolSet {
 public:
  SymbolSet() = default;

  /// Columns for the divisor set D. Every d must be a proper divisor of N.
  static SymbolSet from_divisors(const PrimeFactorization& f, std::span<const Int> divisors);
  static SymbolSet from_columns(const PrimeFactorization& f, std::vector<std::size_t> columns);
  /// Bit k selects column position k + 1.
  static SymbolSet from_mask(std::uint64_t mask);

  const std::vector<std::size_t>& columns() const { return columns_; }
  bool contains(std::size_t column) const;
  bool empty() const { return columns_.empty(); }
  std::uint64_t mask() const;
  std::vector<Int> divisors(const PrimeFactorization& f) const;

  friend auto operator<=>(const SymbolSet&, const SymbolSet&) = default;

 private:
  std::vector<std::size_t> columns_;  // ascending
};

struct SpectrumEntry {
  Int value;
  Int multiplicity;

  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Eigenvalue multiset as ascending (value, multiplicity) pairs, values distinct.
struct CanonicalSpectrum {
  std::vector<SpectrumEntry> pairs;

  Int total_multiplicity() const;
  friend bool operator==(const CanonicalSpectrum&, const CanonicalSpectrum&) = default;
};

/// Merges equal values across rows and sorts. values and weights align.
CanonicalSpectrum canonicalize(std::span<const Int> values, std::span<const Int> weights);

/// lambda_t(G_N(d)) from the totient/Moebius closed form.
Int eigenvalue_basic(const PrimeFactorization& f, Int d, Int t);

CompactMatrix compact_prime_power(Int p, int n);
CompactMatrix compact_matrix(const PrimeFactorization& f);

/// Per-row eigenvalue of ICG_N(D) in the compact form.
std::vector<Int> row_values(const CompactMatrix& m, const SymbolSet& symbols);

CanonicalSpectrum spectrum(const CompactMatrix& m, const SymbolSet& symbols);
CanonicalSpectrum spectrum(const PrimeFactorization& f, const SymbolSet& symbols);

/// Independent check: sums cos(2 pi t j / N) over the expanded symbol for every
/// t and rounds. Rejects N > 4096 with GuardExceeded; throws
/// std::runtime_error if a rounding residue reaches 1e-6 * N.
CanonicalSpectrum spectrum_numeric_oracle(const PrimeFactorization& f, const SymbolSet& symbols);

}  // namespace icg
