// ISAP verdicts: sufficient-condition checkers, exhaustive cospectral search,
// and row relations induced by a cospectral pair.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icg/nar.hpp"
#include "icg/numtheory.hpp"
#include "icg/spectra.hpp"

namespace icg {

/// phi(prod p_i^{m_i}) for every m in I(N), lexicographic order.
struct PhiVector {
  std::vector<Int> entries;
};

PhiVector phi_vector(const PrimeFactorization& f);

struct CospectralPair {
  SymbolSet a;
  SymbolSet b;
  CanonicalSpectrum shared_spectrum;
};

enum class VerdictStatus { kIsapProven, kIsapBruteVerified, kCounterexample, kUnknown };

std::string_view status_name(VerdictStatus s);
VerdictStatus parse_status(std::string_view name);

struct IsapVerdict {
  Int n = 0;
  VerdictStatus status = VerdictStatus::kUnknown;
  std::string method;
  std::optional<CospectralPair> counterexample;
  std::optional<std::uint64_t> distinct_spectra;
  std::vector<std::string> evidence;
};

inline constexpr int kDefaultBruteCap = 24;

struct BruteForceOptions {
  int cap = kDefaultBruteCap;  // max tau(N) - 1
  unsigned jobs = 1;
};

/// Enumerates all 2^(tau-1) symbol sets, groups equal spectra, and reports the
/// lexicographically first colliding pair of masks if any.
IsapVerdict brute_force_search(const PrimeFactorization& f, const BruteForceOptions& options = {});

struct CheckerReport {
  std::string method;
  bool applies = false;
  std::vector<std::string> trace;
};

CheckerReport check_general_nar(const PrimeFactorization& f);
CheckerReport check_general_cos(const PrimeFactorization& f);
CheckerReport check_pkqk(const PrimeFactorization& f);
CheckerReport check_p2qn(const PrimeFactorization& f);
CheckerReport check_p2q2(const PrimeFactorization& f);
CheckerReport check_far_apart(const PrimeFactorization& f);

/// Shapes settled in prior work: p^k, pq^k and p^2 q (p < q), pqr.
CheckerReport check_literature(const PrimeFactorization& f);

/// Tries the literature shapes, then every checker, then brute force when
/// tau(N) - 1 <= cap.
IsapVerdict classify(const PrimeFactorization& f, const BruteForceOptions& options = {});

/// One weight transfer of the compact matching: `amount` copies of left row
/// `left` are sent to right row `right`.
struct RowTransfer {
  std::size_t left;
  std::size_t right;
  Int amount;
};

/// A disjoint balanced relation on row multiplicities; every row in it carries
/// `value` (left side in vector A, right side in vector B).
struct RowRelation {
  AdditiveRelation relation;
  Int value;
};

struct RowMatching {
  std::vector<std::size_t> fixed_rows;
  std::vector<RowRelation> relations;
  std::vector<RowTransfer> transfers;
};

/// Works on any pair of compact vectors with equal canonical spectra.
RowMatching extract_row_nars(std::span<const Int> values_a, std::span<const Int> values_b,
                             std::span<const Int> weights);
RowMatching extract_row_nars(const PrimeFactorization& f, const SymbolSet& a, const SymbolSet& b);

struct RowCoefficient {
  ExponentIndex row;
  Int coefficient;
};

/// Column relation for a linear combination of compact rows:
/// sum_{c in a} delta_c == sum_{c in b} delta_c.
bool verify_fixed_row(const PrimeFactorization& f, const SymbolSet& a, const SymbolSet& b,
                      std::span<const RowCoefficient> rows);

}  // namespace icg
