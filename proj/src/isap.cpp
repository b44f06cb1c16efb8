#include "icg/isap.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <functional>
#include <thread>
#include <utility>

namespace icg {

PhiVector phi_vector(const PrimeFactorization& f) {
  if (f.rank() == 0) throw InvalidInput("phi_vector needs N >= 2");
  PhiVector out;
  for (const auto& m : exponent_indices(f)) {
    Int value = 1;
    for (std::size_t i = 0; i < f.rank(); ++i) {
      const auto& pp = f.factors()[i];
      if (m.exponents[i] > 0) value = checked_mul(value, checked_mul(pp.prime - 1, checked_pow(pp.prime, m.exponents[i] - 1)));
    }
    out.entries.push_back(value);
  }
  return out;
}

std::string_view status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kIsapProven: return "isap-proven";
    case VerdictStatus::kIsapBruteVerified: return "isap-brute-verified";
    case VerdictStatus::kCounterexample: return "counterexample";
    case VerdictStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

VerdictStatus parse_status(std::string_view name) {
  for (auto s : {VerdictStatus::kIsapProven, VerdictStatus::kIsapBruteVerified, VerdictStatus::kCounterexample,
                 VerdictStatus::kUnknown}) {
    if (status_name(s) == name) return s;
  }
  throw InvalidInput("unknown verdict status '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

constexpr int kHardMaskBits = 32;

struct HashedMask {
  std::uint64_t hash;
  std::uint64_t mask;
  friend auto operator<=>(const HashedMask&, const HashedMask&) = default;
};

// Dense int64 copy of the compact matrix, column-major for symbol updates.
struct FastMatrix {
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<std::int64_t> by_column;  // column c occupies [c * rows, (c + 1) * rows)
  std::vector<std::int64_t> weights;

  explicit FastMatrix(const CompactMatrix& m) : rows(m.size()), columns(m.size()) {
    by_column.resize(rows * columns);
    for (std::size_t c = 0; c < columns; ++c) {
      for (std::size_t r = 0; r < rows; ++r) by_column[c * rows + r] = to_i64(m.entry(r, c));
    }
    for (Int w : m.row_multiplicities()) weights.push_back(to_i64(w));
  }

  const std::int64_t* column(std::size_t c) const { return by_column.data() + c * rows; }
};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Hash of the canonical (value, multiplicity) encoding. Scratch buffers are
// caller-owned to keep the inner loop allocation free.
std::uint64_t spectrum_hash(const std::vector<std::int64_t>& values, const std::vector<std::int64_t>& weights,
                            std::vector<std::pair<std::int64_t, std::int64_t>>& scratch) {
  scratch.clear();
  for (std::size_t r = 0; r < values.size(); ++r) scratch.emplace_back(values[r], weights[r]);
  std::sort(scratch.begin(), scratch.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::size_t i = 0;
  while (i < scratch.size()) {
    std::int64_t value = scratch[i].first;
    std::int64_t mult = 0;
    for (; i < scratch.size() && scratch[i].first == value; ++i) mult += scratch[i].second;
    std::array<unsigned char, 16> encoded{};
    for (int b = 0; b < 8; ++b) {
      encoded[static_cast<std::size_t>(b)] = static_cast<unsigned char>(static_cast<std::uint64_t>(value) >> (8 * b));
      encoded[static_cast<std::size_t>(8 + b)] = static_cast<unsigned char>(static_cast<std::uint64_t>(mult) >> (8 * b));
    }
    h = fnv1a(h, encoded.data(), encoded.size());
  }
  return h;
}

void hash_range(const FastMatrix& fm, std::uint64_t lo, std::uint64_t hi, HashedMask* out) {
  std::vector<std::int64_t> values(fm.rows, 0);
  std::vector<std::pair<std::int64_t, std::int64_t>> scratch;
  scratch.reserve(fm.rows);
  auto apply = [&](std::uint64_t bits, int sign) {
    while (bits != 0) {
      auto bit = static_cast<std::size_t>(__builtin_ctzll(bits));
      bits &= bits - 1;
      const std::int64_t* col = fm.column(bit + 1);
      for (std::size_t r = 0; r < fm.rows; ++r) values[r] += sign * col[r];
    }
  };
  apply(lo, +1);
  for (std::uint64_t mask = lo; mask < hi; ++mask) {
    out[mask - lo] = {spectrum_hash(values, fm.weights, scratch), mask};
    std::uint64_t next = mask + 1;
    apply(mask & ~next, -1);
    apply(next & ~mask, +1);
  }
}

}  // namespace

IsapVerdict brute_force_search(const PrimeFactorization& f, const BruteForceOptions& options) {
  IsapVerdict verdict;
  verdict.n = f.value();
  verdict.method = "brute-force";
  if (f.rank() == 0) throw InvalidInput("brute force needs N >= 2");

  const Int tau = f.divisor_count();
  const Int free_columns = tau - 1;
  if (free_columns > options.cap || free_columns > kHardMaskBits) {
    verdict.status = VerdictStatus::kUnknown;
    verdict.evidence.push_back("tau(N) - 1 = " + to_string(free_columns) + " exceeds brute-force cap " +
                               std::to_string(std::min(options.cap, kHardMaskBits)));
    return verdict;
  }

  const CompactMatrix matrix = compact_matrix(f);
  const FastMatrix fast(matrix);
  const auto bits = static_cast<int>(free_columns);
  const std::uint64_t total = std::uint64_t{1} << bits;

  std::vector<HashedMask> records(total);
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::min<std::uint64_t>(total, 1024))));
  {
    std::vector<std::jthread> workers;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      std::uint64_t lo = std::min(total, w * chunk);
      std::uint64_t hi = std::min(total, lo + chunk);
      if (lo == hi) continue;
      workers.emplace_back([&fast, lo, hi, &records] { hash_range(fast, lo, hi, records.data() + lo); });
    }
  }
  std::sort(records.begin(), records.end());

  std::uint64_t distinct = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> first_pair;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].hash == records[i].hash) ++j;
    if (j - i == 1) {
      ++distinct;
    } else {
      // Equal hashes: confirm with exact spectra before calling anything a collision.
      std::vector<std::pair<CanonicalSpectrum, std::vector<std::uint64_t>>> classes;
      for (std::size_t k = i; k < j; ++k) {
        CanonicalSpectrum s = spectrum(matrix, SymbolSet::from_mask(records[k].mask));
        auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.first == s; });
        if (it == classes.end()) {
          classes.push_back({std::move(s), {records[k].mask}});
        } else {
          it->second.push_back(records[k].mask);
        }
      }
      distinct += classes.size();
      for (const auto& c : classes) {
        if (c.second.size() < 2) continue;
        std::pair<std::uint64_t, std::uint64_t> candidate{c.second[0], c.second[1]};
        if (!first_pair || candidate < *first_pair) first_pair = candidate;
      }
    }
    i = j;
  }

  verdict.distinct_spectra = distinct;
  verdict.evidence.push_back("enumerated " + std::to_string(total) + " symbol sets, " + std::to_string(distinct) +
                             " distinct spectra");
  if (first_pair) {
    CospectralPair pair;
    pair.a = SymbolSet::from_mask(first_pair->first);
    pair.b = SymbolSet::from_mask(first_pair->second);
    pair.shared_spectrum = spectrum(matrix, pair.a);
    verdict.status = VerdictStatus::kCounterexample;
    verdict.counterexample = std::move(pair);
  } else {
    verdict.status = VerdictStatus::kIsapBruteVerified;
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

// {1, (p-1), (p-1)p, ..., (p-1)p^(n-1)}
std::vector<Int> phi_terms(const PrimePower& pp) {
  std::vector<Int> out{1};
  for (int e = 1; e <= pp.exponent; ++e) out.push_back(checked_mul(pp.prime - 1, checked_pow(pp.prime, e - 1)));
  return out;
}

// {1, p, ..., p^(n-1)}
std::vector<Int> power_terms(const PrimePower& pp) {
  std::vector<Int> out;
  for (int e = 0; e < pp.exponent; ++e) out.push_back(checked_pow(pp.prime, e));
  return out;
}

std::string format_list(std::span<const Int> values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += to_string(values[i]);
  }
  return out + "}";
}

std::string format_side(std::span<const Int> values, const std::vector<std::size_t>& side) {
  if (side.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < side.size(); ++k) {
    if (k > 0) out += " + ";
    out += to_string(values[side[k]]);
  }
  return out;
}

struct NarCheck {
  bool nar_free = false;
  std::string note;
};

// modulus 0 means plain integers; modulus 1 makes every value vanish.
NarCheck check_nar_free(std::span<const Int> values, Int modulus) {
  const std::string where = format_list(values) + (modulus == 0 ? "" : " mod " + to_string(modulus));
  if (modulus == 1) {
    return {values.empty(), where + ": every value is 0 mod 1"};
  }
  try {
    auto rel = modulus == 0 ? has_nar(values) : has_nar_mod(values, modulus);
    if (!rel) return {true, where + ": no NAR"};
    return {false, where + ": NAR " + format_side(values, rel->s1) + " = " + format_side(values, rel->s2)};
  } catch (const GuardExceeded& e) {
    return {false, where + ": not evaluated (" + e.what() + ")"};
  }
}

std::vector<Int> tensor_except(const PrimeFactorization& f, std::size_t skip,
                               std::vector<Int> (*terms)(const PrimePower&)) {
  std::vector<std::vector<Int>> lists;
  for (std::size_t j = 0; j < f.rank(); ++j) {
    if (j != skip) lists.push_back(terms(f.factors()[j]));
  }
  return tensor_multiset(lists);
}

void require_rank(const PrimeFactorization& f, bool ok, const char* what) {
  if (!ok) throw InvalidInput(std::string(what) + ": N = " + to_string(f.value()) + " has the wrong shape");
}

std::string prime_label(const PrimeFactorization& f, std::size_t i) {
  return "i=" + std::to_string(i + 1) + " (p=" + to_string(f.factors()[i].prime) + ")";
}

}  // namespace

CheckerReport check_general_nar(const PrimeFactorization& f) {
  require_rank(f, f.rank() >= 2, "general-nar");
  CheckerReport report{"theorem:general-nar", false, {}};
  bool all_first = true;
  for (std::size_t i = 0; i < f.rank(); ++i) {
    NarCheck c{false, ""};
    try {
      c = check_nar_free(tensor_except(f, i, phi_terms), f.factors()[i].prime - 1);
    } catch (const GuardExceeded& e) {
      c = {false, std::string("not evaluated (") + e.what() + ")"};
    }
    report.trace.push_back("condition 1 " + prime_label(f, i) + ": " + c.note);
    if (!c.nar_free) {
      all_first = false;
      break;
    }
  }
  bool some_second = false;
  if (all_first) {
    for (std::size_t i = 0; i < f.rank() && !some_second; ++i) {
      NarCheck c{false, ""};
      try {
        c = check_nar_free(tensor_except(f, i, power_terms), f.factors()[i].prime);
      } catch (const GuardExceeded& e) {
        c = {false, std::string("not evaluated (") + e.what() + ")"};
      }
      report.trace.push_back("condition 2 " + prime_label(f, i) + ": " + c.note);
      some_second = c.nar_free;
    }
  }
  report.applies = all_first && some_second;
  return report;
}

CheckerReport check_general_cos(const PrimeFactorization& f) {
  require_rank(f, f.rank() >= 2, "general-cos");
  CheckerReport report{"theorem:general-cos", false, {}};
  for (std::size_t i = 0; i < f.rank() && !report.applies; ++i) {
    Int g = 0;
    for (std::size_t j = 0; j < f.rank(); ++j) {
      if (j != i) g = gcd_int(g, f.factors()[j].prime - 1);
    }
    NarCheck own = check_nar_free(phi_terms(f.factors()[i]), g);
    report.trace.push_back("condition 1 " + prime_label(f, i) + ": " + own.note);
    if (!own.nar_free) continue;
    NarCheck rest{false, ""};
    try {
      rest = check_nar_free(tensor_except(f, i, phi_terms), 0);
    } catch (const GuardExceeded& e) {
      rest = {false, std::string("not evaluated (") + e.what() + ")"};
    }
    report.trace.push_back("condition 2 " + prime_label(f, i) + ": " + rest.note);
    if (rest.nar_free) {
      report.applies = true;
      report.trace.push_back("applies at " + prime_label(f, i));
    }
  }
  return report;
}

CheckerReport check_pkqk(const PrimeFactorization& f) {
  require_rank(f, f.rank() == 2, "pkqk");
  CheckerReport report{"theorem:pkqk", false, {}};
  const auto& p = f.factors()[0];
  const auto& q = f.factors()[1];
  NarCheck c = check_nar_free(phi_terms(p), q.prime - 1);
  report.trace.push_back(c.note);
  if (c.nar_free) report.trace.push_back("no relation mod (q-1): N has the ISAP");
  report.applies = c.nar_free;
  return report;
}

CheckerReport check_p2qn(const PrimeFactorization& f) {
  require_rank(f, f.rank() == 2 && (f.factors()[0].exponent == 2 || f.factors()[1].exponent == 2), "p2qn");
  CheckerReport report{"theorem:p2qn", false, {}};
  // With both exponents 2 the smaller prime plays p.
  const std::size_t pi = f.factors()[0].exponent == 2 ? 0 : 1;
  const Int p = f.factors()[pi].prime;
  const Int q = f.factors()[1 - pi].prime;
  const Int bound = checked_mul(checked_mul(p - 1, p - 1), p + 1);
  const bool odd = p % 2 == 1 && q % 2 == 1;
  const bool divides = bound % (q - 1) == 0;
  report.trace.push_back("p=" + to_string(p) + ", q=" + to_string(q) + ", n2=" +
                         std::to_string(f.factors()[1 - pi].exponent));
  report.trace.push_back(odd ? "p and q odd" : "p or q is 2");
  report.trace.push_back("(q-1) = " + to_string(q - 1) + (divides ? " divides " : " does not divide ") +
                         "(p-1)^2(p+1) = " + to_string(bound));
  report.applies = odd && !divides;
  return report;
}

CheckerReport check_p2q2(const PrimeFactorization& f) {
  require_rank(f, f.rank() == 2 && f.factors()[0].exponent == 2 && f.factors()[1].exponent == 2, "p2q2");
  CheckerReport report{"theorem:p2q2", true, {}};
  report.trace.push_back("N = " + to_string(f.factors()[0].prime) + "^2 * " + to_string(f.factors()[1].prime) +
                         "^2: every p^2 q^2 has the ISAP");
  return report;
}

CheckerReport check_far_apart(const PrimeFactorization& f) {
  PhiVector pv = phi_vector(f);
  CheckerReport report{"theorem:far-apart", super_sequence_orderable(pv.entries), {}};
  std::vector<Int> sorted = pv.entries;
  std::sort(sorted.begin(), sorted.end());
  report.trace.push_back("sorted P(N) = " + format_list(sorted) +
                         (report.applies ? " is a super sequence" : " is not a super sequence"));
  return report;
}

CheckerReport check_literature(const PrimeFactorization& f) {
  CheckerReport report{"literature", false, {}};
  const auto& fs = f.factors();
  if (fs.size() == 1) {
    report.method = "literature:p^k";
  } else if (fs.size() == 2 && fs[0].exponent == 1) {
    report.method = "literature:pq^k";
  } else if (fs.size() == 2 && fs[0].exponent == 2 && fs[1].exponent == 1) {
    report.method = "literature:p^2q";
  } else if (fs.size() == 3 && fs[0].exponent == 1 && fs[1].exponent == 1 && fs[2].exponent == 1) {
    report.method = "literature:pqr";
  } else {
    report.trace.push_back("not of shape p^k, pq^k, p^2q or pqr");
    return report;
  }
  report.applies = true;
  report.trace.push_back("shape " + report.method.substr(report.method.find(':') + 1) + " is known to have the ISAP");
  return report;
}

IsapVerdict classify(const PrimeFactorization& f, const BruteForceOptions& options) {
  if (f.rank() == 0) throw InvalidInput("classify needs N >= 2");
  IsapVerdict verdict;
  verdict.n = f.value();

  const auto& fs = f.factors();
  std::vector<std::function<CheckerReport()>> checkers;
  checkers.push_back([&] { return check_literature(f); });
  checkers.push_back([&] { return check_far_apart(f); });
  if (fs.size() >= 2) {
    checkers.push_back([&] { return check_general_nar(f); });
    checkers.push_back([&] { return check_general_cos(f); });
  }
  if (fs.size() == 2) {
    checkers.push_back([&] { return check_pkqk(f); });
    if (fs[0].exponent == 2 || fs[1].exponent == 2) checkers.push_back([&] { return check_p2qn(f); });
    if (fs[0].exponent == 2 && fs[1].exponent == 2) checkers.push_back([&] { return check_p2q2(f); });
  }

  for (const auto& run : checkers) {
    CheckerReport report = run();
    if (report.applies) {
      verdict.status = VerdictStatus::kIsapProven;
      verdict.method = report.method;
      verdict.evidence.insert(verdict.evidence.end(), report.trace.begin(), report.trace.end());
      return verdict;
    }
    verdict.evidence.push_back(report.method + ": not applicable");
  }

  IsapVerdict brute = brute_force_search(f, options);
  brute.evidence.insert(brute.evidence.begin(), verdict.evidence.begin(), verdict.evidence.end());
  if (brute.status == VerdictStatus::kUnknown) brute.method = "none";
  return brute;
}

// ---------------------------------------------------------------------------
// Row relations

RowMatching extract_row_nars(std::span<const Int> values_a, std::span<const Int> values_b,
                             std::span<const Int> weights) {
  if (values_a.size() != weights.size() || values_b.size() != weights.size()) {
    throw InvalidInput("row vectors and weights differ in length");
  }
  for (Int w : weights) {
    if (w <= 0) throw InvalidInput("row weights must be positive");
  }
  if (!(canonicalize(values_a, weights) == canonicalize(values_b, weights))) {
    throw InvalidInput("extract_row_nars: the two vectors are not cospectral");
  }

  RowMatching out;
  const std::size_t n = weights.size();
  std::vector<Int> values;
  for (std::size_t r = 0; r < n; ++r) {
    if (values_a[r] == values_b[r]) {
      out.fixed_rows.push_back(r);
    } else {
      values.push_back(values_a[r]);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  for (Int value : values) {
    std::vector<std::size_t> left, right;
    for (std::size_t r = 0; r < n; ++r) {
      if (values_a[r] == values_b[r]) continue;
      if (values_a[r] == value) left.push_back(r);
      if (values_b[r] == value) right.push_back(r);
    }
    std::size_t li = 0, ri = 0;
    Int left_rem = left.empty() ? 0 : weights[left[0]];
    Int right_rem = right.empty() ? 0 : weights[right[0]];
    RowRelation current{{}, value};
    while (li < left.size() && ri < right.size()) {
      if (current.relation.s1.empty() || current.relation.s1.back() != left[li]) current.relation.s1.push_back(left[li]);
      if (current.relation.s2.empty() || current.relation.s2.back() != right[ri]) current.relation.s2.push_back(right[ri]);
      Int amount = std::min(left_rem, right_rem);
      out.transfers.push_back({left[li], right[ri], amount});
      left_rem -= amount;
      right_rem -= amount;
      const bool left_done = left_rem == 0;
      const bool right_done = right_rem == 0;
      if (left_done && ++li < left.size()) left_rem = weights[left[li]];
      if (right_done && ++ri < right.size()) right_rem = weights[right[ri]];
      if (left_done && right_done) {
        out.relations.push_back(std::move(current));
        current = RowRelation{{}, value};
      }
    }
    if (li != left.size() || ri != right.size() || !current.relation.s1.empty()) {
      throw std::logic_error("extract_row_nars: unbalanced value class");  // excluded by the spectrum check
    }
  }
  return out;
}

RowMatching extract_row_nars(const PrimeFactorization& f, const SymbolSet& a, const SymbolSet& b) {
  const CompactMatrix m = compact_matrix(f);
  auto va = row_values(m, a);
  auto vb = row_values(m, b);
  return extract_row_nars(va, vb, m.row_multiplicities());
}

bool verify_fixed_row(const PrimeFactorization& f, const SymbolSet& a, const SymbolSet& b,
                      std::span<const RowCoefficient> rows) {
  const CompactMatrix m = compact_matrix(f);
  std::vector<Int> delta(m.size(), 0);
  for (const auto& rc : rows) {
    const std::size_t r = index_position(f, rc.row);
    for (std::size_t c = 0; c < m.size(); ++c) delta[c] = checked_add(delta[c], checked_mul(rc.coefficient, m.entry(r, c)));
  }
  auto side = [&](const SymbolSet& s) {
    Int total = 0;
    for (std::size_t c : s.columns()) total = checked_add(total, delta.at(c));
    return total;
  };
  return side(a) == side(b);
}

}  // namespace icg
