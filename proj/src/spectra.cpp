#include "icg/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace icg {

std::string ExponentIndex::label() const {
  std::string out = "(";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(exponents[i]);
  }
  out += ')';
  return out;
}

std::vector<ExponentIndex> exponent_indices(const PrimeFactorization& f) {
  std::vector<ExponentIndex> out;
  std::vector<int> cur(f.rank(), 0);
  // Odometer over the mixed radix, last coordinate fastest.
  for (;;) {
    out.push_back(ExponentIndex{cur});
    std::size_t i = f.rank();
    while (i > 0 && cur[i - 1] == f.factors()[i - 1].exponent) {
      cur[i - 1] = 0;
      --i;
    }
    if (i == 0) return out;
    ++cur[i - 1];
  }
}

std::size_t index_position(const PrimeFactorization& f, const ExponentIndex& m) {
  if (m.exponents.size() != f.rank()) throw InvalidInput("exponent index has wrong length");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < f.rank(); ++i) {
    int bound = f.factors()[i].exponent;
    if (m.exponents[i] < 0 || m.exponents[i] > bound) throw InvalidInput("exponent index out of range");
    pos = pos * static_cast<std::size_t>(bound + 1) + static_cast<std::size_t>(m.exponents[i]);
  }
  return pos;
}

ExponentIndex column_of_divisor(const PrimeFactorization& f, Int d) {
  PrimeFactorization df = factorize_divisor(f, d);
  ExponentIndex col;
  for (const auto& pp : f.factors()) col.exponents.push_back(pp.exponent - df.exponent_of(pp.prime));
  return col;
}

Int divisor_of_column(const PrimeFactorization& f, const ExponentIndex& column) {
  index_position(f, column);  // validates
  Int d = 1;
  for (std::size_t i = 0; i < f.rank(); ++i) {
    const auto& pp = f.factors()[i];
    d = checked_mul(d, checked_pow(pp.prime, pp.exponent - column.exponents[i]));
  }
  return d;
}

ExponentIndex row_of_residue(const PrimeFactorization& f, Int t) {
  if (t < 0 || t >= f.value()) throw InvalidInput("residue must satisfy 0 <= t < N");
  ExponentIndex row;
  for (const auto& pp : f.factors()) {
    int e = 0;
    if (t == 0) {
      e = pp.exponent;
    } else {
      Int x = t;
      while (e < pp.exponent && x % pp.prime == 0) {
        x /= pp.prime;
        ++e;
      }
    }
    row.exponents.push_back(e);
  }
  return row;
}

Int CompactMatrix::entry(const ExponentIndex& row, const ExponentIndex& col) const {
  return entry(index_position(factorization_, row), index_position(factorization_, col));
}

SymbolSet SymbolSet::from_divisors(const PrimeFactorization& f, std::span<const Int> divisors) {
  std::vector<std::size_t> cols;
  for (Int d : divisors) {
    if (d == f.value()) throw InvalidInput("d = N is not a proper divisor");
    cols.push_back(index_position(f, column_of_divisor(f, d)));
  }
  return from_columns(f, std::move(cols));
}

SymbolSet SymbolSet::from_columns(const PrimeFactorization& f, std::vector<std::size_t> columns) {
  auto tau = static_cast<std::size_t>(f.divisor_count());
  for (std::size_t c : columns) {
    if (c == 0) throw InvalidInput("column (0,...,0) is d = N and cannot be in a symbol");
    if (c >= tau) throw InvalidInput("column position out of range");
  }
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  SymbolSet s;
  s.columns_ = std::move(columns);
  return s;
}

SymbolSet SymbolSet::from_mask(std::uint64_t mask) {
  SymbolSet s;
  for (std::size_t bit = 0; bit < 64; ++bit) {
    if ((mask >> bit) & 1u) s.columns_.push_back(bit + 1);
  }
  return s;
}

bool SymbolSet::contains(std::size_t column) const {
  return std::binary_search(columns_.begin(), columns_.end(), column);
}

std::uint64_t SymbolSet::mask() const {
  std::uint64_t m = 0;
  for (std::size_t c : columns_) {
    if (c > 64) throw GuardExceeded("symbol set does not fit a 64-bit mask");
    m |= std::uint64_t{1} << (c - 1);
  }
  return m;
}

std::vector<Int> SymbolSet::divisors(const PrimeFactorization& f) const {
  auto index = exponent_indices(f);
  std::vector<Int> out;
  for (std::size_t c : columns_) out.push_back(divisor_of_column(f, index.at(c)));
  std::sort(out.begin(), out.end());
  return out;
}

Int CanonicalSpectrum::total_multiplicity() const {
  Int total = 0;
  for (const auto& e : pairs) total = checked_add(total, e.multiplicity);
  return total;
}

CanonicalSpectrum canonicalize(std::span<const Int> values, std::span<const Int> weights) {
  if (values.size() != weights.size()) throw InvalidInput("values and weights differ in length");
  std::vector<SpectrumEntry> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) entries.push_back({values[i], weights[i]});
  std::sort(entries.begin(), entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
  CanonicalSpectrum out;
  for (const auto& e : entries) {
    if (!out.pairs.empty() && out.pairs.back().value == e.value) {
      out.pairs.back().multiplicity = checked_add(out.pairs.back().multiplicity, e.multiplicity);
    } else {
      out.pairs.push_back(e);
    }
  }
  return out;
}

Int eigenvalue_basic(const PrimeFactorization& f, Int d, Int t) {
  const Int n = f.value();
  if (d < 1 || n % d != 0) throw InvalidInput(to_string(d) + " does not divide " + to_string(n));
  if (d == n) throw InvalidInput("d = N is not a proper divisor");
  if (t < 0 || t >= n) throw InvalidInput("residue must satisfy 0 <= t < N");
  const Int quotient = n / d;
  const Int reduced = quotient / gcd_int(t, quotient);  // gcd(0, m) = m
  const PrimeFactorization qf = factorize_divisor(f, quotient);
  const PrimeFactorization rf = factorize_divisor(f, reduced);
  const Int ratio = phi(qf) / phi(rf);
  return checked_mul(ratio, mu(rf));
}

CompactMatrix compact_prime_power(Int p, int n) {
  if (n < 1) throw InvalidInput("prime-power exponent must be >= 1");
  CompactMatrix m;
  m.factorization_ = PrimeFactorization::from_factors({{p, n}});
  m.index_ = exponent_indices(m.factorization_);
  const auto size = static_cast<std::size_t>(n + 1);
  m.entries_.assign(size * size, 0);
  for (int gamma = 0; gamma <= n; ++gamma) {
    for (int beta = 0; beta <= n; ++beta) {
      Int value = 0;
      if (beta == 0) {
        value = 1;
      } else if (gamma >= beta) {
        value = checked_mul(p - 1, checked_pow(p, beta - 1));
      } else if (gamma == beta - 1) {
        value = -checked_pow(p, beta - 1);
      }
      m.entries_[static_cast<std::size_t>(gamma) * size + static_cast<std::size_t>(beta)] = value;
    }
    m.row_mult_.push_back(phi(PrimeFactorization::from_factors(
        n - gamma > 0 ? std::vector<PrimePower>{{p, n - gamma}} : std::vector<PrimePower>{})));
  }
  return m;
}

CompactMatrix compact_matrix(const PrimeFactorization& f) {
  if (f.rank() == 0) throw InvalidInput("compact matrix needs N >= 2");
  std::vector<CompactMatrix> blocks;
  for (const auto& pp : f.factors()) blocks.push_back(compact_prime_power(pp.prime, pp.exponent));

  CompactMatrix m;
  m.factorization_ = f;
  m.index_ = exponent_indices(f);
  const std::size_t size = m.index_.size();
  m.entries_.assign(size * size, 0);
  m.row_mult_.assign(size, 1);
  for (std::size_t r = 0; r < size; ++r) {
    const auto& row = m.index_[r].exponents;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      m.row_mult_[r] = checked_mul(m.row_mult_[r], blocks[i].row_multiplicity(static_cast<std::size_t>(row[i])));
    }
    for (std::size_t c = 0; c < size; ++c) {
      const auto& col = m.index_[c].exponents;
      Int value = 1;
      for (std::size_t i = 0; i < blocks.size() && value != 0; ++i) {
        value = checked_mul(value, blocks[i].entry(static_cast<std::size_t>(row[i]), static_cast<std::size_t>(col[i])));
      }
      m.entries_[r * size + c] = value;
    }
  }
  return m;
}

std::vector<Int> row_values(const CompactMatrix& m, const SymbolSet& symbols) {
  std::vector<Int> values(m.size(), 0);
  for (std::size_t c : symbols.columns()) {
    if (c == 0 || c >= m.size()) throw InvalidInput("symbol column out of range for this N");
    for (std::size_t r = 0; r < m.size(); ++r) values[r] = checked_add(values[r], m.entry(r, c));
  }
  return values;
}

CanonicalSpectrum spectrum(const CompactMatrix& m, const SymbolSet& symbols) {
  auto values = row_values(m, symbols);
  return canonicalize(values, m.row_multiplicities());
}

CanonicalSpectrum spectrum(const PrimeFactorization& f, const SymbolSet& symbols) {
  return spectrum(compact_matrix(f), symbols);
}

CanonicalSpectrum spectrum_numeric_oracle(const PrimeFactorization& f, const SymbolSet& symbols) {
  const Int big_n = f.value();
  if (big_n > 4096) throw GuardExceeded("numeric oracle limited to N <= 4096");
  const auto n = static_cast<std::int64_t>(big_n);

  std::vector<Int> wanted = symbols.divisors(f);
  std::vector<std::int64_t> symbol;
  for (std::int64_t k = 1; k < n; ++k) {
    auto g = static_cast<Int>(std::gcd(k, n));
    if (std::binary_search(wanted.begin(), wanted.end(), g)) symbol.push_back(k);
  }

  std::vector<Int> values;
  std::vector<Int> weights;
  const double tolerance = 1e-6 * static_cast<double>(n);
  for (std::int64_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::int64_t j : symbol) {
      std::int64_t phase = (t * j) % n;
      sum += std::cos(2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n));
    }
    double rounded = std::nearbyint(sum);
    if (std::abs(sum - rounded) >= tolerance) {
      throw std::runtime_error("numeric oracle: rounding residue exceeds tolerance at t = " + std::to_string(t));
    }
    values.push_back(static_cast<Int>(static_cast<std::int64_t>(rounded)));
    weights.push_back(1);
  }
  return canonicalize(values, weights);
}

}  // namespace icg
