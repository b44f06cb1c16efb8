// One JSONL line per scanned N.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icg/isap.hpp"

namespace icg {

struct ScanRecord {
  std::int64_t n = 0;
  std::vector<std::pair<std::int64_t, int>> factors;
  std::string status;
  std::string method;
  std::optional<std::uint64_t> distinct_spectra;
  std::int64_t elapsed_ms = 0;
  std::string version;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

ScanRecord make_record(const PrimeFactorization& f, const IsapVerdict& verdict, std::int64_t elapsed_ms,
                       std::string version);

/// Single line, fixed key order, no trailing newline.
std::string render_record(const ScanRecord& record);

/// Throws InvalidInput on malformed lines or schema violations.
ScanRecord parse_record(const std::string& line);

}  // namespace icg
