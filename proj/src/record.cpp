#include "icg/record.hpp"

#include "json.hpp"

namespace icg {

using ordered_json = nlohmann::ordered_json;

ScanRecord make_record(const PrimeFactorization& f, const IsapVerdict& verdict, std::int64_t elapsed_ms,
                       std::string version) {
  ScanRecord r;
  r.n = to_i64(f.value());
  for (const auto& pp : f.factors()) r.factors.emplace_back(to_i64(pp.prime), pp.exponent);
  r.status = std::string(status_name(verdict.status));
  r.method = verdict.method;
  r.distinct_spectra = verdict.distinct_spectra;
  r.elapsed_ms = elapsed_ms;
  r.version = std::move(version);
  return r;
}

std::string render_record(const ScanRecord& record) {
  ordered_json j;
  j["n"] = record.n;
  j["factors"] = ordered_json::array();
  for (const auto& [p, e] : record.factors) j["factors"].push_back({p, e});
  j["status"] = record.status;
  j["method"] = record.method;
  j["distinct_spectra"] = record.distinct_spectra ? ordered_json(*record.distinct_spectra) : ordered_json(nullptr);
  j["elapsed_ms"] = record.elapsed_ms;
  j["version"] = record.version;
  return j.dump();
}

ScanRecord parse_record(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed record: ") + e.what());
  }
  try {
    ScanRecord r;
    r.n = j.at("n").get<std::int64_t>();
    for (const auto& pe : j.at("factors")) {
      if (!pe.is_array() || pe.size() != 2) throw InvalidInput("factor entries must be [p, e] pairs");
      r.factors.emplace_back(pe[0].get<std::int64_t>(), pe[1].get<int>());
    }
    r.status = j.at("status").get<std::string>();
    parse_status(r.status);
    r.method = j.at("method").get<std::string>();
    const auto& ds = j.at("distinct_spectra");
    if (!ds.is_null()) r.distinct_spectra = ds.get<std::uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    r.version = j.at("version").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("record schema violation: ") + e.what());
  }
}

}  // namespace icg
