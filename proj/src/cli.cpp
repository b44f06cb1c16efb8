#include "icg/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "icg/isap.hpp"
#include "icg/nar.hpp"
#include "icg/numtheory.hpp"
#include "icg/record.hpp"
#include "icg/spectra.hpp"
#include "json.hpp"

#ifndef ICG_VERSION
#define ICG_VERSION "dev"
#endif

namespace icg::cli {

const char* version() { return ICG_VERSION; }

namespace {

using ordered_json = nlohmann::ordered_json;

enum class Format { kHuman, kJson, kCsv };

struct Settings {
  std::string n;
  std::string format = "human";
  std::string divisors;
  std::string divisors_b;
  std::string modulus;
  std::optional<int> cap;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string lo;
  std::string hi;
  std::string out_path;
  bool resume = false;
  std::string p2q2_prime;
  std::string seed;
};

Format parse_format(const std::string& s) {
  if (s == "human") return Format::kHuman;
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  throw InvalidInput("unknown format '" + s + "' (expected human, json or csv)");
}

PrimeFactorization parse_order(const std::string& text) {
  Int n = parse_int(text);
  if (n < 2) throw InvalidInput("N must be at least 2, got " + text);
  return factorize(n);
}

std::vector<Int> parse_list(const std::string& text) {
  std::vector<Int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_int(item));
  }
  return out;
}

int effective_cap(const Settings& s) {
  if (s.cap) return *s.cap;
  if (const char* env = std::getenv(kCapEnvVar); env != nullptr && *env != '\0') {
    Int v = parse_int(env);
    if (v < 0 || v > 64) throw InvalidInput(std::string(kCapEnvVar) + " must be in [0, 64]");
    return static_cast<int>(v);
  }
  return kDefaultBruteCap;
}

std::string factor_string(const PrimeFactorization& f) {
  std::string out;
  for (const auto& pp : f.factors()) {
    if (!out.empty()) out += " * ";
    out += to_string(pp.prime);
    if (pp.exponent > 1) out += "^" + std::to_string(pp.exponent);
  }
  return out;
}

ordered_json factors_json(const PrimeFactorization& f) {
  ordered_json j = ordered_json::array();
  for (const auto& pp : f.factors()) j.push_back({to_i64(pp.prime), pp.exponent});
  return j;
}

ordered_json ints_json(std::span<const Int> values) {
  ordered_json j = ordered_json::array();
  for (Int v : values) j.push_back(to_i64(v));
  return j;
}

ordered_json spectrum_json(const CanonicalSpectrum& s) {
  ordered_json j = ordered_json::array();
  for (const auto& e : s.pairs) j.push_back({to_i64(e.value), to_i64(e.multiplicity)});
  return j;
}

std::string spectrum_text(const CanonicalSpectrum& s) {
  std::string out;
  for (const auto& e : s.pairs) {
    if (!out.empty()) out += ' ';
    out += "(" + to_string(e.value) + "," + to_string(e.multiplicity) + ")";
  }
  return out;
}

std::string relation_text(std::span<const Int> values, const AdditiveRelation& rel) {
  auto side = [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) return std::string("0");
    std::string s;
    for (std::size_t i : idx) {
      if (!s.empty()) s += " + ";
      s += to_string(values[i]);
    }
    return s;
  };
  return side(rel.s1) + " = " + side(rel.s2);
}

// --- matrix ----------------------------------------------------------------

int cmd_matrix(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const CompactMatrix m = compact_matrix(f);
  if (format == Format::kJson) {
    ordered_json j;
    j["n"] = to_i64(f.value());
    j["factors"] = factors_json(f);
    j["index"] = ordered_json::array();
    for (const auto& idx : m.index()) j["index"].push_back(idx.exponents);
    j["rows"] = ordered_json::array();
    for (std::size_t r = 0; r < m.size(); ++r) {
      ordered_json row;
      row["label"] = m.index()[r].exponents;
      ordered_json entries = ordered_json::array();
      for (std::size_t c = 0; c < m.size(); ++c) entries.push_back(to_i64(m.entry(r, c)));
      row["entries"] = entries;
      row["multiplicity"] = to_i64(m.row_multiplicity(r));
      j["rows"].push_back(row);
    }
    out << j.dump() << '\n';
    return kExitEstablished;
  }
  if (format == Format::kCsv) {
    out << "row";
    for (const auto& idx : m.index()) out << ",\"" << idx.label() << '"';
    out << ",multiplicity\n";
    for (std::size_t r = 0; r < m.size(); ++r) {
      out << '"' << m.index()[r].label() << '"';
      for (std::size_t c = 0; c < m.size(); ++c) out << ',' << to_string(m.entry(r, c));
      out << ',' << to_string(m.row_multiplicity(r)) << '\n';
    }
    return kExitEstablished;
  }
  std::size_t width = 1;
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) width = std::max(width, to_string(m.entry(r, c)).size());
    width = std::max(width, m.index()[r].label().size());
  }
  auto pad = [&](const std::string& text) { return std::string(width + 1 - std::min(width, text.size()), ' ') + text; };
  out << "M(" << to_string(f.value()) << "), N = " << factor_string(f) << '\n';
  out << std::string(m.index()[0].label().size(), ' ') << " |";
  for (const auto& idx : m.index()) out << pad(idx.label());
  out << " | mult\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out << m.index()[r].label() << " |";
    for (std::size_t c = 0; c < m.size(); ++c) out << pad(to_string(m.entry(r, c)));
    out << " | x" << to_string(m.row_multiplicity(r)) << '\n';
  }
  return kExitEstablished;
}

// --- spectrum --------------------------------------------------------------

int cmd_spectrum(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const std::vector<Int> ds = parse_list(s.divisors);
  const SymbolSet symbols = SymbolSet::from_divisors(f, ds);
  const CanonicalSpectrum sp = spectrum(f, symbols);
  if (format == Format::kJson) {
    ordered_json j;
    j["n"] = to_i64(f.value());
    j["divisors"] = ints_json(symbols.divisors(f));
    j["spectrum"] = spectrum_json(sp);
    out << j.dump() << '\n';
  } else if (format == Format::kCsv) {
    out << "value,multiplicity\n";
    for (const auto& e : sp.pairs) out << to_string(e.value) << ',' << to_string(e.multiplicity) << '\n';
  } else {
    out << spectrum_text(sp) << '\n';
  }
  return kExitEstablished;
}

// --- nar -------------------------------------------------------------------

int cmd_nar(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const PhiVector pv = phi_vector(f);
  std::optional<Int> modulus;
  if (!s.modulus.empty()) modulus = parse_int(s.modulus);
  const auto rel = modulus ? has_nar_mod(pv.entries, *modulus) : has_nar(pv.entries);

  if (format == Format::kJson) {
    ordered_json j;
    j["n"] = to_i64(f.value());
    j["phi_vector"] = ints_json(pv.entries);
    j["modulus"] = modulus ? ordered_json(to_i64(*modulus)) : ordered_json(nullptr);
    if (rel) {
      ordered_json w;
      w["s1"] = rel->s1;
      w["s2"] = rel->s2;
      std::vector<Int> v1, v2;
      for (std::size_t i : rel->s1) v1.push_back(pv.entries[i]);
      for (std::size_t i : rel->s2) v2.push_back(pv.entries[i]);
      w["s1_values"] = ints_json(v1);
      w["s2_values"] = ints_json(v2);
      j["nar"] = w;
    } else {
      j["nar"] = nullptr;
    }
    out << j.dump() << '\n';
  } else if (format == Format::kCsv) {
    out << "side,index,value\n";
    if (rel) {
      for (std::size_t i : rel->s1) out << "s1," << i << ',' << to_string(pv.entries[i]) << '\n';
      for (std::size_t i : rel->s2) out << "s2," << i << ',' << to_string(pv.entries[i]) << '\n';
    }
  } else {
    out << "P(" << to_string(f.value()) << ") = {";
    for (std::size_t i = 0; i < pv.entries.size(); ++i) out << (i ? "," : "") << to_string(pv.entries[i]);
    out << "}\n";
    if (rel) {
      out << "NAR: " << relation_text(pv.entries, *rel);
      if (modulus) out << " (mod " << to_string(*modulus) << ")";
      out << '\n';
    } else {
      out << "NAR: none\n";
    }
  }
  return kExitEstablished;
}

// --- check / pairs ---------------------------------------------------------

int exit_for(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kIsapProven:
    case VerdictStatus::kIsapBruteVerified: return kExitEstablished;
    case VerdictStatus::kCounterexample: return kExitCounterexample;
    case VerdictStatus::kUnknown: return kExitUnknown;
  }
  return kExitUnknown;
}

void render_verdict(const PrimeFactorization& f, const IsapVerdict& v, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    ordered_json j;
    j["n"] = to_i64(f.value());
    j["factors"] = factors_json(f);
    j["status"] = status_name(v.status);
    j["method"] = v.method;
    j["distinct_spectra"] = v.distinct_spectra ? ordered_json(*v.distinct_spectra) : ordered_json(nullptr);
    j["evidence"] = v.evidence;
    if (v.counterexample) {
      ordered_json pair;
      pair["a"] = ints_json(v.counterexample->a.divisors(f));
      pair["b"] = ints_json(v.counterexample->b.divisors(f));
      pair["spectrum"] = spectrum_json(v.counterexample->shared_spectrum);
      j["counterexample"] = pair;
    } else {
      j["counterexample"] = nullptr;
    }
    out << j.dump() << '\n';
    return;
  }
  if (format == Format::kCsv) {
    out << "n,status,method,distinct_spectra\n";
    out << to_string(f.value()) << ',' << status_name(v.status) << ',' << v.method << ','
        << (v.distinct_spectra ? std::to_string(*v.distinct_spectra) : std::string()) << '\n';
    return;
  }
  out << "N = " << to_string(f.value()) << " = " << factor_string(f) << '\n';
  out << "status: " << status_name(v.status) << '\n';
  out << "method: " << v.method << '\n';
  if (v.distinct_spectra) out << "distinct spectra: " << *v.distinct_spectra << '\n';
  if (v.counterexample) {
    auto list = [&](const SymbolSet& set) {
      std::string text;
      for (Int d : set.divisors(f)) text += (text.empty() ? "" : ",") + to_string(d);
      return "{" + text + "}";
    };
    out << "cospectral pair: D = " << list(v.counterexample->a) << ", D' = " << list(v.counterexample->b) << '\n';
    out << "shared spectrum: " << spectrum_text(v.counterexample->shared_spectrum) << '\n';
  }
  if (!v.evidence.empty()) {
    out << "evidence:\n";
    for (const auto& e : v.evidence) out << "  " << e << '\n';
  }
}

int cmd_check(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const IsapVerdict v = classify(f, {effective_cap(s), s.jobs});
  render_verdict(f, v, format, out);
  return exit_for(v.status);
}

int cmd_pairs(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const IsapVerdict v = brute_force_search(f, {effective_cap(s), s.jobs});
  render_verdict(f, v, format, out);
  return exit_for(v.status);
}

// --- rownars ---------------------------------------------------------------

int cmd_rownars(const Settings& s, std::ostream& out) {
  const Format format = parse_format(s.format);
  const PrimeFactorization f = parse_order(s.n);
  const SymbolSet a = SymbolSet::from_divisors(f, parse_list(s.divisors));
  const SymbolSet b = SymbolSet::from_divisors(f, parse_list(s.divisors_b));
  const CompactMatrix m = compact_matrix(f);
  const RowMatching rm = extract_row_nars(f, a, b);
  const auto& weights = m.row_multiplicities();

  if (format == Format::kJson) {
    ordered_json j;
    j["n"] = to_i64(f.value());
    j["fixed_rows"] = ordered_json::array();
    for (std::size_t r : rm.fixed_rows) j["fixed_rows"].push_back(m.index()[r].exponents);
    j["relations"] = ordered_json::array();
    for (const auto& rel : rm.relations) {
      ordered_json x;
      x["value"] = to_i64(rel.value);
      x["left"] = ordered_json::array();
      x["right"] = ordered_json::array();
      for (std::size_t r : rel.relation.s1) x["left"].push_back(m.index()[r].exponents);
      for (std::size_t r : rel.relation.s2) x["right"].push_back(m.index()[r].exponents);
      j["relations"].push_back(x);
    }
    out << j.dump() << '\n';
    return kExitEstablished;
  }
  if (format == Format::kCsv) {
    out << "kind,value,left,right\n";
    for (std::size_t r : rm.fixed_rows) out << "fixed,," << '"' << m.index()[r].label() << "\",\"" << m.index()[r].label() << "\"\n";
    for (const auto& rel : rm.relations) {
      auto labels = [&](const std::vector<std::size_t>& rows) {
        std::string t;
        for (std::size_t r : rows) t += (t.empty() ? "" : " ") + m.index()[r].label();
        return t;
      };
      out << "relation," << to_string(rel.value) << ",\"" << labels(rel.relation.s1) << "\",\""
          << labels(rel.relation.s2) << "\"\n";
    }
    return kExitEstablished;
  }
  out << "fixed rows:";
  for (std::size_t r : rm.fixed_rows) out << ' ' << m.index()[r].label();
  out << '\n';
  if (rm.relations.empty()) out << "row NARs: none\n";
  for (const auto& rel : rm.relations) {
    out << "value " << to_string(rel.value) << ": " << relation_text(weights, rel.relation) << '\n';
  }
  return kExitEstablished;
}

// --- scan ------------------------------------------------------------------

std::vector<Int> scan_targets(const Settings& s) {
  std::vector<Int> ns;
  if (!s.p2q2_prime.empty()) {
    if (!s.lo.empty()) throw InvalidInput("scan: give either <lo> <hi> or --p2q2, not both");
    const Int p = parse_int(s.p2q2_prime);
    if (!is_prime(p)) throw InvalidInput("--p2q2 expects a prime");
    for (Int q : primes_in(p + 1, checked_mul(checked_mul(p, p), p) - 1)) {
      ns.push_back(checked_mul(checked_mul(p, p), checked_mul(q, q)));
    }
    return ns;
  }
  if (s.lo.empty() || s.hi.empty()) throw InvalidInput("scan needs <lo> <hi> or --p2q2 <p>");
  const Int lo = parse_int(s.lo);
  const Int hi = parse_int(s.hi);
  if (lo < 2 || lo > hi) throw InvalidInput("scan needs 2 <= lo <= hi");
  if (hi - lo > 100'000'000) throw GuardExceeded("scan range wider than 1e8");
  for (Int n = lo; n <= hi; ++n) ns.push_back(n);
  return ns;
}

std::set<std::int64_t> recorded_orders(const std::string& path, std::ostream& err, bool& ends_with_newline) {
  std::set<std::int64_t> seen;
  ends_with_newline = true;
  std::ifstream in(path, std::ios::binary);
  if (!in) return seen;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ends_with_newline = content.empty() || content.back() == '\n';
  std::stringstream ss(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      seen.insert(parse_record(line).n);
    } catch (const InvalidInput& e) {
      err << "warning: " << path << ":" << line_no << ": skipping unreadable record\n";
    }
  }
  return seen;
}

int cmd_scan(const Settings& s, std::ostream& out, std::ostream& err) {
  if (s.out_path.empty()) throw InvalidInput("scan requires --out <file>");
  const int cap = effective_cap(s);
  std::vector<Int> targets = scan_targets(s);

  std::set<std::int64_t> done;
  bool ends_with_newline = true;
  if (s.resume) done = recorded_orders(s.out_path, err, ends_with_newline);
  std::vector<Int> todo;
  for (Int n : targets) {
    if (!done.count(to_i64(n))) todo.push_back(n);
  }

  std::ofstream file(s.out_path, s.resume ? std::ios::app : std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << s.out_path << '\n';
    return kExitUsage;
  }
  if (!ends_with_newline) file << '\n';

  struct Slot {
    std::string line;
    VerdictStatus status = VerdictStatus::kUnknown;
    std::string method;
  };
  std::vector<std::optional<Slot>> slots(todo.size());
  std::mutex mu;
  std::size_t next_to_write = 0;
  std::atomic<std::size_t> next_job{0};
  std::map<std::string, std::size_t> method_counts;
  std::size_t counterexamples = 0, unknowns = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next_job.fetch_add(1);
      if (k >= todo.size()) return;
      const auto start = std::chrono::steady_clock::now();
      const PrimeFactorization f = factorize(todo[k]);
      IsapVerdict v;
      try {
        v = classify(f, {cap, 1});
      } catch (const std::exception& e) {
        v.n = f.value();
        v.status = VerdictStatus::kUnknown;
        v.method = "error";
      }
      const auto elapsed =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      Slot slot{render_record(make_record(f, v, elapsed, version())), v.status, v.method};

      std::lock_guard lock(mu);
      slots[k] = std::move(slot);
      while (next_to_write < slots.size() && slots[next_to_write]) {
        const Slot& ready = *slots[next_to_write];
        file << ready.line << '\n';
        ++method_counts[ready.method];
        if (ready.status == VerdictStatus::kCounterexample) ++counterexamples;
        if (ready.status == VerdictStatus::kUnknown) ++unknowns;
        slots[next_to_write].reset();
        ++next_to_write;
      }
      file.flush();
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned jobs = std::max(1u, std::min<unsigned>(s.jobs, static_cast<unsigned>(std::max<std::size_t>(1, todo.size()))));
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }
  if (!file) {
    err << "error: write to " << s.out_path << " failed\n";
    return kExitUsage;
  }

  out << "scan: " << todo.size() << " new records, " << targets.size() - todo.size() << " already present; "
      << counterexamples << " counterexamples, " << unknowns << " unknown\n";
  for (const auto& [method, count] : method_counts) out << "  " << method << ": " << count << '\n';
  if (counterexamples > 0) return kExitCounterexample;
  if (unknowns > 0) return kExitUnknown;
  return kExitEstablished;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact spectra, additive relations and ISAP verdicts for integral circulant graphs", "icg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));
  Settings s;

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", s.seed, "rejected: the search is deterministic"); };
  add_seed(&app);
  auto add_format = [&](CLI::App* sub) { sub->add_option("--format", s.format, "human, json or csv"); };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--cap", s.cap, std::string("max tau(N)-1 for brute force (env ") + kCapEnvVar + ", default 24)");
    sub->add_option("--jobs", s.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* matrix = app.add_subcommand("matrix", "print the compact matrix M(N)");
  matrix->add_option("n", s.n, "order N")->required();
  add_format(matrix);

  auto* spec = app.add_subcommand("spectrum", "spectrum of ICG_N(D)");
  spec->add_option("n", s.n, "order N")->required();
  spec->add_option("-d,--divisors", s.divisors, "comma-separated proper divisors");
  add_format(spec);

  auto* nar = app.add_subcommand("nar", "search P(N) for a nontrivial additive relation");
  nar->add_option("n", s.n, "order N")->required();
  nar->add_option("--mod", s.modulus, "compare sums modulo this value");
  add_format(nar);

  auto* check = app.add_subcommand("check", "ISAP verdict for N");
  check->add_option("n", s.n, "order N")->required();
  add_search(check);
  add_format(check);

  auto* pairs = app.add_subcommand("pairs", "exhaustive cospectral-pair search for N");
  pairs->add_option("n", s.n, "order N")->required();
  add_search(pairs);
  add_format(pairs);

  auto* rownars = app.add_subcommand("rownars", "row relations induced by two cospectral symbol sets");
  rownars->add_option("n", s.n, "order N")->required();
  rownars->add_option("-a", s.divisors, "first divisor set")->required();
  rownars->add_option("-b", s.divisors_b, "second divisor set")->required();
  add_format(rownars);

  auto* scan = app.add_subcommand("scan", "classify a range of N, one JSONL record each");
  scan->add_option("lo", s.lo, "first N");
  scan->add_option("hi", s.hi, "last N");
  scan->add_option("--out", s.out_path, "JSONL output file")->required();
  scan->add_flag("--resume", s.resume, "skip N already present in the output file");
  scan->add_option("--p2q2", s.p2q2_prime, "sweep N = p^2 q^2 over primes p < q < p^3");
  add_search(scan);

  for (auto* sub : {matrix, spec, nar, check, pairs, rownars, scan}) add_seed(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!s.seed.empty() || app.count("--seed") > 0) {
      throw InvalidInput("--seed is not accepted: the search is deterministic");
    }
    for (auto* sub : {matrix, spec, nar, check, pairs, rownars, scan}) {
      if (sub->count("--seed") > 0) throw InvalidInput("--seed is not accepted: the search is deterministic");
    }
    if (*matrix) return cmd_matrix(s, out);
    if (*spec) return cmd_spectrum(s, out);
    if (*nar) return cmd_nar(s, out);
    if (*check) return cmd_check(s, out);
    if (*pairs) return cmd_pairs(s, out);
    if (*rownars) return cmd_rownars(s, out);
    if (*scan) return cmd_scan(s, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArithmeticOverflow& e) {
    err << "arithmetic error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace icg::cli
