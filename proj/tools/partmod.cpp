// Command-line front end: single computations (period, density), golden
// table reproduction, r-count formula cross-checks, bound-check suites and
// question sweeps. Exit codes: 0 success, 1 failed mathematical check
// (a bug), 2 usage error, 3 resource limit.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "partmod/cache.hpp"
#include "partmod/concordance.hpp"
#include "partmod/density.hpp"
#include "partmod/errors.hpp"
#include "partmod/experiments.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/mary.hpp"
#include "partmod/numtheory.hpp"
#include "partmod/periodicity.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"
#include "partmod/tables.hpp"

namespace {

using partmod::json;

constexpr int kExitOk = 0;
constexpr int kExitTheorem = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct CommonFlags {
  std::string format = "table";  // "json" | "csv" | "table"
  std::string out;
  std::uint64_t memory_cap = std::uint64_t(2) << 30;
  std::string cache_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "also write the rendered output to this file");
  cmd->add_option("--memory-cap", f.memory_cap, "window memory cap in bytes")
      ->capture_default_str();
  cmd->add_option("--cache-dir", f.cache_dir,
                  "residue-window cache directory (env PARTMOD_CACHE_DIR)");
}

partmod::ComputeOptions compute_options(const CommonFlags& f) {
  partmod::ComputeOptions opts;
  opts.memory_cap = f.memory_cap;
  return opts;
}

std::unique_ptr<partmod::WindowCache> open_cache(const CommonFlags& f) {
  std::string dir = f.cache_dir;
  if (dir.empty())
    if (const char* env = std::getenv("PARTMOD_CACHE_DIR")) dir = env;
  if (dir.empty()) return nullptr;
  return std::make_unique<partmod::WindowCache>(dir);
}

// stdout and --out receive exactly the same bytes.
void emit(const CommonFlags& f, const std::string& rendered) {
  std::cout << rendered;
  if (!f.out.empty()) {
    std::ofstream os(f.out, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write output file " + f.out);
    os << rendered;
  }
}

std::string join_u32(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// ---- period ---------------------------------------------------------------

int run_period(const std::string& seq_spec, std::uint32_t k, std::uint32_t m, bool no_verify,
               const CommonFlags& flags) {
  const partmod::PartSequence seq = partmod::PartSequence::parse(seq_spec);
  const partmod::PeriodCert cert = no_verify
                                       ? partmod::fundamental_period(seq, k, m)
                                       : partmod::certify(seq, k, m, compute_options(flags));
  std::string rendered;
  if (flags.format == "json") {
    rendered = partmod::to_json(cert).dump(2) + "\n";
  } else if (flags.format == "csv") {
    std::ostringstream os;
    os << "seq,k,modulus,fundamental_period,coarse_bound,verification\n";
    os << cert.seq_spec << ',' << cert.k << ',' << cert.modulus << ','
       << cert.fundamental_period.get_str() << ',' << cert.coarse_bound.get_str() << ','
       << cert.verification << '\n';
    rendered = os.str();
  } else {
    std::ostringstream os;
    os << "seq " << cert.seq_spec << "  k " << cert.k << "  modulus " << cert.modulus << '\n';
    os << "fundamental period: " << cert.fundamental_period.get_str() << '\n';
    os << "coarse period bound: " << cert.coarse_bound.get_str() << '\n';
    for (const auto& pp : cert.per_prime)
      os << "  prime " << pp.prime << ": alpha " << pp.alpha << ", L " << pp.p_free_lcm.get_str()
         << ", e-values [" << join_u32(pp.e_values) << "], power-sum " << pp.power_sum.get_str()
         << ", b " << pp.b << ", period " << pp.period.get_str() << '\n';
    os << "verification: " << cert.verification << '\n';
    rendered = os.str();
  }
  emit(flags, rendered);
  return kExitOk;
}

// ---- density --------------------------------------------------------------

int run_density(const std::string& seq_spec, std::uint32_t k, std::uint32_t m,
                std::optional<std::uint32_t> klass, const CommonFlags& flags) {
  if (klass && *klass >= m)
    throw std::invalid_argument("--i must be a residue class below the modulus");
  const partmod::PartSequence seq = partmod::PartSequence::parse(seq_spec);
  const auto cache = open_cache(flags);
  const partmod::DensityReport rep =
      partmod::cached_density_report(seq, k, m, compute_options(flags), cache.get());
  std::string rendered;
  if (flags.format == "json") {
    json doc = partmod::to_json(rep);
    if (klass) {
      doc["selected_class"] = *klass;
      doc["selected_density"] = partmod::json_rational(rep.densities[*klass]);
    }
    rendered = doc.dump(2) + "\n";
  } else if (flags.format == "csv") {
    std::ostringstream os;
    os << "seq,k,modulus,class,count,density\n";
    for (std::uint32_t i = 0; i < m; ++i) {
      if (klass && *klass != i) continue;
      os << rep.seq_spec << ',' << rep.k << ',' << rep.modulus << ',' << i << ','
         << rep.counts[i] << ',' << rep.densities[i].str() << '\n';
    }
    rendered = os.str();
  } else if (klass) {
    rendered = rep.densities[*klass].str() + "\n";
  } else {
    std::ostringstream os;
    os << "seq " << rep.seq_spec << "  k " << rep.k << "  modulus " << rep.modulus << "  period "
       << rep.period << '\n';
    for (std::uint32_t i = 0; i < m; ++i)
      os << "class " << i << ": " << rep.densities[i].str() << "  (count " << rep.counts[i]
         << ")\n";
    os << "max zero run " << rep.max_zero_run << " (limit " << rep.zero_run_limit << ")\n";
    rendered = os.str();
  }
  emit(flags, rendered);
  return kExitOk;
}

// ---- table ----------------------------------------------------------------

int run_table(int id, const CommonFlags& flags) {
  const auto cache = open_cache(flags);
  const partmod::TableResult result =
      partmod::reproduce_table(id, compute_options(flags), cache.get());
  std::string rendered;
  if (flags.format == "json")
    rendered = partmod::to_json(result).dump(2) + "\n";
  else if (flags.format == "csv")
    rendered = partmod::render_table_csv(result);
  else
    rendered = partmod::render_table_text(result);
  emit(flags, rendered);
  return result.all_match ? kExitOk : kExitTheorem;
}

// ---- rcount ---------------------------------------------------------------

struct RMethodResult {
  std::string method;
  std::string status;  // "ok" | "not-applicable" | "resource-limited"
  std::string value;   // decimal, when ok
  std::string note;
};

RMethodResult eval_rmethod(const std::string& method, std::uint32_t i, std::uint32_t m,
                           std::uint32_t k) {
  RMethodResult r;
  r.method = method;
  // The special-form methods depend on i only through gcd(i, m), so reduce
  // first; class 0 stays 0 (its gcd is m itself).
  const auto g = static_cast<std::uint32_t>(i == 0 ? 0 : std::gcd<std::uint64_t>(i, m));
  try {
    mpz_class value;
    if (method == "brute") {
      value = partmod::r_count_bruteforce(i, m, k);
    } else if (method == "recurrence") {
      value = partmod::r_count_recurrence(i, m, k);
    } else if (method == "divisor") {
      if (k < 2) throw partmod::not_applicable("divisor form needs k >= 2");
      if (g == 0) throw partmod::not_applicable("class 0 has no divisor form; use recurrence");
      value = partmod::r_count_divisor_form(g, m, k);
      if (g != i) r.note = "via gcd reduction to class " + std::to_string(g);
    } else {  // closed
      if (k < 2) throw partmod::not_applicable("closed form needs k >= 2");
      if (g == 0) throw partmod::not_applicable("class 0 has no closed form; use recurrence");
      value = partmod::r_count_closed_form(g, m, k);
      if (g != i) r.note = "via gcd reduction to class " + std::to_string(g);
    }
    r.status = "ok";
    r.value = value.get_str();
  } catch (const partmod::not_applicable& e) {
    r.status = "not-applicable";
    r.note = e.what();
  } catch (const partmod::resource_error& e) {
    r.status = "resource-limited";
    r.note = e.what();
  }
  return r;
}

int run_rcount(std::uint32_t i, std::uint32_t m, std::uint32_t k, const std::string& method,
               const CommonFlags& flags) {
  if (i >= m) throw std::invalid_argument("--i must be a residue class below the modulus");
  std::vector<std::string> methods;
  if (method == "all")
    methods = {"brute", "recurrence", "divisor", "closed"};
  else
    methods = {method};
  std::vector<RMethodResult> results;
  for (const auto& name : methods) results.push_back(eval_rmethod(name, i, m, k));

  if (methods.size() == 1 && results[0].status == "not-applicable") {
    emit(flags, results[0].note + "\n");
    return kExitUsage;
  }
  if (methods.size() == 1 && results[0].status == "resource-limited")
    throw partmod::resource_error(results[0].note, 0);

  bool agree = true;
  std::string first_value;
  for (const auto& r : results)
    if (r.status == "ok") {
      if (first_value.empty())
        first_value = r.value;
      else
        agree = agree && r.value == first_value;
    }

  std::string rendered;
  if (flags.format == "json") {
    json doc{{"i", i}, {"m", m}, {"k", k}};
    json per = json::object();
    for (const auto& r : results) {
      json one{{"status", r.status}};
      if (r.status == "ok") one["value"] = r.value;
      if (!r.note.empty()) one["note"] = r.note;
      per[r.method] = std::move(one);
    }
    doc["methods"] = std::move(per);
    doc["agree"] = agree;
    rendered = doc.dump(2) + "\n";
  } else if (flags.format == "csv") {
    std::ostringstream os;
    os << "i,m,k,method,status,value,note\n";
    for (const auto& r : results)
      os << i << ',' << m << ',' << k << ',' << r.method << ',' << r.status << ',' << r.value
         << ',' << r.note << '\n';
    rendered = os.str();
  } else {
    std::ostringstream os;
    os << "r(i=" << i << ", m=" << m << ", k=" << k << ")\n";
    for (const auto& r : results) {
      os << "  " << r.method << ": ";
      if (r.status == "ok")
        os << r.value;
      else
        os << r.status << " (" << r.note << ')';
      os << '\n';
    }
    if (methods.size() > 1)
      os << (agree ? "AGREE: all applicable methods match\n"
                   : "DISAGREE: applicable methods differ\n");
    rendered = os.str();
  }
  emit(flags, rendered);
  return agree ? kExitOk : kExitTheorem;
}

// ---- check ----------------------------------------------------------------

int run_check(const std::string& seq_spec, std::uint32_t k_max, std::uint32_t m,
              const CommonFlags& flags) {
  const partmod::PartSequence seq = partmod::PartSequence::parse(seq_spec);
  const partmod::ComputeOptions opts = compute_options(flags);
  std::ostringstream text;
  json rows = json::array();
  bool all_pass = true;
  text << "bound checks for seq " << seq.spec() << ", modulus " << m << ", k = 1.." << k_max
       << '\n';
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    const partmod::DensityReport rep = partmod::density_report(seq, k, m, opts, true);
    const partmod::Verdict* checks[] = {&rep.checks.zero_run, &rep.checks.nonzero_density,
                                        &rep.checks.consecutive_odd, &rep.checks.parity_balance};
    for (const partmod::Verdict* v : checks) {
      if (v->status == "not-applicable") continue;
      text << "  k=" << k << "  " << v->name << "  "
           << (v->status == "pass" ? "PASS" : v->status) << "  " << v->detail << '\n';
      rows.push_back({{"k", k}, {"check", v->name}, {"status", v->status}, {"detail", v->detail}});
      all_pass = all_pass && (v->status == "pass" || v->status == "skipped");
    }
  }
  text << (all_pass ? "PASS" : "FAIL") << '\n';
  if (flags.format == "json") {
    emit(flags, json{{"seq", seq.spec()}, {"modulus", m}, {"k_max", k_max},
                     {"checks", std::move(rows)}, {"all_pass", all_pass}}
                    .dump(2) +
                    "\n");
  } else if (flags.format == "csv") {
    std::ostringstream os;
    os << "seq,modulus,k,check,status,detail\n";
    for (const auto& row : rows) {
      std::string detail = row["detail"].get<std::string>();
      for (char& c : detail)
        if (c == ',') c = ';';
      os << seq.spec() << ',' << m << ',' << row["k"] << ',' << row["check"].get<std::string>()
         << ',' << row["status"].get<std::string>() << ',' << detail << '\n';
    }
    emit(flags, os.str());
  } else {
    emit(flags, text.str());
  }
  return all_pass ? kExitOk : kExitTheorem;
}

// ---- sweep ----------------------------------------------------------------

int run_sweep(const std::string& question, std::uint32_t d, std::uint32_t m, std::uint32_t k_min,
              std::uint32_t k_max, std::vector<std::string> seq_specs,
              const std::string& prime_support, unsigned workers, std::string out_base,
              const CommonFlags& flags) {
  const auto cache = open_cache(flags);
  partmod::SweepOptions opts;
  opts.compute = compute_options(flags);
  opts.cache = cache.get();
  opts.workers = workers;
  if (out_base.empty()) out_base = "sweep-" + question;
  const std::filesystem::path jsonl = out_base + ".jsonl";
  const std::filesystem::path csv = out_base + ".csv";
  opts.resume_jsonl = jsonl;

  std::vector<partmod::PartSequence> seqs;
  if (seq_specs.empty()) {
    if (question == "7.3")
      seq_specs = {"triangular", "pentagonal", "hexagonal", "squares-plus-one"};
    else if (question == "7.4")
      seq_specs = {"list:1", "list:5", "power:2"};
  }
  for (const auto& s : seq_specs) seqs.push_back(partmod::PartSequence::parse(s));

  partmod::SweepResult result;
  if (question == "7.1")
    result = partmod::sweep_q71(d, m, k_max, opts);
  else if (question == "7.2")
    result = partmod::sweep_q72(d, m, k_max, opts);
  else if (question == "7.3")
    result = partmod::sweep_q73(seqs, k_max, prime_support, opts);
  else
    result = partmod::search_q74(seqs, k_min, k_max, m, opts);

  partmod::write_sweep_jsonl(result, jsonl);
  partmod::write_sweep_csv(result, csv);

  if (flags.format == "json") {
    emit(flags, partmod::to_json(result).dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "question " << result.question << "  cells " << result.cells.size() << '\n';
    for (const auto& c : result.cells)
      os << "  seq " << c.seq << "  k " << c.k << "  m " << c.m
         << (c.control ? "  [control]" : "") << "  " << c.status << '\n';
    os << "verdict: " << result.verdict << '\n';
    os << "wrote " << jsonl.string() << " and " << csv.string() << '\n';
    emit(flags, os.str());
  }
  return kExitOk;  // observations are never failures
}

// ---- concordance ----------------------------------------------------------

int run_concordance(bool verify, const std::string& write_path, const CommonFlags& flags) {
  const std::string page = partmod::render_concordance_markdown();
  if (!write_path.empty()) {
    std::ofstream os(write_path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + write_path);
    os << page;
  }
  if (verify) {
    const partmod::ConcordanceVerdict v = partmod::verify_concordance();
    if (!v.ok) {
      for (const auto& p : v.problems) std::cerr << "concordance: " << p << '\n';
      return kExitTheorem;
    }
    emit(flags, "concordance: all entries map to existing operations\n");
    return kExitOk;
  }
  emit(flags, page);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact periods and residue-class densities of restricted multi-color partition "
               "counts"};
  app.require_subcommand(1);

  CommonFlags flags;

  // period
  auto* period = app.add_subcommand("period", "fundamental period of p(n,k) mod m");
  std::string p_seq;
  std::uint32_t p_k = 1, p_m = 2;
  bool p_no_verify = false;
  period->add_option("--seq", p_seq, "part sequence, e.g. power:2, triangular, mary:3, list:1,2")
      ->required();
  period->add_option("--k", p_k, "number of parts")->required();
  period->add_option("--m", p_m, "modulus")->required();
  period->add_flag("--no-verify", p_no_verify, "skip the window confirmation scan");
  add_common(period, flags);

  // density
  auto* density = app.add_subcommand("density", "exact residue-class densities over one period");
  std::string d_seq;
  std::uint32_t d_k = 1, d_m = 2;
  std::optional<std::uint32_t> d_i;
  density->add_option("--seq", d_seq, "part sequence")->required();
  density->add_option("--k", d_k, "number of parts")->required();
  density->add_option("--m", d_m, "modulus")->required();
  density->add_option("--i", d_i, "single residue class to report");
  add_common(density, flags);

  // table
  auto* table = app.add_subcommand("table", "reproduce a pinned density table");
  int t_id = 0;
  table->add_option("--table", t_id, "table id")->required()->check(CLI::IsMember({1, 2, 3}));
  add_common(table, flags);

  // rcount
  auto* rcount = app.add_subcommand("rcount", "solution counts r(i,m,k) for the geometric parts");
  std::uint32_t r_i = 0, r_m = 2, r_k = 1;
  std::string r_method = "all";
  rcount->add_option("--i", r_i, "residue class")->required();
  rcount->add_option("--m", r_m, "modulus")->required();
  rcount->add_option("--k", r_k, "number of parts")->required();
  rcount->add_option("--method", r_method, "computation method")
      ->check(CLI::IsMember({"brute", "recurrence", "divisor", "closed", "all"}))
      ->capture_default_str();
  add_common(rcount, flags);

  // check
  auto* check = app.add_subcommand("check", "run every applicable bound check over k = 1..k-max");
  std::string c_seq;
  std::uint32_t c_kmax = 4, c_m = 2;
  check->add_option("--seq", c_seq, "part sequence")->required();
  check->add_option("--k-max", c_kmax, "largest k to check")->required();
  check->add_option("--m", c_m, "modulus")->required();
  add_common(check, flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evidence sweep for one of the open questions");
  std::string s_question, s_prime_support = "unknown", s_out;
  std::uint32_t s_d = 2, s_m = 2, s_kmin = 1, s_kmax = 6;
  std::vector<std::string> s_seqs;
  unsigned s_workers = 1;
  sweep->add_option("--question", s_question, "which question to probe")
      ->required()
      ->check(CLI::IsMember({"7.1", "7.2", "7.3", "7.4"}));
  sweep->add_option("--d", s_d, "power degree for questions 7.1/7.2 (parts i^d)")
      ->capture_default_str();
  sweep->add_option("--m", s_m, "modulus (7.1, 7.2, 7.4)")->capture_default_str();
  sweep->add_option("--k-min", s_kmin, "first k (7.4)")->capture_default_str();
  sweep->add_option("--k-max", s_kmax, "last k")->capture_default_str();
  sweep->add_option("--seq", s_seqs, "part sequences for 7.3/7.4 (repeatable)");
  sweep->add_option("--prime-support", s_prime_support,
                    "user-supplied metadata for 7.3: is the prime support of the sequence "
                    "infinite?")
      ->check(CLI::IsMember({"infinite", "finite", "unknown"}))
      ->capture_default_str();
  sweep->add_option("--workers", s_workers, "concurrent grid cells")->capture_default_str();
  sweep->add_option("--sweep-out", s_out, "output basename (default sweep-<question>)");
  add_common(sweep, flags);

  // concordance
  auto* conc = app.add_subcommand("concordance", "result-to-operation concordance page");
  bool conc_verify = false;
  std::string conc_write;
  conc->add_flag("--verify", conc_verify, "check the mapping instead of printing it");
  conc->add_option("--write", conc_write, "write the markdown page to this path");
  add_common(conc, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*period) return run_period(p_seq, p_k, p_m, p_no_verify, flags);
    if (*density) return run_density(d_seq, d_k, d_m, d_i, flags);
    if (*table) return run_table(t_id, flags);
    if (*rcount) return run_rcount(r_i, r_m, r_k, r_method, flags);
    if (*check) return run_check(c_seq, c_kmax, c_m, flags);
    if (*sweep)
      return run_sweep(s_question, s_d, s_m, s_kmin, s_kmax, s_seqs, s_prime_support, s_workers,
                       s_out, flags);
    if (*conc) return run_concordance(conc_verify, conc_write, flags);
  } catch (const partmod::theorem_violation& e) {
    std::cerr << "mathematical check failed (this is a bug): " << e.what() << '\n';
    return kExitTheorem;
  } catch (const partmod::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const partmod::overflow_error& e) {
    std::cerr << "value out of range: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
