#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partmod/cache.hpp"
#include "partmod/density.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/rational.hpp"
#include "partmod/sequences.hpp"

// Structured sweeps probing open questions about the densities: evidence
// gathering only, never assertions. Per-cell status vocabulary:
//   - "consistent":   the cell's exact value equals the conjectured one
//   - "inconsistent": the cell contradicts an exact claim (symmetry case)
//   - "inconclusive": finite data that neither confirms nor contradicts
//   - "resource-limited": skipped, with the error recorded
// The overall verdict is the worst cell: any inconsistency names its
// parameters; otherwise any exact hit counts as consistent; otherwise
// inconclusive. Every density comes from the standard report path, so sweep
// cells always equal standalone computations.

namespace partmod {

struct SweepCell {
  std::string seq;
  std::uint32_t k = 0;
  std::uint32_t m = 0;
  bool control = false;  // recorded alongside but excluded from the verdict
  std::string status;
  json payload;
};

struct SweepResult {
  std::string question;  // "7.1" | "7.2" | "7.3" | "7.4"
  json params;
  std::vector<SweepCell> cells;
  std::string verdict;
};

namespace detail {

struct SweepJob {
  std::string seq_spec;
  std::uint32_t k = 0;
  std::uint32_t m = 0;
  bool control = false;
};

inline std::string cell_key(const std::string& question, const std::string& seq, std::uint32_t k,
                            std::uint32_t m) {
  return question + "|" + seq + "|" + std::to_string(k) + "|" + std::to_string(m);
}

inline json cell_to_line(const std::string& question, const SweepCell& c) {
  json line{{"question", question}, {"seq", c.seq}, {"k", c.k},
            {"m", c.m},             {"control", c.control}, {"status", c.status}};
  for (const auto& [key, value] : c.payload.items()) line[key] = value;
  return line;
}

inline SweepCell cell_from_line(const json& line) {
  SweepCell c;
  c.seq = line.at("seq").get<std::string>();
  c.k = line.at("k").get<std::uint32_t>();
  c.m = line.at("m").get<std::uint32_t>();
  c.control = line.value("control", false);
  c.status = line.at("status").get<std::string>();
  c.payload = line;
  for (const char* envelope : {"question", "seq", "k", "m", "control", "status"})
    c.payload.erase(envelope);
  return c;
}

// Previously written cells, keyed for reuse so reruns extend rather than
// recompute. Unreadable files or lines are simply ignored.
inline std::map<std::string, SweepCell> load_sweep_cells(const std::filesystem::path& jsonl,
                                                         const std::string& question) {
  std::map<std::string, SweepCell> cells;
  std::ifstream is(jsonl);
  if (!is) return cells;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      const json doc = json::parse(line);
      if (doc.value("question", "") != question) continue;
      SweepCell c = cell_from_line(doc);
      if (c.status == "resource-limited") continue;  // retry these
      cells[cell_key(question, c.seq, c.k, c.m)] = std::move(c);
    } catch (...) {
      continue;
    }
  }
  return cells;
}

// Runs jobs with at most `workers` in flight; assembly order is the job
// order, never completion order.
inline std::vector<SweepCell> run_jobs(const std::vector<SweepJob>& jobs,
                                       const std::function<SweepCell(const SweepJob&)>& compute,
                                       const std::map<std::string, SweepCell>& existing,
                                       const std::string& question, unsigned workers) {
  std::vector<SweepCell> cells(jobs.size());
  std::vector<std::size_t> todo;
  for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
    const auto hit = existing.find(cell_key(question, jobs[idx].seq_spec, jobs[idx].k, jobs[idx].m));
    if (hit != existing.end())
      cells[idx] = hit->second;
    else
      todo.push_back(idx);
  }
  if (workers < 1) workers = 1;
  for (std::size_t begin = 0; begin < todo.size(); begin += workers) {
    const std::size_t end = std::min(begin + workers, todo.size());
    std::vector<std::future<SweepCell>> batch;
    batch.reserve(end - begin);
    for (std::size_t j = begin; j < end; ++j)
      batch.push_back(std::async(std::launch::async, compute, std::cref(jobs[todo[j]])));
    for (std::size_t j = begin; j < end; ++j) cells[todo[j]] = batch[j - begin].get();
  }
  return cells;
}

inline std::string overall_verdict(const std::vector<SweepCell>& cells) {
  for (const SweepCell& c : cells)
    if (!c.control && c.status == "inconsistent")
      return "inconsistent-at-(seq=" + c.seq + ",k=" + std::to_string(c.k) +
             ",m=" + std::to_string(c.m) + ")";
  for (const SweepCell& c : cells)
    if (!c.control && c.status == "consistent") return "consistent";
  return "inconclusive";
}

inline SweepCell resource_limited_cell(const SweepJob& job, const resource_error& e) {
  return SweepCell{job.seq_spec, job.k, job.m, job.control, "resource-limited",
                   json{{"error", e.what()}}};
}

// Explicit lists run out of parts; grid cells past the end are simply not
// generated rather than erroring the whole sweep.
inline bool has_prefix(const PartSequence& seq, std::uint32_t k) {
  try {
    (void)seq.prefix(k);
    return true;
  } catch (const std::out_of_range&) {
    return false;
  }
}

}  // namespace detail

struct SweepOptions {
  ComputeOptions compute;
  const WindowCache* cache = nullptr;
  unsigned workers = 1;
  std::filesystem::path resume_jsonl;  // reuse cells already in this file
};

// Does d(class i) approach 1/m for every class? Records exact distances
// from 1/m per k; an exact all-class hit is "consistent", anything else is
// evidence only.
inline SweepResult sweep_q71(std::uint32_t d, std::uint32_t m, std::uint32_t k_max,
                             const SweepOptions& opts = {}) {
  SweepResult result;
  result.question = "7.1";
  const PartSequence seq = PartSequence::power(d);
  result.params = json{{"seq", seq.spec()}, {"m", m}, {"k_max", k_max}};
  std::vector<detail::SweepJob> jobs;
  for (std::uint32_t k = 1; k <= k_max; ++k) jobs.push_back({seq.spec(), k, m, false});
  const Rational target(1, m);
  const auto compute = [&](const detail::SweepJob& job) -> SweepCell {
    try {
      const DensityReport rep =
          cached_density_report(seq, job.k, job.m, opts.compute, opts.cache);
      json densities = json::array(), deltas = json::array();
      Rational max_delta(0, 1);
      for (const Rational& dens : rep.densities) {
        const Rational delta = Rational::abs_diff(dens, target);
        densities.push_back(json_rational(dens));
        deltas.push_back(json_rational(delta));
        if (max_delta < delta) max_delta = delta;
      }
      const bool hit = max_delta.is_zero();
      return SweepCell{job.seq_spec, job.k, job.m, false,
                       hit ? "consistent" : "inconclusive",
                       json{{"period", rep.period},
                            {"densities", std::move(densities)},
                            {"deltas", std::move(deltas)},
                            {"max_delta", json_rational(max_delta)}}};
    } catch (const resource_error& e) {
      return detail::resource_limited_cell(job, e);
    }
  };
  result.cells = detail::run_jobs(jobs, compute,
                                  detail::load_sweep_cells(opts.resume_jsonl, result.question),
                                  result.question, opts.workers);
  result.verdict = detail::overall_verdict(result.cells);
  return result;
}

// Is d(class j) = d(class m-j) whenever k is even? Even-k cells judge the
// claim (equality = consistent, any difference = inconsistent); odd-k cells
// are controls showing the symmetry genuinely fails there.
inline SweepResult sweep_q72(std::uint32_t d, std::uint32_t m, std::uint32_t k_max,
                             const SweepOptions& opts = {}) {
  SweepResult result;
  result.question = "7.2";
  const PartSequence seq = PartSequence::power(d);
  result.params = json{{"seq", seq.spec()}, {"m", m}, {"k_max", k_max}};
  std::vector<detail::SweepJob> jobs;
  for (std::uint32_t k = 1; k <= k_max; ++k) jobs.push_back({seq.spec(), k, m, k % 2 == 1});
  const auto compute = [&](const detail::SweepJob& job) -> SweepCell {
    try {
      const DensityReport rep =
          cached_density_report(seq, job.k, job.m, opts.compute, opts.cache);
      json pairs = json::array();
      Rational max_diff(0, 1);
      for (std::uint32_t j = 1; 2 * j <= m; ++j) {
        if (j == m - j) continue;
        const Rational diff = Rational::abs_diff(rep.densities[j], rep.densities[m - j]);
        pairs.push_back(json{{"j", j},
                             {"d_j", json_rational(rep.densities[j])},
                             {"d_mj", json_rational(rep.densities[m - j])},
                             {"diff", json_rational(diff)}});
        if (max_diff < diff) max_diff = diff;
      }
      const bool symmetric = max_diff.is_zero();
      std::string status;
      if (job.control)
        status = "inconclusive";
      else
        status = symmetric ? "consistent" : "inconsistent";
      return SweepCell{job.seq_spec, job.k, job.m, job.control, status,
                       json{{"period", rep.period},
                            {"pairs", std::move(pairs)},
                            {"symmetric", symmetric},
                            {"max_diff", json_rational(max_diff)}}};
    } catch (const resource_error& e) {
      return detail::resource_limited_cell(job, e);
    }
  };
  result.cells = detail::run_jobs(jobs, compute,
                                  detail::load_sweep_cells(opts.resume_jsonl, result.question),
                                  result.question, opts.workers);
  result.verdict = detail::overall_verdict(result.cells);
  return result;
}

// Does the odd-class density approach 1/2 for part sequences whose prime
// support is infinite? The hypothesis is user-supplied metadata; cells
// record the exact distance from 1/2.
inline SweepResult sweep_q73(const std::vector<PartSequence>& seqs, std::uint32_t k_max,
                             const std::string& prime_support = "unknown",
                             const SweepOptions& opts = {}) {
  SweepResult result;
  result.question = "7.3";
  json names = json::array();
  for (const PartSequence& s : seqs) names.push_back(s.spec());
  result.params =
      json{{"seqs", std::move(names)}, {"k_max", k_max}, {"prime_support", prime_support}};
  std::vector<detail::SweepJob> jobs;
  for (const PartSequence& s : seqs)
    for (std::uint32_t k = 1; k <= k_max; ++k)
      if (detail::has_prefix(s, k)) jobs.push_back({s.spec(), k, 2, false});
  const Rational half(1, 2);
  const auto compute = [&](const detail::SweepJob& job) -> SweepCell {
    try {
      const PartSequence seq = PartSequence::parse(job.seq_spec);
      const bool coprime = seq.gcd_prefix(job.k) == 1;
      const DensityReport rep = cached_density_report(seq, job.k, 2, opts.compute, opts.cache);
      const Rational delta = Rational::abs_diff(rep.densities[1], half);
      return SweepCell{job.seq_spec, job.k, 2, false,
                       delta.is_zero() ? "consistent" : "inconclusive",
                       json{{"period", rep.period},
                            {"odd_density", json_rational(rep.densities[1])},
                            {"delta_from_half", json_rational(delta)},
                            {"prefix_gcd_is_1", coprime},
                            {"prime_support", prime_support}}};
    } catch (const resource_error& e) {
      return detail::resource_limited_cell(job, e);
    }
  };
  result.cells = detail::run_jobs(jobs, compute,
                                  detail::load_sweep_cells(opts.resume_jsonl, result.question),
                                  result.question, opts.workers);
  result.verdict = detail::overall_verdict(result.cells);
  return result;
}

// Is the nonzero-density lower bound 1/(sum of parts) ever attained? Exact
// hits are flagged; a hit makes the sweep "consistent" (the question asks
// for existence).
inline SweepResult search_q74(const std::vector<PartSequence>& seqs, std::uint32_t k_min,
                              std::uint32_t k_max, std::uint32_t m = 2,
                              const SweepOptions& opts = {}) {
  SweepResult result;
  result.question = "7.4";
  json names = json::array();
  for (const PartSequence& s : seqs) names.push_back(s.spec());
  result.params = json{{"seqs", std::move(names)}, {"k_min", k_min}, {"k_max", k_max}, {"m", m}};
  std::vector<detail::SweepJob> jobs;
  for (const PartSequence& s : seqs)
    for (std::uint32_t k = k_min; k <= k_max; ++k)
      if (detail::has_prefix(s, k)) jobs.push_back({s.spec(), k, m, false});
  const auto compute = [&](const detail::SweepJob& job) -> SweepCell {
    try {
      const PartSequence seq = PartSequence::parse(job.seq_spec);
      const DensityReport rep =
          cached_density_report(seq, job.k, job.m, opts.compute, opts.cache);
      mpz_class sum = 0;
      for (std::uint64_t a : seq.prefix(job.k)) sum += mpz_class(a);
      const Rational bound(mpz_class(1), sum);
      const Rational nonzero = rep.densities[0].complement();
      const Rational gap = Rational::abs_diff(nonzero, bound);
      return SweepCell{job.seq_spec, job.k, job.m, false,
                       gap.is_zero() ? "consistent" : "inconclusive",
                       json{{"period", rep.period},
                            {"nonzero_density", json_rational(nonzero)},
                            {"bound", json_rational(bound)},
                            {"gap", json_rational(gap)},
                            {"hit", gap.is_zero()}}};
    } catch (const resource_error& e) {
      return detail::resource_limited_cell(job, e);
    }
  };
  result.cells = detail::run_jobs(jobs, compute,
                                  detail::load_sweep_cells(opts.resume_jsonl, result.question),
                                  result.question, opts.workers);
  result.verdict = detail::overall_verdict(result.cells);
  return result;
}

namespace detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

inline const char* headline_metric(const std::string& question) {
  if (question == "7.1") return "max_delta";
  if (question == "7.2") return "max_diff";
  if (question == "7.3") return "delta_from_half";
  return "gap";
}

}  // namespace detail

// One cell per line, every exact value as "p/q"; the file is rewritten
// atomically so interrupted runs never leave half a line.
inline void write_sweep_jsonl(const SweepResult& result, const std::filesystem::path& path) {
  std::ostringstream os;
  for (const SweepCell& c : result.cells) os << detail::cell_to_line(result.question, c).dump() << '\n';
  detail::atomic_write(path, os.str());
}

inline void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "question,seq,k,m,control,status,metric,value\n";
  const char* metric = detail::headline_metric(result.question);
  for (const SweepCell& c : result.cells) {
    const std::string value = c.payload.contains(metric)
                                  ? c.payload[metric].get<std::string>()
                                  : std::string();
    os << result.question << ',' << c.seq << ',' << c.k << ',' << c.m << ','
       << (c.control ? "yes" : "no") << ',' << c.status << ',' << metric << ',' << value << '\n';
  }
  os << result.question << ",,,,,," << "verdict," << result.verdict << '\n';
  detail::atomic_write(path, os.str());
}

inline json to_json(const SweepResult& r) {
  json cells = json::array();
  for (const SweepCell& c : r.cells) cells.push_back(detail::cell_to_line(r.question, c));
  return json{{"question", r.question},
              {"params", r.params},
              {"cells", std::move(cells)},
              {"verdict", r.verdict}};
}

}  // namespace partmod
