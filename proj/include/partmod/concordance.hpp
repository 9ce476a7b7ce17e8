#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partmod/cache.hpp"
#include "partmod/density.hpp"
#include "partmod/experiments.hpp"
#include "partmod/mary.hpp"
#include "partmod/numtheory.hpp"
#include "partmod/periodicity.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"
#include "partmod/tables.hpp"

// Result-to-operation concordance: each mathematical ingredient the library
// rests on, mapped to the operations that implement or check it. The
// operation registry references the symbols themselves, so deleting an
// operation breaks this translation unit, and verify_concordance() catches
// renames and coverage gaps at test time.

namespace partmod {

struct ConcordanceEntry {
  std::string id;                       // stable kebab-case identifier
  std::string topic;                    // what the result says, in one line
  std::vector<std::string> operations;  // registry names
  std::string status;                   // "implements" | "checks" | "out-of-scope"
};

namespace detail {

template <class T>
constexpr bool op_exists(T&&) {
  return true;
}

}  // namespace detail

inline const std::vector<std::pair<std::string, bool>>& operation_registry() {
  static const std::vector<std::pair<std::string, bool>> registry = {
      {"factorize", detail::op_exists(&factorize)},
      {"radical", detail::op_exists(&radical)},
      {"p_free_part", detail::op_exists(&p_free_part)},
      {"padic_valuation", detail::op_exists(&padic_valuation)},
      {"euler_phi", detail::op_exists(&euler_phi)},
      {"lcm_list", detail::op_exists(&lcm_list)},
      {"binomial", detail::op_exists(&binomial)},
      {"divisors", detail::op_exists(&divisors)},
      {"PartSequence::parse", detail::op_exists(&PartSequence::parse)},
      {"PartSequence::term", detail::op_exists(&PartSequence::term)},
      {"PartSequence::prefix", detail::op_exists(&PartSequence::prefix)},
      {"PartSequence::gcd_prefix", detail::op_exists(&PartSequence::gcd_prefix)},
      {"compute_residues", detail::op_exists(&compute_residues)},
      {"brute_force_count", detail::op_exists(&brute_force_count)},
      {"ResidueWindow::write", detail::op_exists(&ResidueWindow::write)},
      {"ResidueWindow::read", detail::op_exists(&ResidueWindow::read)},
      {"fundamental_period", detail::op_exists(&fundamental_period)},
      {"verify_period", detail::op_exists(&verify_period)},
      {"certify", detail::op_exists(&certify)},
      {"density_report", detail::op_exists(&density_report)},
      {"density_report_from_window", detail::op_exists(&density_report_from_window)},
      {"max_zero_run", detail::op_exists(&max_zero_run)},
      {"check_nonzero_density", detail::op_exists(&check_nonzero_density)},
      {"check_consecutive_odd", detail::op_exists(&check_consecutive_odd)},
      {"check_parity_balance", detail::op_exists(&check_parity_balance)},
      {"digits_base_m", detail::op_exists(&digits_base_m)},
      {"mary_residue", detail::op_exists(&mary_residue)},
      {"r_count_bruteforce", detail::op_exists(&r_count_bruteforce)},
      {"r_count_recurrence", detail::op_exists(&r_count_recurrence)},
      {"r_count_divisor_form", detail::op_exists(&r_count_divisor_form)},
      {"r_count_closed_form", detail::op_exists(&r_count_closed_form)},
      {"mary_prime_solution_count", detail::op_exists(&mary_prime_solution_count)},
      {"r_count_table", detail::op_exists(&r_count_table)},
      {"validate_r_table", detail::op_exists(&validate_r_table)},
      {"characterize", detail::op_exists(&characterize)},
      {"zero_density_lower_bound", detail::op_exists(&zero_density_lower_bound)},
      {"table_fixture", detail::op_exists(&table_fixture)},
      {"reproduce_table", detail::op_exists(&reproduce_table)},
      {"cached_density_report", detail::op_exists(&cached_density_report)},
      {"WindowCache::get_or_compute", detail::op_exists(&WindowCache::get_or_compute)},
      {"sweep_q71", detail::op_exists(&sweep_q71)},
      {"sweep_q72", detail::op_exists(&sweep_q72)},
      {"sweep_q73", detail::op_exists(&sweep_q73)},
      {"search_q74", detail::op_exists(&search_q74)},
  };
  return registry;
}

inline const std::vector<std::string>& required_loci() {
  static const std::vector<std::string> loci = {
      "notation-toolkit",
      "count-recurrence",
      "period-prime-power-combination",
      "period-prime-power-formula",
      "period-coarse-bound",
      "parity-balance",
      "consecutive-odd-bound",
      "zero-run-bound",
      "nonzero-density-bound",
      "digit-product-congruence",
      "prime-modulus-solution-count",
      "prime-modulus-class-density",
      "digit-rules-small-moduli",
      "solution-count-definition",
      "solution-count-recurrence",
      "solution-count-gcd-reduction",
      "solution-count-two-digit",
      "solution-count-divisor-sum",
      "solution-count-base-six",
      "solution-count-coprime-class",
      "solution-count-closed-form",
      "zero-class-trend",
      "density-tables",
      "limit-questions",
      "beyond-this-library",
  };
  return loci;
}

inline const std::vector<ConcordanceEntry>& concordance() {
  static const std::vector<ConcordanceEntry> entries = {
      {"notation-toolkit",
       "radical, p-free part, p-adic valuation, totient, lcm and divisor utilities",
       {"factorize", "radical", "p_free_part", "padic_valuation", "euler_phi", "lcm_list",
        "binomial", "divisors"},
       "implements"},
      {"count-recurrence",
       "p(n,k) satisfies p(n,k) = p(n-a_k,k) + p(n,k-1); in coefficient form one in-place pass "
       "per part",
       {"compute_residues", "brute_force_count"},
       "implements"},
      {"period-prime-power-combination",
       "the period mod m is the lcm of the periods mod its prime powers",
       {"fundamental_period"},
       "implements"},
      {"period-prime-power-formula",
       "mod p^alpha the minimal period is p^(alpha+b-1) * L with L the p-free lcm of the parts "
       "and p^b >= sum of p^e(a_i)",
       {"fundamental_period", "verify_period", "certify"},
       "implements"},
      {"period-coarse-bound",
       "m^(k-1) * lcm(a_1..a_k) is always a period, so the minimal one divides it",
       {"fundamental_period"},
       "checks"},
      {"parity-balance",
       "mod 2, {p(n,k) odd and p(n,k-1) odd} and {p(n,k) even and p(n,k-1) odd} have equal "
       "density",
       {"check_parity_balance"},
       "checks"},
      {"consecutive-odd-bound",
       "mod 2, consecutive k cannot both have odd-density above 2/3",
       {"check_consecutive_odd"},
       "checks"},
      {"zero-run-bound",
       "at most (sum of parts) - 1 consecutive n have p(n,k) = 0 mod m",
       {"max_zero_run", "density_report"},
       "checks"},
      {"nonzero-density-bound",
       "the density of nonzero classes is at least 1 / (sum of parts)",
       {"check_nonzero_density"},
       "checks"},
      {"digit-product-congruence",
       "for parts (1, m, m^2, ...), p(n,k) = (c_1+1)...(c_(k-1)+1) mod m over the base-m digits "
       "of n",
       {"digits_base_m", "mary_residue"},
       "implements"},
      {"prime-modulus-solution-count",
       "for prime m and a nonzero class, p(n,k) = i mod m has m(m-1)^(k-2) solutions mod m^k",
       {"mary_prime_solution_count"},
       "implements"},
      {"prime-modulus-class-density",
       "for prime m each nonzero class has density (m-1)^(k-2)/m^(k-1)",
       {"r_count_table", "density_report"},
       "checks"},
      {"digit-rules-small-moduli",
       "explicit digit rules decide the residue class for m = 2, 3, 4",
       {"characterize"},
       "implements"},
      {"solution-count-definition",
       "r(i,m,k) counts n mod m^k in class i; the base case is r(1,m,1) = m and 0 otherwise",
       {"r_count_bruteforce"},
       "implements"},
      {"solution-count-recurrence",
       "r(i,m,k) = sum over l with gcd(l,m) | gcd(i,m) of r(l,m,k-1) * gcd(l,m)",
       {"r_count_recurrence"},
       "implements"},
      {"solution-count-gcd-reduction",
       "r(i,m,k) depends on i only through gcd(i,m)",
       {"validate_r_table", "r_count_table"},
       "checks"},
      {"solution-count-two-digit",
       "r(i,m,2) = m for every class i",
       {"r_count_divisor_form"},
       "implements"},
      {"solution-count-divisor-sum",
       "for i | m and k > 2: r(i,m,k) = sum over l | i of l * phi(m/l) * r(l,m,k-1)",
       {"r_count_divisor_form"},
       "implements"},
      {"solution-count-base-six",
       "worked family m = 6: 3*2^(k-1) for classes 1 and 5, 3*2^(k-1)*(2^(k-1)-1) for 2 and 4, "
       "6*(3^(k-1)-2^(k-1)) for 3",
       {"r_count_recurrence"},
       "checks"},
      {"solution-count-coprime-class",
       "for gcd(i,m) = 1: r(i,m,k) = m * phi(m)^(k-2)",
       {"r_count_closed_form"},
       "implements"},
      {"solution-count-closed-form",
       "for i*rad(i) | m, i = prod p_j^(a_j): r(i,m,k) = m * phi(m)^(k-2) * prod "
       "binomial(a_j+k-2, a_j)",
       {"r_count_closed_form"},
       "implements"},
      {"zero-class-trend",
       "the zero class of the geometric sequence has density at least 1 - ((m-1)/m)^(k-1), "
       "approaching 1",
       {"zero_density_lower_bound", "r_count_table"},
       "checks"},
      {"density-tables",
       "pinned exact density tables for square, polygonal-style and related part sequences",
       {"table_fixture", "reproduce_table"},
       "checks"},
      {"limit-questions",
       "open limit and symmetry questions probed by sweeps; evidence only, never asserted",
       {"sweep_q71", "sweep_q72", "sweep_q73", "search_q74"},
       "checks"},
      {"beyond-this-library",
       "asymptotic growth of p(n,k), congruences of the unrestricted partition function, and "
       "proofs as such",
       {},
       "out-of-scope"},
  };
  return entries;
}

struct ConcordanceVerdict {
  bool ok = true;
  std::vector<std::string> problems;
};

inline ConcordanceVerdict verify_concordance() {
  ConcordanceVerdict v;
  std::set<std::string> known_ops;
  for (const auto& [name, exists] : operation_registry())
    if (exists) known_ops.insert(name);

  std::set<std::string> seen_ids;
  for (const ConcordanceEntry& e : concordance()) {
    if (!seen_ids.insert(e.id).second) {
      v.ok = false;
      v.problems.push_back("duplicate id: " + e.id);
    }
    for (const std::string& op : e.operations)
      if (!known_ops.count(op)) {
        v.ok = false;
        v.problems.push_back("entry " + e.id + " names unknown operation: " + op);
      }
    if (e.status != "implements" && e.status != "checks" && e.status != "out-of-scope") {
      v.ok = false;
      v.problems.push_back("entry " + e.id + " has unknown status: " + e.status);
    }
  }
  for (const std::string& id : required_loci())
    if (!seen_ids.count(id)) {
      v.ok = false;
      v.problems.push_back("missing required entry: " + id);
    }
  for (const std::string& id : seen_ids)
    if (std::find(required_loci().begin(), required_loci().end(), id) == required_loci().end()) {
      v.ok = false;
      v.problems.push_back("entry not in the required list: " + id);
    }
  return v;
}

inline std::string render_concordance_markdown() {
  std::ostringstream os;
  os << "# Concordance\n\n";
  os << "Every mathematical ingredient of the library, mapped to the operations that\n"
        "implement or check it. `tests/concordance_test` regenerates this page and\n"
        "fails when it drifts from the code.\n\n";
  os << "| id | statement | operations | status |\n";
  os << "|----|-----------|------------|--------|\n";
  for (const ConcordanceEntry& e : concordance()) {
    os << "| `" << e.id << "` | " << e.topic << " | ";
    for (std::size_t i = 0; i < e.operations.size(); ++i)
      os << (i ? ", " : "") << '`' << e.operations[i] << '`';
    if (e.operations.empty()) os << "—";
    os << " | " << e.status << " |\n";
  }
  return os.str();
}

}  // namespace partmod
