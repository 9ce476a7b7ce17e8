#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "partmod/errors.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/periodicity.hpp"
#include "partmod/rational.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"

// Exact residue-class densities of (p(n,k) mod m). The sequence is purely
// periodic, so class counts over one fundamental period [0, T) give the
// asymptotic densities exactly; nothing here is estimated.
//
// Proved bounds are enforced, not merely reported:
//   - the longest zero run is at most (sum of parts) - 1,
//   - the nonzero-class density is at least 1 / (sum of parts),
//   - mod 2, consecutive k cannot both have odd-density above 2/3,
//   - mod 2, the classes {p(n,k) and p(n,k-1) both odd} and
//     {p(n,k) even, p(n,k-1) odd} have exactly equal density.
// A violation of any of these is an implementation bug and throws.

namespace partmod {

struct Verdict {
  std::string name;
  std::string status;  // "pass" | "not-applicable" | "skipped"
  std::string detail;
  std::optional<Rational> margin;  // distance to the bound where meaningful
};

struct BoundChecks {
  Verdict zero_run;
  Verdict nonzero_density;
  Verdict consecutive_odd;
  Verdict parity_balance;
};

struct DensityReport {
  std::string seq_spec;
  std::uint32_t k = 0;
  std::uint32_t modulus = 0;
  std::uint64_t period = 0;
  std::vector<std::uint64_t> counts;    // counts[i] = #{n in [0,T) : residue i}
  std::vector<Rational> densities;      // counts[i] / period, reduced
  std::uint64_t max_zero_run = 0;
  std::uint64_t zero_run_limit = 0;     // (sum of parts) - 1
  BoundChecks checks;
};

namespace detail {

// Longest circular run of zeros over one full period, capped at the period.
template <class T>
std::uint64_t circular_zero_run(std::span<const T> period_values) {
  std::uint64_t best = 0, run = 0;
  for (T v : period_values) {
    run = (v == 0) ? run + 1 : 0;
    best = std::max(best, run);
  }
  if (run > 0 && run < period_values.size()) {  // wrap: suffix zeros + prefix zeros
    std::uint64_t prefix = 0;
    for (T v : period_values) {
      if (v != 0) break;
      ++prefix;
    }
    best = std::max(best, run + prefix);
  }
  return std::min<std::uint64_t>(best, period_values.size());
}

inline mpz_class part_sum(const std::vector<std::uint64_t>& parts) {
  mpz_class s = 0;
  for (std::uint64_t a : parts) s += mpz_class(a);
  return s;
}

inline std::uint64_t require_window_length(const mpz_class& length, std::uint32_t m,
                                           const ComputeOptions& opts, const char* what) {
  const std::uint64_t width = m > ResidueWindow::kMaxNarrowModulus ? 2 : 1;
  const mpz_class need = length * width;
  if (!length.fits_ulong_p() || need > opts.memory_cap) {
    const std::uint64_t bytes =
        need.fits_ulong_p() ? static_cast<std::uint64_t>(need.get_ui()) : UINT64_MAX;
    throw resource_error(std::string(what) + ": window of " + need.get_str() +
                             " bytes exceeds the memory cap of " + std::to_string(opts.memory_cap),
                         bytes);
  }
  return static_cast<std::uint64_t>(length.get_ui());
}

}  // namespace detail

// Longest zero run of the periodic sequence, computed from a window that
// covers at least two periods (runs may wrap the period boundary), capped
// at the period length.
inline std::uint64_t max_zero_run(const ResidueWindow& window, std::uint64_t period) {
  if (period < 1) throw std::invalid_argument("max_zero_run: period must be >= 1");
  if (window.offset() != 0) throw std::invalid_argument("max_zero_run: window must start at n=0");
  if (window.size() < 2 * period)
    throw std::invalid_argument("max_zero_run: window must cover two periods (needs " +
                                std::to_string(2 * period) + " values, has " +
                                std::to_string(window.size()) + ")");
  return window.visit([&](auto values) {
    std::uint64_t best = 0, run = 0;
    for (std::size_t n = 0; n < 2 * period; ++n) {
      run = (values[n] == 0) ? run + 1 : 0;
      best = std::max(best, run);
    }
    return std::min(best, period);
  });
}

inline DensityReport density_report(const PartSequence& seq, std::uint32_t k, std::uint32_t m,
                                    const ComputeOptions& opts = {}, bool pair_checks = false);

// Mod-2 rule: consecutive k may not both have odd-density above 2/3. Needs
// the reports for k and k+1; a genuine violation throws.
inline Verdict check_consecutive_odd(const PartSequence& seq, std::uint32_t k,
                                     const ComputeOptions& opts = {}) {
  const Rational two_thirds(2, 3);
  const Rational d_k = density_report(seq, k, 2, opts).densities[1];
  const Rational d_next = density_report(seq, k + 1, 2, opts).densities[1];
  if (two_thirds < d_k && two_thirds < d_next)
    throw theorem_violation("odd densities " + d_k.str() + " (k=" + std::to_string(k) + ") and " +
                            d_next.str() + " (k=" + std::to_string(k + 1) +
                            ") both exceed 2/3 for seq=" + seq.spec());
  const Rational lower = d_k < d_next ? d_k : d_next;
  return Verdict{"consecutive_odd", "pass",
                 "odd densities " + d_k.str() + ", " + d_next.str() + " at k=" +
                     std::to_string(k) + "," + std::to_string(k + 1) + "; not both above 2/3",
                 Rational::abs_diff(two_thirds, lower)};
}

// Mod-2 rule for k >= 2: the classes {p(n,k) odd and p(n,k-1) odd} and
// {p(n,k) even and p(n,k-1) odd} have exactly equal density. Tallied over
// the lcm of the two fundamental periods; inequality throws.
inline Verdict check_parity_balance(const PartSequence& seq, std::uint32_t k,
                                    const ComputeOptions& opts = {}) {
  if (k < 2) throw std::invalid_argument("check_parity_balance: k must be >= 2");
  const PeriodCert cert_k = fundamental_period(seq, k, 2);
  const PeriodCert cert_prev = fundamental_period(seq, k - 1, 2);
  mpz_class common;
  mpz_lcm(common.get_mpz_t(), cert_k.fundamental_period.get_mpz_t(),
          cert_prev.fundamental_period.get_mpz_t());
  const std::uint64_t length =
      detail::require_window_length(common, 2, opts, "check_parity_balance");
  const ResidueWindow w_k = compute_residues(seq, k, 2, length, opts);
  const ResidueWindow w_prev = compute_residues(seq, k - 1, 2, length, opts);
  std::uint64_t both_odd = 0, even_after_odd = 0;
  w_k.visit([&](auto vk) {
    w_prev.visit([&](auto vp) {
      for (std::size_t n = 0; n < length; ++n) {
        if (vp[n] != 1) continue;
        if (vk[n] == 1)
          ++both_odd;
        else
          ++even_after_odd;
      }
    });
  });
  if (both_odd != even_after_odd)
    throw theorem_violation("parity balance broken for seq=" + seq.spec() +
                            " k=" + std::to_string(k) + ": " + std::to_string(both_odd) + " vs " +
                            std::to_string(even_after_odd) + " over " + std::to_string(length));
  const Rational shared = both_odd == 0 ? Rational(0, 1) : Rational(both_odd, length);
  return Verdict{"parity_balance", "pass",
                 "both classes have density " + shared.str() + " over a common period of " +
                     std::to_string(length),
                 Rational(0, 1)};
}

// Nonzero-class density must be at least 1 / (sum of parts).
inline Verdict check_nonzero_density(const DensityReport& report,
                                     const std::vector<std::uint64_t>& parts) {
  const mpz_class sum = detail::part_sum(parts);
  const Rational bound(mpz_class(1), sum);
  const Rational nonzero = report.densities[0].complement();
  if (nonzero < bound)
    throw theorem_violation("nonzero density " + nonzero.str() + " below bound " + bound.str() +
                            " for seq=" + report.seq_spec + " k=" + std::to_string(report.k) +
                            " m=" + std::to_string(report.modulus));
  return Verdict{"nonzero_density", "pass",
                 "nonzero density " + nonzero.str() + " >= " + bound.str(),
                 Rational::abs_diff(nonzero, bound)};
}

// Builds the report from an already-computed window (e.g. one served by the
// on-disk cache). The window must belong to (seq, k, m), start at n = 0,
// and cover at least one fundamental period; only [0, T) is read, so the
// result is identical to the compute-from-scratch path.
inline DensityReport density_report_from_window(const PartSequence& seq, std::uint32_t k,
                                                std::uint32_t m, const ResidueWindow& window,
                                                const ComputeOptions& opts = {},
                                                bool pair_checks = false) {
  const PeriodCert cert = fundamental_period(seq, k, m);
  const std::uint64_t T =
      detail::require_window_length(cert.fundamental_period, m, opts, "density_report");
  if (window.seq_spec() != cert.seq_spec || window.k() != k || window.modulus() != m ||
      window.offset() != 0 || window.size() < T)
    throw std::invalid_argument("density_report: window does not cover one period of (" +
                                cert.seq_spec + ", k=" + std::to_string(k) +
                                ", m=" + std::to_string(m) + ") from n=0");

  DensityReport report;
  report.seq_spec = cert.seq_spec;
  report.k = k;
  report.modulus = m;
  report.period = T;
  report.counts.assign(m, 0);
  window.visit([&](auto values) {
    const auto one_period = values.first(static_cast<std::size_t>(T));
    for (auto v : one_period) ++report.counts[v];
    report.max_zero_run = detail::circular_zero_run(one_period);
  });
  report.densities.reserve(m);
  for (std::uint64_t c : report.counts)
    report.densities.push_back(c == 0 ? Rational(0, 1) : Rational(c, T));

  const mpz_class sum = detail::part_sum(cert.parts);
  const mpz_class limit = sum - 1;
  report.zero_run_limit = to_u64(limit, "zero_run_limit");
  if (report.max_zero_run > report.zero_run_limit)
    throw theorem_violation("zero run of " + std::to_string(report.max_zero_run) +
                            " exceeds the limit " + std::to_string(report.zero_run_limit) +
                            " for seq=" + report.seq_spec + " k=" + std::to_string(k) +
                            " m=" + std::to_string(m));
  report.checks.zero_run =
      Verdict{"zero_run", "pass",
              "longest zero run " + std::to_string(report.max_zero_run) + " <= " +
                  std::to_string(report.zero_run_limit),
              Rational(report.zero_run_limit - report.max_zero_run, 1)};
  report.checks.nonzero_density = check_nonzero_density(report, cert.parts);

  const Verdict na{"", "not-applicable", "", std::nullopt};
  report.checks.consecutive_odd = na;
  report.checks.consecutive_odd.name = "consecutive_odd";
  report.checks.parity_balance = na;
  report.checks.parity_balance.name = "parity_balance";
  if (m == 2 && pair_checks) {
    try {
      report.checks.consecutive_odd = check_consecutive_odd(seq, k, opts);
    } catch (const resource_error& e) {
      report.checks.consecutive_odd = Verdict{"consecutive_odd", "skipped", e.what(), std::nullopt};
    }
    if (k >= 2) {
      try {
        report.checks.parity_balance = check_parity_balance(seq, k, opts);
      } catch (const resource_error& e) {
        report.checks.parity_balance = Verdict{"parity_balance", "skipped", e.what(), std::nullopt};
      }
    }
  } else if (m == 2) {
    report.checks.consecutive_odd.status = "skipped";
    report.checks.consecutive_odd.detail = "pair checks not requested";
    if (k >= 2) {
      report.checks.parity_balance.status = "skipped";
      report.checks.parity_balance.detail = "pair checks not requested";
    }
  }
  return report;
}

inline DensityReport density_report(const PartSequence& seq, std::uint32_t k, std::uint32_t m,
                                    const ComputeOptions& opts, bool pair_checks) {
  const PeriodCert cert = fundamental_period(seq, k, m);
  const std::uint64_t T =
      detail::require_window_length(cert.fundamental_period, m, opts, "density_report");
  return density_report_from_window(seq, k, m, compute_residues(seq, k, m, T, opts), opts,
                                    pair_checks);
}

inline json to_json(const Verdict& v) {
  return json{{"name", v.name},
              {"status", v.status},
              {"detail", v.detail},
              {"margin", v.margin ? json_rational(*v.margin) : json(nullptr)}};
}

inline json to_json(const DensityReport& r) {
  json densities = json::array();
  for (const auto& d : r.densities) densities.push_back(json_rational(d));
  return json{{"seq", r.seq_spec},
              {"k", r.k},
              {"modulus", r.modulus},
              {"period", r.period},
              {"counts", r.counts},
              {"densities", std::move(densities)},
              {"max_zero_run", r.max_zero_run},
              {"zero_run_limit", r.zero_run_limit},
              {"bound_checks",
               json{{"zero_run", to_json(r.checks.zero_run)},
                    {"nonzero_density", to_json(r.checks.nonzero_density)},
                    {"consecutive_odd", to_json(r.checks.consecutive_odd)},
                    {"parity_balance", to_json(r.checks.parity_balance)}}}};
}

}  // namespace partmod
