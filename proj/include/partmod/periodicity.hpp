#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "partmod/errors.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/numtheory.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"

// Fundamental period of (p(n,k) mod m), assembled per prime power of the
// modulus. For p^alpha || m the period is p^(alpha+b-1) * L, where L is the
// p-free part of lcm(a_1..a_k) and b is least with p^b >= sum of p^e(a_i),
// e(a_i) the p-adic valuation of a_i. The overall period is the lcm of the
// prime-power periods, and m^(k-1)*lcm(a_1..a_k) is always a (coarser)
// period bound.
//
// k = 1 is special: p(n,1) is the indicator of multiples of a_1, whose
// residue pattern is the same under every modulus, so its minimal period is
// exactly a_1 — the alpha = 1 value of the formula. The general exponent
// alpha+b-1 would inflate it by p^(alpha-1), so for k = 1 the exponent is
// taken with alpha = 1. (certify() cross-checks minimality by scan, so any
// further edge would fail loudly rather than silently.)
//
// The sequence is purely periodic, so minimality only needs the maximal
// proper divisors T/p of a candidate T.

namespace partmod {

struct PrimePowerPeriod {
  std::uint64_t prime = 0;
  std::uint32_t alpha = 0;               // exponent of prime in the modulus
  mpz_class p_free_lcm;                  // L
  std::vector<std::uint32_t> e_values;   // per-part p-adic valuations
  mpz_class power_sum;                   // sum of prime^e over the parts
  std::uint32_t b = 0;                   // least b with prime^b >= power_sum
  mpz_class period;                      // prime^(alpha+b-1) * L
};

struct PeriodCert {
  std::string seq_spec;
  std::uint32_t k = 0;
  std::uint32_t modulus = 0;
  std::vector<std::uint64_t> parts;
  std::vector<PrimePowerPeriod> per_prime;
  mpz_class fundamental_period;
  mpz_class coarse_bound;                // m^(k-1) * lcm(parts)
  std::string verification = "formula-only";  // "formula-only" | "verified"
};

inline PeriodCert fundamental_period(const PartSequence& seq, std::uint32_t k, std::uint32_t m) {
  if (k < 1) throw std::invalid_argument("fundamental_period: k must be >= 1");
  if (m < 2) throw std::invalid_argument("fundamental_period: modulus must be >= 2");

  PeriodCert cert;
  cert.seq_spec = seq.spec();
  cert.k = k;
  cert.modulus = m;
  cert.parts = seq.prefix(k);

  const mpz_class full_lcm = lcm_list(cert.parts);
  cert.fundamental_period = 1;
  for (const auto& [p, alpha] : factorize(m).factors) {
    PrimePowerPeriod pp;
    pp.prime = p;
    pp.alpha = alpha;
    mpz_class L;
    mpz_remove(L.get_mpz_t(), full_lcm.get_mpz_t(), mpz_class(p).get_mpz_t());
    pp.p_free_lcm = L;
    pp.power_sum = 0;
    pp.e_values.reserve(cert.parts.size());
    for (std::uint64_t a : cert.parts) {
      const auto e = static_cast<std::uint32_t>(padic_valuation(a, p));
      pp.e_values.push_back(e);
      pp.power_sum += pow_u64(p, e);
    }
    mpz_class pw = 1;
    pp.b = 0;
    while (pw < pp.power_sum) {
      pw *= p;
      ++pp.b;
    }
    const std::uint32_t effective_alpha = k == 1 ? 1 : pp.alpha;  // see header comment
    pp.period = pow_u64(p, effective_alpha + pp.b - 1) * L;
    mpz_lcm(cert.fundamental_period.get_mpz_t(), cert.fundamental_period.get_mpz_t(),
            pp.period.get_mpz_t());
    cert.per_prime.push_back(std::move(pp));
  }

  cert.coarse_bound = pow_u64(m, k - 1) * full_lcm;
  if (!mpz_divisible_p(cert.coarse_bound.get_mpz_t(), cert.fundamental_period.get_mpz_t()))
    throw theorem_violation("fundamental period " + cert.fundamental_period.get_str() +
                            " does not divide the coarse bound " + cert.coarse_bound.get_str() +
                            " for seq=" + cert.seq_spec + " k=" + std::to_string(k) +
                            " m=" + std::to_string(m));
  return cert;
}

struct PeriodVerdict {
  bool is_period = false;
  bool is_minimal = false;
};

// Checks T against a window of length >= 2T at offset 0. A divisor d of T
// is a period of the full sequence iff values[n] == values[n+d] holds for
// n < 2T - d, so the doubled window decides both flags exactly.
inline PeriodVerdict verify_period(const ResidueWindow& window, std::uint64_t T) {
  if (T < 1) throw std::invalid_argument("verify_period: T must be >= 1");
  if (window.offset() != 0) throw std::invalid_argument("verify_period: window must start at n=0");
  if (window.size() < 2 * T)
    throw std::invalid_argument("verify_period: window too short (needs " + std::to_string(2 * T) +
                                " values, has " + std::to_string(window.size()) + ")");
  return window.visit([&](auto values) {
    const auto holds = [&](std::uint64_t d) {
      for (std::size_t n = 0; n + d < values.size(); ++n)
        if (values[n] != values[n + d]) return false;
      return true;
    };
    PeriodVerdict v;
    v.is_period = holds(T);
    if (v.is_period) {
      v.is_minimal = true;
      for (const auto& [p, exp] : factorize(T).factors)
        if (holds(T / p)) {
          v.is_minimal = false;
          break;
        }
    }
    return v;
  });
}

// Computes the certificate and, when 2T fits under the memory cap, confirms
// the formula value against a computed window. A failed confirmation is an
// implementation bug and aborts loudly.
inline PeriodCert certify(const PartSequence& seq, std::uint32_t k, std::uint32_t m,
                          const ComputeOptions& opts = {}) {
  PeriodCert cert = fundamental_period(seq, k, m);
  const std::uint64_t width = m > ResidueWindow::kMaxNarrowModulus ? 2 : 1;
  const mpz_class need = 2 * cert.fundamental_period * width;
  if (need > opts.memory_cap) return cert;  // formula-only
  const auto T = static_cast<std::uint64_t>(cert.fundamental_period.get_ui());
  const ResidueWindow window = compute_residues(seq, k, m, 2 * T, opts);
  const PeriodVerdict v = verify_period(window, T);
  if (!v.is_period || !v.is_minimal)
    throw theorem_violation("period formula gave " + std::to_string(T) + " for seq=" +
                            cert.seq_spec + " k=" + std::to_string(k) + " m=" + std::to_string(m) +
                            " but the window scan says is_period=" + std::to_string(v.is_period) +
                            " is_minimal=" + std::to_string(v.is_minimal));
  cert.verification = "verified";
  return cert;
}

inline json to_json(const PeriodCert& cert) {
  json per_prime = json::array();
  for (const auto& pp : cert.per_prime) {
    per_prime.push_back({{"prime", pp.prime},
                         {"alpha", pp.alpha},
                         {"p_free_lcm", json_big(pp.p_free_lcm)},
                         {"e_values", pp.e_values},
                         {"power_sum", json_big(pp.power_sum)},
                         {"b", pp.b},
                         {"period", json_big(pp.period)}});
  }
  return json{{"seq", cert.seq_spec},
              {"k", cert.k},
              {"modulus", cert.modulus},
              {"parts", cert.parts},
              {"per_prime", std::move(per_prime)},
              {"fundamental_period", json_big(cert.fundamental_period)},
              {"coarse_bound", json_big(cert.coarse_bound)},
              {"verification", cert.verification}};
}

}  // namespace partmod
