#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "partmod/errors.hpp"

// Exact elementary number theory shared by every other module. All functions
// are pure; big values are carried as mpz_class so nothing ever wraps.

namespace partmod {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n = product of prime^exponent, primes strictly increasing, exponents >= 1.
// value == 1 iff factors is empty.
struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;
};

namespace detail {

// Primes below 2^16, enough to trial-divide anything below 2^32 (and any
// 2^16-smooth larger value).
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t bound = 1u << 16;
    std::vector<bool> composite(bound, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < bound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j < bound; j += i)
        composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  f.value = n;
  for (std::uint32_t p : detail::small_primes()) {
    if (std::uint64_t(p) * p > n) break;
    if (n % p != 0) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (n > 1) {
    // No factor <= 2^16 remains, so n is prime whenever n < 2^32.
    if (n >> 32 != 0)
      throw std::domain_error("factorize: residual cofactor " + std::to_string(n) +
                              " exceeds the supported trial-division range");
    f.factors.push_back({n, 1});
  }
  return f;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : detail::small_primes()) {
    if (std::uint64_t(p) * p > n) return true;
    if (n % p == 0) return n == p;
  }
  if (n >> 32 != 0)
    throw std::domain_error("is_prime: " + std::to_string(n) +
                            " exceeds the supported trial-division range");
  return true;
}

// Product of the distinct primes dividing n; radical(1) = 1.
inline std::uint64_t radical(std::uint64_t n) {
  std::uint64_t r = 1;
  for (const PrimePower& pp : factorize(n).factors) r *= pp.prime;
  return r;
}

// Largest s with p^s | n.
inline std::uint32_t padic_valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("padic_valuation: n must be >= 1");
  if (!is_prime(p)) throw std::invalid_argument("padic_valuation: p = " + std::to_string(p) + " is not prime");
  std::uint32_t s = 0;
  while (n % p == 0) {
    n /= p;
    ++s;
  }
  return s;
}

// n with every factor of p divided out; never divisible by p.
inline std::uint64_t p_free_part(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("p_free_part: n must be >= 1");
  if (!is_prime(p)) throw std::invalid_argument("p_free_part: p = " + std::to_string(p) + " is not prime");
  while (n % p == 0) n /= p;
  return n;
}

// Euler's totient, multiplicative over the factorization.
inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = 1;
  for (const PrimePower& pp : factorize(n).factors) {
    std::uint64_t q = pp.prime - 1;
    for (std::uint32_t e = 1; e < pp.exponent; ++e) q *= pp.prime;
    phi *= q;
  }
  return phi;
}

// Exact lcm of a non-empty list; promotes to arbitrary precision so large
// intermediates never wrap.
inline mpz_class lcm_list(std::span<const std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("lcm_list: empty list");
  mpz_class acc = 1;
  for (std::uint64_t v : values) {
    if (v == 0) throw std::invalid_argument("lcm_list: entries must be >= 1");
    mpz_class m(static_cast<unsigned long>(v));
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
  }
  return acc;
}

inline mpz_class binomial(std::uint32_t n, std::uint32_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpz_class pow_u64(std::uint64_t base, std::uint32_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

// Checked narrowing; the only place exactness can meet a word-size limit.
inline std::uint64_t to_u64(const mpz_class& v, const char* what = "value") {
  if (v < 0 || !v.fits_ulong_p())
    throw overflow_error(std::string(what) + " does not fit in 64 bits: " + v.get_str());
  return static_cast<std::uint64_t>(v.get_ui());
}

// All divisors of n in increasing order.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> divs{1};
  for (const PrimePower& pp : factorize(n).factors) {
    const std::size_t base = divs.size();
    std::uint64_t q = 1;
    for (std::uint32_t e = 1; e <= pp.exponent; ++e) {
      q *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * q);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace partmod
