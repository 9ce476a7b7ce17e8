#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "partmod/errors.hpp"
#include "partmod/jsonio.hpp"
#include "partmod/numtheory.hpp"
#include "partmod/rational.hpp"

// Closed-form machinery for the geometric part sequence (1, m, m^2, ...).
// Writing n mod m^k in base m as digits c_0..c_(k-1), the count p(n,k)
// satisfies p(n,k) = (c_1+1)(c_2+1)...(c_(k-1)+1) mod m, which turns
// residue questions into digit combinatorics. r_count(i,m,k) is the number
// of n mod m^k whose count lands in class i; it obeys
//   - r(i,m,1) = m if i = 1 else 0,
//   - r(i,m,k) = sum over l with gcd(l,m) | gcd(i,m) of r(l,m,k-1)*gcd(l,m),
//   - r(i,m,k) = r(gcd(i,m),m,k)            (so divisors of m suffice),
//   - r(i,m,2) = m for every i,
//   - for i | m, k > 2: r(i,m,k) = sum over l | i of l*phi(m/l)*r(l,m,k-1),
//   - for i*rad(i) | m, k >= 2, i = prod p_j^(a_j):
//       r(i,m,k) = m * phi(m)^(k-2) * prod binomial(a_j+k-2, a_j).
// The four computation paths are kept separate so they can cross-check
// each other; phi^(k-2) always means the (k-2)-th power of the value.

namespace partmod {

struct BaseMDigits {
  std::uint32_t m = 0;
  std::vector<std::uint32_t> digits;  // c_0..c_(k-1), least significant first
};

// Digits of n mod m^k in base m, exactly k of them (leading zeros kept).
inline BaseMDigits digits_base_m(std::uint64_t n, std::uint32_t m, std::uint32_t k) {
  if (m < 2) throw std::invalid_argument("digits_base_m: base must be >= 2");
  if (k < 1) throw std::invalid_argument("digits_base_m: k must be >= 1");
  BaseMDigits d;
  d.m = m;
  d.digits.reserve(k);
  for (std::uint32_t j = 0; j < k; ++j) {
    d.digits.push_back(static_cast<std::uint32_t>(n % m));
    n /= m;
  }
  return d;
}

// p(n,k) mod m for the geometric sequence, via the digit product; k=1 is
// the constant count 1.
inline std::uint32_t mary_residue(std::uint64_t n, std::uint32_t m, std::uint32_t k) {
  if (m < 2) throw std::invalid_argument("mary_residue: modulus must be >= 2");
  if (k < 1) throw std::invalid_argument("mary_residue: k must be >= 1");
  if (k == 1) return 1;
  const BaseMDigits d = digits_base_m(n, m, k);
  std::uint64_t prod = 1;
  for (std::uint32_t j = 1; j < k; ++j) prod = (prod * (d.digits[j] + 1)) % m;
  return static_cast<std::uint32_t>(prod);
}

namespace detail {

inline void require_class(std::uint64_t i, std::uint32_t m, const char* what) {
  if (i >= m)
    throw std::invalid_argument(std::string(what) + ": class index " + std::to_string(i) +
                                " must be < modulus " + std::to_string(m));
}

}  // namespace detail

// Count of n in [0, m^k) with mary_residue(n,m,k) == i, by enumeration.
inline mpz_class r_count_bruteforce(std::uint64_t i, std::uint32_t m, std::uint32_t k,
                                    std::uint64_t cap = 100'000'000) {
  detail::require_class(i, m, "r_count_bruteforce");
  if (k < 1) throw std::invalid_argument("r_count_bruteforce: k must be >= 1");
  const mpz_class space = pow_u64(m, k);
  if (space > cap)
    throw resource_error("r_count_bruteforce: m^k = " + space.get_str() +
                             " values exceed the enumeration cap " + std::to_string(cap),
                         static_cast<std::uint64_t>(cap));
  const auto limit = static_cast<std::uint64_t>(space.get_ui());
  mpz_class count = 0;
  for (std::uint64_t n = 0; n < limit; ++n)
    if (mary_residue(n, m, k) == i) ++count;
  return count;
}

// Row-by-row evaluation of the gcd recurrence from the k=1 base case.
inline mpz_class r_count_recurrence(std::uint64_t i, std::uint32_t m, std::uint32_t k) {
  detail::require_class(i, m, "r_count_recurrence");
  if (k < 1) throw std::invalid_argument("r_count_recurrence: k must be >= 1");
  std::vector<mpz_class> row(m, 0);
  if (m > 1) row[1] = m;
  for (std::uint32_t depth = 2; depth <= k; ++depth) {
    std::vector<mpz_class> next(m, 0);
    for (std::uint32_t c = 0; c < m; ++c) {
      const std::uint64_t gc = std::gcd<std::uint64_t>(c, m);  // gcd(0,m) = m
      mpz_class total = 0;
      for (std::uint32_t l = 0; l < m; ++l) {
        const std::uint64_t gl = std::gcd<std::uint64_t>(l, m);
        if (gc % gl == 0) total += row[l] * gl;
      }
      next[c] = std::move(total);
    }
    row = std::move(next);
  }
  return row[i];
}

// Divisor-sum form, valid for class indices dividing the modulus (reduce a
// general index to gcd(i,m) first); k=2 is the constant row m.
inline mpz_class r_count_divisor_form(std::uint64_t i, std::uint32_t m, std::uint32_t k) {
  detail::require_class(i, m, "r_count_divisor_form");
  if (k < 2) throw std::invalid_argument("r_count_divisor_form: k must be >= 2");
  if (k == 2) return mpz_class(m);
  if (i == 0 || m % i != 0)
    throw std::invalid_argument("r_count_divisor_form: class " + std::to_string(i) +
                                " must be a positive divisor of the modulus " + std::to_string(m));
  mpz_class total = 0;
  for (std::uint64_t l : divisors(i)) total += mpz_class(l) * euler_phi(m / l) * r_count_divisor_form(l, m, k - 1);
  return total;
}

// Product closed form, valid when i * rad(i) divides m.
inline mpz_class r_count_closed_form(std::uint64_t i, std::uint32_t m, std::uint32_t k) {
  detail::require_class(i, m, "r_count_closed_form");
  if (k < 2) throw std::invalid_argument("r_count_closed_form: k must be >= 2");
  if (i == 0)
    throw not_applicable("closed form not applicable: class 0 has no product formula");
  const std::uint64_t hyp = i * radical(i);  // i < m <= 2^32, no overflow
  if (hyp > m || m % hyp != 0)
    throw not_applicable("closed form not applicable: i*rad(i) = " + std::to_string(hyp) +
                         " does not divide the modulus " + std::to_string(m));
  mpz_class result = mpz_class(m) * pow_u64(euler_phi(m), k - 2);
  for (const auto& [p, alpha] : factorize(i).factors) result *= binomial(alpha + k - 2, alpha);
  return result;
}

// For prime modulus and a nonzero class: m * (m-1)^(k-2) solutions mod m^k.
inline mpz_class mary_prime_solution_count(std::uint64_t i, std::uint32_t m, std::uint32_t k) {
  if (!is_prime(m))
    throw std::invalid_argument("mary_prime_solution_count: modulus " + std::to_string(m) +
                                " is not prime");
  if (i < 1 || i >= m)
    throw std::invalid_argument("mary_prime_solution_count: class must be in [1, m)");
  if (k < 2) throw std::invalid_argument("mary_prime_solution_count: k must be >= 2");
  return mpz_class(m) * pow_u64(m - 1, k - 2);
}

enum class RMethod { brute, recurrence, divisor, closed };

inline const char* to_string(RMethod m) {
  switch (m) {
    case RMethod::brute: return "brute";
    case RMethod::recurrence: return "recurrence";
    case RMethod::divisor: return "divisor";
    case RMethod::closed: return "closed";
  }
  return "?";
}

struct RCountTable {
  std::uint32_t m = 0;
  std::uint32_t k = 0;
  RMethod method = RMethod::recurrence;
  std::vector<mpz_class> r;  // r[i] for i in [0, m)
};

namespace detail {

// The special-class formulas cover classes dividing m; everything else
// follows from the gcd reduction, and class 0 by subtraction from m^k.
template <class PerDivisor>
RCountTable table_from_divisor_classes(std::uint32_t m, std::uint32_t k, RMethod method,
                                       PerDivisor&& value_for) {
  RCountTable t{m, k, method, std::vector<mpz_class>(m, 0)};
  std::vector<mpz_class> by_divisor(m, 0);
  for (std::uint64_t d : divisors(m))
    if (d < m) by_divisor[static_cast<std::size_t>(d)] = value_for(d);
  mpz_class rest = 0;
  for (std::uint32_t i = 1; i < m; ++i) {
    t.r[i] = by_divisor[static_cast<std::size_t>(std::gcd<std::uint64_t>(i, m))];
    rest += t.r[i];
  }
  t.r[0] = pow_u64(m, k) - rest;
  if (t.r[0] < 0)
    throw theorem_violation("r-count table for m=" + std::to_string(m) + " k=" + std::to_string(k) +
                            " sums past m^k");
  return t;
}

}  // namespace detail

inline void validate_r_table(const RCountTable& t) {
  const mpz_class space = pow_u64(t.m, t.k);
  mpz_class sum = 0;
  for (const auto& v : t.r) sum += v;
  if (sum != space)
    throw theorem_violation("r-count table for m=" + std::to_string(t.m) +
                            " k=" + std::to_string(t.k) + " sums to " + sum.get_str() +
                            ", expected m^k = " + space.get_str());
  // The reduction r[i] == r[gcd(i, m)] needs at least two digits; with a
  // single digit the product always lands in class 1, so the rule is vacuous.
  if (t.k < 2) return;
  for (std::uint32_t i = 1; i < t.m; ++i) {
    const auto g = static_cast<std::size_t>(std::gcd<std::uint64_t>(i, t.m));
    if (g < t.m && t.r[i] != t.r[g])
      throw theorem_violation("r-count table for m=" + std::to_string(t.m) +
                              " k=" + std::to_string(t.k) + " breaks the gcd reduction at class " +
                              std::to_string(i));
  }
}

inline RCountTable r_count_table(std::uint32_t m, std::uint32_t k, RMethod method,
                                 std::uint64_t brute_cap = 100'000'000) {
  if (m < 2) throw std::invalid_argument("r_count_table: modulus must be >= 2");
  if (k < 1) throw std::invalid_argument("r_count_table: k must be >= 1");
  RCountTable t;
  switch (method) {
    case RMethod::brute: {
      t = RCountTable{m, k, method, std::vector<mpz_class>(m, 0)};
      const mpz_class space = pow_u64(m, k);
      if (space > brute_cap)
        throw resource_error("r_count_table: m^k = " + space.get_str() +
                                 " values exceed the enumeration cap " + std::to_string(brute_cap),
                             brute_cap);
      const auto limit = static_cast<std::uint64_t>(space.get_ui());
      for (std::uint64_t n = 0; n < limit; ++n) ++t.r[mary_residue(n, m, k)];
      break;
    }
    case RMethod::recurrence: {
      t = RCountTable{m, k, method, std::vector<mpz_class>(m, 0)};
      for (std::uint32_t i = 0; i < m; ++i) t.r[i] = r_count_recurrence(i, m, k);
      break;
    }
    case RMethod::divisor:
      if (k < 2) throw std::invalid_argument("r_count_table: divisor method needs k >= 2");
      t = detail::table_from_divisor_classes(
          m, k, method, [&](std::uint64_t d) { return r_count_divisor_form(d, m, k); });
      break;
    case RMethod::closed:
      if (k < 2) throw std::invalid_argument("r_count_table: closed method needs k >= 2");
      t = detail::table_from_divisor_classes(
          m, k, method, [&](std::uint64_t d) { return r_count_closed_form(d, m, k); });
      break;
  }
  validate_r_table(t);
  return t;
}

// Density of the zero class for the geometric sequence is at least
// 1 - ((m-1)/m)^(k-1).
inline Rational zero_density_lower_bound(std::uint32_t m, std::uint32_t k) {
  if (m < 2 || k < 2) throw std::invalid_argument("zero_density_lower_bound: need m, k >= 2");
  return Rational(m - 1, m).pow(k - 1).complement();
}

// Digit-rule classification for small moduli; `agree` cross-checks the
// stated rule against the digit product and is surfaced, never silently
// corrected.
struct DigitClassification {
  std::uint32_t m = 0;
  std::uint32_t k = 0;
  std::vector<std::uint32_t> digits;   // c_0..c_(k-1) of n mod m^k
  std::uint32_t predicted = 0;
  std::uint32_t actual = 0;
  bool agree = false;
  std::string rule;
};

inline DigitClassification characterize(std::uint64_t n, std::uint32_t m, std::uint32_t k) {
  if (m != 2 && m != 3 && m != 4)
    throw std::invalid_argument("characterize: digit rules are implemented for m in {2,3,4}");
  if (k < 1) throw std::invalid_argument("characterize: k must be >= 1");
  DigitClassification c;
  c.m = m;
  c.k = k;
  c.digits = digits_base_m(n, m, k).digits;
  c.actual = mary_residue(n, m, k);

  std::size_t ones = 0, twos = 0, threes = 0;
  for (std::uint32_t j = 1; j < k; ++j) {
    ones += c.digits[j] == 1;
    twos += c.digits[j] == 2;
    threes += c.digits[j] == 3;
  }
  switch (m) {
    case 2:
      c.predicted = ones == 0 ? 1 : 0;
      c.rule = "odd exactly when no digit c_1..c_(k-1) equals 1, i.e. n = 0 or 1 mod 2^k";
      break;
    case 3:
      if (twos > 0)
        c.predicted = 0;
      else
        c.predicted = ones % 2 == 0 ? 1 : 2;
      c.rule = "0 if some digit c_1..c_(k-1) is 2; otherwise 1 for an even number of 1-digits, 2 for an odd number";
      break;
    case 4:
      if (threes > 0 || ones >= 2)
        c.predicted = 0;
      else if (ones == 1)
        c.predicted = 2;
      else
        c.predicted = twos % 2 == 0 ? 1 : 3;
      c.rule = "0 if some digit c_1..c_(k-1) is 3 or two of them are 1; 2 if exactly one is 1; otherwise 1 or 3 by the parity of the number of 2-digits";
      break;
  }
  c.agree = c.predicted == c.actual;
  return c;
}

inline json to_json(const RCountTable& t) {
  json r = json::array();
  for (const auto& v : t.r) r.push_back(json_big(v));
  return json{{"m", t.m},
              {"k", t.k},
              {"method", to_string(t.method)},
              {"r", std::move(r)},
              {"total", json_big(pow_u64(t.m, t.k))}};
}

}  // namespace partmod
