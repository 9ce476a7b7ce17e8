#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

// Exact non-negative rationals, always stored reduced. Densities and bound
// margins are claims of exact equality, so there is no floating point
// anywhere near this type.

namespace partmod {

class Rational {
 public:
  Rational() : q_(0) {}

  Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
    if (num < 0) throw std::invalid_argument("Rational: numerator must be non-negative");
    q_.canonicalize();
  }

  Rational(std::uint64_t num, std::uint64_t den)
      : Rational(mpz_class(static_cast<unsigned long>(num)),
                 mpz_class(static_cast<unsigned long>(den))) {}

  static Rational integer(std::uint64_t n) { return Rational(n, 1); }

  const mpz_class& numerator() const { return q_.get_num(); }
  const mpz_class& denominator() const { return q_.get_den(); }

  bool is_zero() const { return q_ == 0; }

  Rational operator+(const Rational& o) const { return Rational(q_ + o.q_); }
  Rational operator*(const Rational& o) const { return Rational(q_ * o.q_); }

  // |a - b|; subtraction is only exposed in absolute form so the
  // non-negativity invariant cannot be broken.
  static Rational abs_diff(const Rational& a, const Rational& b) {
    return Rational(a.q_ >= b.q_ ? a.q_ - b.q_ : b.q_ - a.q_);
  }

  // 1 - *this, valid for values in [0, 1].
  Rational complement() const {
    if (q_ > 1) throw std::invalid_argument("Rational::complement: value exceeds 1");
    return Rational(1 - q_);
  }

  Rational pow(std::uint32_t e) const {
    Rational r = integer(1);
    for (std::uint32_t i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  bool operator==(const Rational& o) const { return q_ == o.q_; }
  std::strong_ordering operator<=>(const Rational& o) const {
    const int c = cmp(q_, o.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "p/q", integers rendered without the denominator ("0", "1", "13/36").
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  static Rational parse(std::string_view text) {
    const std::size_t slash = text.find('/');
    try {
      if (slash == std::string_view::npos)
        return Rational(mpz_class(std::string(text)), mpz_class(1));
      return Rational(mpz_class(std::string(text.substr(0, slash))),
                      mpz_class(std::string(text.substr(slash + 1))));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational::parse: bad fraction '" + std::string(text) + "'");
    }
  }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}

  mpq_class q_;  // canonical and >= 0
};

}  // namespace partmod
