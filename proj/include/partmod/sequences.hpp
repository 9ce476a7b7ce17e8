#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Part-sequence families and the textual spec grammar used by the CLI:
//
//   power:<d> | triangular | pentagonal | hexagonal | squares-plus-one
//   | mary:<m> | list:<c1>,<c2>,...
//
// Named families are strictly increasing; explicit lists may repeat parts
// (equal parts at different positions count as distinct colors).

namespace partmod {

enum class Family {
  power,             // i^d
  triangular,        // i(i+1)/2
  pentagonal,        // (3i^2-i)/2
  hexagonal,         // 2i^2-i
  squares_plus_one,  // (i-1)^2+1
  mary,              // m^(i-1)
  explicit_list,
};

class PartSequence {
 public:
  // Parts must be addressable inside byte windows, so anything above
  // 2^32-1 is rejected outright.
  static constexpr std::uint64_t kMaxPart = std::numeric_limits<std::uint32_t>::max();

  static PartSequence power(std::uint64_t d) {
    if (d < 1) throw std::invalid_argument("power: exponent must be >= 1");
    return PartSequence(Family::power, d, {}, "power:" + std::to_string(d));
  }
  static PartSequence triangular() { return PartSequence(Family::triangular, 0, {}, "triangular"); }
  static PartSequence pentagonal() { return PartSequence(Family::pentagonal, 0, {}, "pentagonal"); }
  static PartSequence hexagonal() { return PartSequence(Family::hexagonal, 0, {}, "hexagonal"); }
  static PartSequence squares_plus_one() {
    return PartSequence(Family::squares_plus_one, 0, {}, "squares-plus-one");
  }
  static PartSequence mary(std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("mary: base must be >= 2");
    return PartSequence(Family::mary, m, {}, "mary:" + std::to_string(m));
  }
  static PartSequence explicit_list(std::vector<std::uint64_t> parts) {
    if (parts.empty()) throw std::invalid_argument("list: must contain at least one part");
    std::string spec = "list:";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < 1) throw std::invalid_argument("list: parts must be positive");
      if (parts[i] > kMaxPart) throw std::invalid_argument("list: part exceeds 2^32-1");
      if (i > 0 && parts[i] < parts[i - 1])
        throw std::invalid_argument("list: parts must be non-decreasing");
      if (i > 0) spec += ',';
      spec += std::to_string(parts[i]);
    }
    return PartSequence(Family::explicit_list, 0, std::move(parts), std::move(spec));
  }

  // Parses the spec grammar; syntax errors report the offending position.
  static PartSequence parse(std::string_view text);

  Family family() const { return family_; }
  std::uint64_t param() const { return param_; }
  bool is_explicit() const { return family_ == Family::explicit_list; }
  std::size_t explicit_size() const { return parts_.size(); }

  // Canonical spec string; parse(spec()) reproduces the sequence.
  const std::string& spec() const { return spec_; }

  // 1-based i-th part.
  std::uint64_t term(std::uint64_t i) const {
    if (i < 1) throw std::invalid_argument("term: index must be >= 1");
    // The quadratic families exceed kMaxPart long before this index, and
    // below it their intermediates fit comfortably in 64 bits.
    constexpr std::uint64_t kQuadIndexBound = 3'000'000;
    switch (family_) {
      case Family::power: {
        // Partial powers are monotone, so per-step cap checks are exact.
        std::uint64_t v = 1;
        for (std::uint64_t e = 0; e < param_; ++e) v = checked_mul(v, i);
        return v;
      }
      case Family::triangular:
        if (i > kQuadIndexBound) throw std::invalid_argument("part exceeds 2^32-1");
        return checked_part(i * (i + 1) / 2);
      case Family::pentagonal:
        if (i > kQuadIndexBound) throw std::invalid_argument("part exceeds 2^32-1");
        return checked_part((3 * i * i - i) / 2);
      case Family::hexagonal:
        if (i > kQuadIndexBound) throw std::invalid_argument("part exceeds 2^32-1");
        return checked_part(2 * i * i - i);
      case Family::squares_plus_one:
        if (i > kQuadIndexBound) throw std::invalid_argument("part exceeds 2^32-1");
        return checked_part((i - 1) * (i - 1) + 1);
      case Family::mary: {
        std::uint64_t v = 1;
        for (std::uint64_t e = 1; e < i; ++e) v = checked_mul(v, param_);
        return v;
      }
      case Family::explicit_list:
        if (i > parts_.size())
          throw std::out_of_range("term: index " + std::to_string(i) + " past end of explicit list of length " +
                                  std::to_string(parts_.size()));
        return parts_[i - 1];
    }
    throw std::logic_error("term: unknown family");
  }

  std::vector<std::uint64_t> prefix(std::uint32_t k) const {
    if (k < 1) throw std::invalid_argument("prefix: k must be >= 1");
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint32_t i = 1; i <= k; ++i) out.push_back(term(i));
    return out;
  }

  std::uint64_t gcd_prefix(std::uint32_t k) const {
    std::uint64_t g = 0;
    for (std::uint64_t a : prefix(k)) g = std::gcd(g, a);
    return g;
  }

  friend bool operator==(const PartSequence& a, const PartSequence& b) { return a.spec_ == b.spec_; }

 private:
  PartSequence(Family family, std::uint64_t param, std::vector<std::uint64_t> parts, std::string spec)
      : family_(family), param_(param), parts_(std::move(parts)), spec_(std::move(spec)) {}

  static std::uint64_t checked_part(std::uint64_t v) {
    if (v > kMaxPart) throw std::invalid_argument("part exceeds 2^32-1");
    return v;
  }
  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r) || r > kMaxPart)
      throw std::invalid_argument("part exceeds 2^32-1");
    return r;
  }

  Family family_;
  std::uint64_t param_;
  std::vector<std::uint64_t> parts_;
  std::string spec_;
};

namespace detail {

inline std::uint64_t parse_u64_at(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
    throw std::invalid_argument("sequence spec: expected a number at position " + std::to_string(pos) +
                                " in '" + std::string(text) + "'");
  std::uint64_t v = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    const std::uint64_t digit = std::uint64_t(text[pos] - '0');
    if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
      throw std::invalid_argument("sequence spec: number too large at position " + std::to_string(pos));
    v = v * 10 + digit;
    ++pos;
  }
  return v;
}

}  // namespace detail

inline PartSequence PartSequence::parse(std::string_view text) {
  const auto expect_end = [&](std::size_t pos) {
    if (pos != text.size())
      throw std::invalid_argument("sequence spec: unexpected trailing text at position " +
                                  std::to_string(pos) + " in '" + std::string(text) + "'");
  };
  if (text == "triangular") return triangular();
  if (text == "pentagonal") return pentagonal();
  if (text == "hexagonal") return hexagonal();
  if (text == "squares-plus-one") return squares_plus_one();
  if (text.starts_with("power:")) {
    std::size_t pos = 6;
    const std::uint64_t d = detail::parse_u64_at(text, pos);
    expect_end(pos);
    return power(d);
  }
  if (text.starts_with("mary:")) {
    std::size_t pos = 5;
    const std::uint64_t m = detail::parse_u64_at(text, pos);
    expect_end(pos);
    return mary(m);
  }
  if (text.starts_with("list:")) {
    std::vector<std::uint64_t> parts;
    std::size_t pos = 5;
    parts.push_back(detail::parse_u64_at(text, pos));
    while (pos < text.size()) {
      if (text[pos] != ',')
        throw std::invalid_argument("sequence spec: expected ',' at position " + std::to_string(pos) +
                                    " in '" + std::string(text) + "'");
      ++pos;
      parts.push_back(detail::parse_u64_at(text, pos));
    }
    return explicit_list(std::move(parts));
  }
  throw std::invalid_argument("sequence spec: unknown family in '" + std::string(text) +
                              "' (expected power:<d>, triangular, pentagonal, hexagonal, "
                              "squares-plus-one, mary:<m> or list:<c1>,<c2>,...)");
}

}  // namespace partmod
