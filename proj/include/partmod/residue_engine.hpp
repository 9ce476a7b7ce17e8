#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "partmod/errors.hpp"
#include "partmod/sequences.hpp"

// Residues of restricted multi-color partition counts. The window is filled
// by the coefficient form of the one-part-at-a-time recurrence: starting
// from (1,0,0,...), each part a contributes an in-place ascending pass
// c[n] += c[n-a] (mod m), which multiplies the series by 1/(1-x^a).
//
// brute_force_count is the deliberately separate oracle: it enumerates
// multiset multiplicities over exact big integers and shares no code with
// the modular pass.

namespace partmod {

struct ComputeOptions {
  std::uint64_t memory_cap = std::uint64_t(2) << 30;  // bytes
};

namespace detail {

template <class T>
inline void accumulate_part(std::span<T> c, std::uint64_t part, std::uint32_t m) {
  if (part >= c.size()) return;
  const std::size_t a = static_cast<std::size_t>(part);
  for (std::size_t n = a; n < c.size(); ++n) {
    const std::uint32_t t = std::uint32_t(c[n]) + std::uint32_t(c[n - a]);
    c[n] = static_cast<T>(t >= m ? t - m : t);
  }
}

}  // namespace detail

class ResidueWindow {
 public:
  static constexpr std::uint32_t kMaxNarrowModulus = 255;
  static constexpr std::uint32_t kMaxModulus = 65535;

  ResidueWindow(std::string seq_spec, std::uint32_t k, std::uint32_t modulus, std::uint64_t offset,
                std::variant<std::vector<std::uint8_t>, std::vector<std::uint16_t>> values)
      : seq_spec_(std::move(seq_spec)),
        k_(k),
        modulus_(modulus),
        offset_(offset),
        values_(std::move(values)) {}

  const std::string& seq_spec() const { return seq_spec_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint64_t offset() const { return offset_; }
  bool wide() const { return values_.index() == 1; }

  std::size_t size() const {
    return wide() ? std::get<1>(values_).size() : std::get<0>(values_).size();
  }

  std::uint16_t at(std::size_t i) const {
    return wide() ? std::get<1>(values_)[i] : std::get<0>(values_)[i];
  }

  // Calls f with a std::span<const T> over the raw storage.
  template <class F>
  decltype(auto) visit(F&& f) const {
    if (wide()) return f(std::span<const std::uint16_t>(std::get<1>(values_)));
    return f(std::span<const std::uint8_t>(std::get<0>(values_)));
  }

  void truncate(std::uint64_t length) {
    if (length > size()) throw std::invalid_argument("truncate: window shorter than requested length");
    if (wide())
      std::get<1>(values_).resize(static_cast<std::size_t>(length));
    else
      std::get<0>(values_).resize(static_cast<std::size_t>(length));
  }

  void write(std::ostream& os) const;
  static ResidueWindow read(std::istream& is, std::optional<std::uint64_t> max_length = std::nullopt);

 private:
  std::string seq_spec_;
  std::uint32_t k_;
  std::uint32_t modulus_;
  std::uint64_t offset_;
  std::variant<std::vector<std::uint8_t>, std::vector<std::uint16_t>> values_;
};

// Window of p(n, k) mod m for 0 <= n < length, at offset 0.
inline ResidueWindow compute_residues(const PartSequence& seq, std::uint32_t k, std::uint32_t m,
                                      std::uint64_t length, const ComputeOptions& opts = {}) {
  if (m < 2 || m > ResidueWindow::kMaxModulus)
    throw std::invalid_argument("compute_residues: modulus must be in [2, 65535]");
  if (length < 1) throw std::invalid_argument("compute_residues: length must be >= 1");
  const bool wide = m > ResidueWindow::kMaxNarrowModulus;
  const std::uint64_t bytes = length * (wide ? 2 : 1);
  if (bytes > opts.memory_cap)
    throw resource_error("compute_residues: window of " + std::to_string(bytes) +
                             " bytes exceeds the memory cap of " + std::to_string(opts.memory_cap),
                         bytes);
  const std::vector<std::uint64_t> parts = seq.prefix(k);

  const auto run = [&](auto tag) {
    using T = decltype(tag);
    std::vector<T> c(static_cast<std::size_t>(length), 0);
    c[0] = 1;
    for (std::uint64_t a : parts) detail::accumulate_part(std::span<T>(c), a, m);
    return c;
  };
  if (wide)
    return ResidueWindow(seq.spec(), k, m, 0, run(std::uint16_t{}));
  return ResidueWindow(seq.spec(), k, m, 0, run(std::uint8_t{}));
}

// Exact number of multi-color partitions of n into the indexed parts.
// Recursion on the part index with a multiplicity loop, memoized on
// (index, remaining); big integers throughout.
inline mpz_class brute_force_count(std::span<const std::uint64_t> parts, std::uint64_t n,
                                   std::uint64_t cap = 2000) {
  if (n > cap)
    throw std::invalid_argument("brute_force_count: n = " + std::to_string(n) +
                                " exceeds the oracle cap " + std::to_string(cap));
  for (std::uint64_t a : parts)
    if (a == 0) throw std::invalid_argument("brute_force_count: parts must be positive");

  std::vector<std::vector<std::optional<mpz_class>>> memo(
      parts.size() + 1, std::vector<std::optional<mpz_class>>(static_cast<std::size_t>(n) + 1));

  const auto count = [&](auto&& self, std::size_t index, std::uint64_t remaining) -> const mpz_class& {
    auto& slot = memo[index][static_cast<std::size_t>(remaining)];
    if (slot) return *slot;
    mpz_class total = 0;
    if (index == 0) {
      total = (remaining == 0) ? 1 : 0;
    } else {
      const std::uint64_t a = parts[index - 1];
      for (std::uint64_t used = 0; used <= remaining; used += a)
        total += self(self, index - 1, remaining - used);
    }
    slot = std::move(total);
    return *slot;
  };
  return count(count, parts.size(), n);
}

// ---- binary window format ------------------------------------------------
//
//   magic "PMRW" | u32 version=1 | u32 spec_len | spec bytes
//   | u32 k | u32 modulus | u64 offset | u64 length | u8 width | payload
//
// Little-endian, payload is raw residues (width bytes each). Used by the
// CLI window cache.

namespace detail {

template <class T>
void write_le(std::ostream& os, T v) {
  std::uint8_t buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = std::uint8_t(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
  std::uint8_t buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("residue window: truncated stream");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(buf[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void ResidueWindow::write(std::ostream& os) const {
  os.write("PMRW", 4);
  detail::write_le<std::uint32_t>(os, 1);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(seq_spec_.size()));
  os.write(seq_spec_.data(), static_cast<std::streamsize>(seq_spec_.size()));
  detail::write_le<std::uint32_t>(os, k_);
  detail::write_le<std::uint32_t>(os, modulus_);
  detail::write_le<std::uint64_t>(os, offset_);
  detail::write_le<std::uint64_t>(os, size());
  const std::uint8_t width = wide() ? 2 : 1;
  os.write(reinterpret_cast<const char*>(&width), 1);
  if (wide()) {
    for (std::uint16_t v : std::get<1>(values_)) detail::write_le<std::uint16_t>(os, v);
  } else {
    const auto& v = std::get<0>(values_);
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
  }
  if (!os) throw std::runtime_error("residue window: write failed");
}

inline ResidueWindow ResidueWindow::read(std::istream& is, std::optional<std::uint64_t> max_length) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PMRW", 4) != 0)
    throw std::runtime_error("residue window: bad magic");
  if (detail::read_le<std::uint32_t>(is) != 1)
    throw std::runtime_error("residue window: unsupported version");
  const std::uint32_t spec_len = detail::read_le<std::uint32_t>(is);
  std::string spec(spec_len, '\0');
  is.read(spec.data(), spec_len);
  const std::uint32_t k = detail::read_le<std::uint32_t>(is);
  const std::uint32_t modulus = detail::read_le<std::uint32_t>(is);
  const std::uint64_t offset = detail::read_le<std::uint64_t>(is);
  const std::uint64_t stored = detail::read_le<std::uint64_t>(is);
  std::uint8_t width = 0;
  is.read(reinterpret_cast<char*>(&width), 1);
  if (!is || (width != 1 && width != 2)) throw std::runtime_error("residue window: bad width");
  const std::uint64_t length = max_length ? std::min(stored, *max_length) : stored;
  if (width == 1) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(length));
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(length));
    if (!is) throw std::runtime_error("residue window: truncated payload");
    return ResidueWindow(std::move(spec), k, modulus, offset, std::move(v));
  }
  std::vector<std::uint16_t> v(static_cast<std::size_t>(length));
  for (auto& x : v) x = detail::read_le<std::uint16_t>(is);
  return ResidueWindow(std::move(spec), k, modulus, offset, std::move(v));
}

}  // namespace partmod
