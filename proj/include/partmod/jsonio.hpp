#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

#include "partmod/rational.hpp"

// Shared JSON conventions: big integers become JSON numbers while they fit
// an unsigned 64-bit value and decimal strings beyond that; rationals are
// always "p/q" strings so no reader ever rounds them.

namespace partmod {

using json = nlohmann::ordered_json;

inline json json_big(const mpz_class& v) {
  if (v.fits_ulong_p()) return json(static_cast<std::uint64_t>(v.get_ui()));
  return json(v.get_str());
}

inline json json_rational(const Rational& r) { return json(r.str()); }

}  // namespace partmod
