#pragma once

#include <gmpxx.h>

#include <string>

#include "nlot/errors.hpp"

namespace nlot {

/// Exact probability arithmetic.  Every mass in the artifact is a Rat; no
/// floating point is allowed anywhere near a verification verdict.
using Rat = mpq_class;

/// The only sanctioned way to build a Rat from a fraction: validates the
/// denominator and canonicalizes (GMP comparisons assume canonical form).
inline Rat rat(long long num, long long den = 1) {
  if (den == 0) throw StructuralError("rational with zero denominator");
  Rat r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

/// Canonical "num/den" rendering, denominator always printed ("1/1", "3/4").
inline std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Inverse of rat_str; accepts "3/4" and bare integers "1".
Rat rat_parse(const std::string& text);

inline double rat_double(const Rat& r) { return r.get_d(); }

inline bool is_probability(const Rat& r) { return r >= 0 && r <= 1; }

}  // namespace nlot
