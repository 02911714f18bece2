#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "condensate/errors.hpp"

namespace condensate {

/// Exact rational number in canonical form (positive denominator, reduced).
using Scalar = mpq_class;

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

/// "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Scalar& s) { return s.get_str(); }

/// Parses "p" or "p/q" with an optional leading minus sign. Rejects zero
/// denominators and anything else.
inline Scalar parse_scalar(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  if (!digits(num)) throw InputError("malformed rational: '" + std::string(text) + "'");
  if (slash != std::string_view::npos) {
    const std::string_view den = body.substr(slash + 1);
    if (!digits(den)) throw InputError("malformed rational: '" + std::string(text) + "'");
    if (den.find_first_not_of('0') == std::string_view::npos)
      throw InputError("zero denominator: '" + std::string(text) + "'");
  }
  Scalar out(std::string(text), 10);
  out.canonicalize();
  return out;
}

}  // namespace condensate
