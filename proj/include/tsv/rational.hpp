// Exact arithmetic aliases and string conversions shared by all modules.
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsv {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

struct TsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (shapes, containment, non-descending chains, ...).
struct PreconditionError : TsvError {
  using TsvError::TsvError;
};

// Feature outside the supported fragment (irrational decorations, non-pointed
// Hilbert basis, ...).
struct UnsupportedError : TsvError {
  using TsvError::TsvError;
};

// A configured search bound was hit before a verdict could be reached.
struct BoundExceededError : TsvError {
  using TsvError::TsvError;
};

// Accepts "a", "a/b" and "-a/b"; denominator must be positive and nonzero.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den <= 0) throw PreconditionError("rational denominator must be positive: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw PreconditionError("cannot parse rational: '" + s + "'");
  }
}

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace tsv
