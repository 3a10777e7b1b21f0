#pragma once

// Exact rational scalar used for every coordinate, progress value and frame
// multiplier in the workbench. All arithmetic is closed over the rationals;
// nothing in the library ever rounds.
//
// The default backend is GMP (fast). Define LCMSIM_USE_CPP_RATIONAL to fall
// back to the pure header-only boost backend.

#ifdef LCMSIM_USE_CPP_RATIONAL
#include <boost/multiprecision/cpp_int.hpp>
#else
#include <boost/multiprecision/gmp.hpp>
#endif

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lcmsim {

#ifdef LCMSIM_USE_CPP_RATIONAL
using Scalar = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
#else
using Scalar = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
#endif

inline Scalar make_scalar(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  BigInt n(num), d(den);
  if (d < 0) {  // keep the denominator positive on every backend
    n = -n;
    d = -d;
  }
  return Scalar(n, d);
}

// Division guarded against zero: the GMP backend would otherwise trap.
inline Scalar checked_div(const Scalar& a, const Scalar& b) {
  if (b == 0) throw std::domain_error("division by zero rational");
  return a / b;
}

/// Canonical wire form, always "num/den" with den > 0 (e.g. "3/4", "-1/1").
inline std::string scalar_to_string(const Scalar& s) {
  return numerator(s).str() + "/" + denominator(s).str();
}

/// Parses "num/den" or a bare integer "num".
inline Scalar scalar_from_string(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Scalar(BigInt(std::string(text)));
    }
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Scalar(num, den);
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
}

}  // namespace lcmsim
