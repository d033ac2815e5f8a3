#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "cyclerep/error.hpp"

namespace cyclerep {

/// Arbitrary-precision rational. GMP keeps every result in canonical form
/// (positive denominator, coprime numerator/denominator).
using Rational = mpq_class;

/// Exact embedding of a finite binary64 value into Q.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("rational_from_double: non-finite input");
  }
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);  // exact for finite doubles
  return q;
}

/// Nearest-toward-zero binary64; exact whenever q is itself a double.
inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool is_unit_or_zero(const Rational& q) {
  return q.get_den() == 1 && (q.get_num() == 0 || q.get_num() == 1 || q.get_num() == -1);
}

inline Rational floor_of(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

inline Rational ceil_of(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(c);
}

/// "num/den" (or "num" for integers), matching GMP's canonical string form.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw ValidationError("parse_rational: cannot parse '" + s + "'");
  }
  q.canonicalize();
  return q;
}

/// Fits in int64? Used to decide JSON number vs string encoding.
inline std::optional<std::int64_t> small_integer(const mpz_class& z) {
  if (!z.fits_slong_p()) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(z.get_si());
}

inline Rational abs_of(const Rational& q) { return abs(q); }

}  // namespace cyclerep
