#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace famkit {

/// Exact rational number, always kept in canonical (reduced, positive
/// denominator) form by GMP.
using Rational = mpq_class;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", "p", or a finite decimal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written without a denominator.
std::string to_string(const Rational& value);

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

/// Smallest integer >= value.
mpz_class ceil(const Rational& value);
/// Largest integer <= value.
mpz_class floor(const Rational& value);

}  // namespace famkit
