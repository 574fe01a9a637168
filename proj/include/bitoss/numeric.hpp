#pragma once

// Numeric back ends for probabilities: exact rationals (GMP) and doubles.
// Every container in the library is templated on one of the two; mixing them
// in a single expression does not compile. The runtime `Scalar` below carries
// the mode explicitly for values read from files.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

#include "bitoss/error.hpp"

namespace bitoss {

using Rational = mpq_class;
using Integer = mpz_class;

enum class Mode { rational, float64 };

const char* to_string(Mode mode);

/// Builds num/den in lowest terms with a positive denominator.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);

template <class S>
struct NumTraits;

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::rational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_integer(const Integer& v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::float64;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_integer(const Integer& v) { return v.get_d(); }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
};

template <class S>
concept ProbScalar = requires { NumTraits<S>::exact; };

/// base^exp by repeated squaring; 0^0 = 1.
template <class S>
S ipow(S base, unsigned exp) {
  S result = NumTraits<S>::one();
  while (exp > 0) {
    if (exp & 1u) result *= base;
    exp >>= 1u;
    if (exp > 0) base *= base;
  }
  return result;
}

Integer factorial(unsigned n);
Integer binomial_coefficient(unsigned n, unsigned k);

/// A probability value tagged with the mode that produced it. Arithmetic
/// between different modes throws ModeMismatch.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(double d) : value_(d) {}

  Mode mode() const { return value_.index() == 0 ? Mode::rational : Mode::float64; }
  bool is_exact() const { return mode() == Mode::rational; }

  const Rational& rational() const;
  double as_double() const;

  Scalar operator+(const Scalar& other) const;
  Scalar operator-(const Scalar& other) const;
  Scalar operator*(const Scalar& other) const;
  Scalar operator/(const Scalar& other) const;
  bool operator==(const Scalar& other) const;

  std::string to_string() const;

 private:
  std::variant<Rational, double> value_;
};

}  // namespace bitoss
