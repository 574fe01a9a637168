#include "bitoss/numeric.hpp"

#include <cstdio>

namespace bitoss {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyMultiset: return "EmptyMultiset";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::WrongSpace: return "WrongSpace";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotFullSupport: return "NotFullSupport";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateObservation: return "DegenerateObservation";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

const char* to_string(Mode mode) { return mode == Mode::rational ? "rational" : "float"; }

Rational make_rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw Error(ErrorKind::OutOfRange, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial_coefficient(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

const Rational& Scalar::rational() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw Error(ErrorKind::ModeMismatch, "scalar is not exact");
}

double Scalar::as_double() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

namespace {

template <class Op>
Scalar combine(const std::variant<Rational, double>& a, const std::variant<Rational, double>& b,
               Op op) {
  if (a.index() != b.index()) throw Error(ErrorKind::ModeMismatch, "mixed rational/float arithmetic");
  if (a.index() == 0) return Scalar(Rational(op(std::get<0>(a), std::get<0>(b))));
  return Scalar(static_cast<double>(op(std::get<1>(a), std::get<1>(b))));
}

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
  return combine(value_, o.value_, [](const auto& x, const auto& y) { return x + y; });
}
Scalar Scalar::operator-(const Scalar& o) const {
  return combine(value_, o.value_, [](const auto& x, const auto& y) { return x - y; });
}
Scalar Scalar::operator*(const Scalar& o) const {
  return combine(value_, o.value_, [](const auto& x, const auto& y) { return x * y; });
}
Scalar Scalar::operator/(const Scalar& o) const {
  if (o.mode() == Mode::rational && o.mode() == mode() && sgn(o.rational()) == 0)
    throw Error(ErrorKind::OutOfRange, "division by zero");
  return combine(value_, o.value_, [](const auto& x, const auto& y) { return x / y; });
}

bool Scalar::operator==(const Scalar& o) const {
  if (value_.index() != o.value_.index())
    throw Error(ErrorKind::ModeMismatch, "comparing rational with float");
  if (value_.index() == 0) return std::get<0>(value_) == std::get<0>(o.value_);
  return std::get<1>(value_) == std::get<1>(o.value_);
}

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return bitoss::to_string(*q);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

}  // namespace bitoss
