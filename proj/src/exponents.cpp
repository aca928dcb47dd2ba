#include "bilinfrac/exponents.hpp"

#include <limits>
#include <stdexcept>

namespace bilinfrac {

Exponent Exponent::from_value(const Rational& p) {
  if (sgn(p) <= 0) throw std::domain_error("exponent must be positive, got " + bilinfrac::to_string(p));
  Rational r = 1 / p;
  r.canonicalize();
  return Exponent(std::move(r), Tag{});
}

Exponent Exponent::from_reciprocal(const Rational& recip) {
  if (sgn(recip) < 0)
    throw std::domain_error("exponent reciprocal must be non-negative, got " + bilinfrac::to_string(recip));
  Rational r = recip;
  r.canonicalize();
  return Exponent(std::move(r), Tag{});
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  return from_value(parse_rational(text));
}

Rational Exponent::value() const {
  if (is_infinite()) throw std::domain_error("exponent is infinite");
  Rational p = 1 / recip_;
  p.canonicalize();
  return p;
}

double Exponent::to_double() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return 1.0 / recip_.get_d();
}

std::string to_string(const Exponent& p) {
  if (p.is_infinite()) return "inf";
  return to_string(p.value());
}

std::string to_string(const Order& lambda) { return to_string(lambda.value); }

Exponent conjugate(const Exponent& p) {
  if (p.reciprocal() > 1) throw std::domain_error("conjugate undefined for p = " + to_string(p) + " < 1");
  return Exponent::from_reciprocal(1 - p.reciprocal());
}

Order homogeneous_lambda(int n1, int n2, int m, const Exponent& p1, const Exponent& p2, const Exponent& q) {
  if (n1 < 1 || n2 < 1 || m < 1) throw std::domain_error("dimensions must be positive");
  Rational lambda = n1 * conjugate(p1).reciprocal() + n2 * conjugate(p2).reciprocal() + m * q.reciprocal();
  lambda.canonicalize();
  return Order{lambda};
}

}  // namespace bilinfrac
