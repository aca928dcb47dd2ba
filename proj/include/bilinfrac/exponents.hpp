#pragma once

#include "bilinfrac/rational.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace bilinfrac {

/// A Lebesgue exponent p in (0, inf], held exactly through its reciprocal.
/// p = inf is the value with reciprocal zero.
class Exponent {
 public:
  /// p = 1.
  Exponent() : recip_(1) {}

  static Exponent infinity() { return Exponent(Rational(0), Tag{}); }
  /// Throws std::domain_error unless p > 0.
  static Exponent from_value(const Rational& p);
  /// Throws std::domain_error unless 1/p >= 0.
  static Exponent from_reciprocal(const Rational& recip);
  /// Accepts "inf", "a/b", integers and terminating decimals.
  static Exponent parse(std::string_view text);

  const Rational& reciprocal() const { return recip_; }
  bool is_infinite() const { return recip_ == 0; }
  /// Throws std::domain_error for p = inf.
  Rational value() const;
  /// +inf for p = inf.
  double to_double() const;

  bool is_one() const { return recip_ == 1; }
  /// 1 < p < inf.
  bool in_open_range() const { return recip_ > 0 && recip_ < 1; }

  /// Orders by the exponent p itself, so larger reciprocals compare smaller.
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    int c = cmp(b.recip_, a.recip_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  friend bool operator==(const Exponent& a, const Exponent& b) { return a.recip_ == b.recip_; }

 private:
  struct Tag {};
  Exponent(Rational recip, Tag) : recip_(std::move(recip)) {}

  Rational recip_;
};

std::string to_string(const Exponent& p);

/// The order lambda of the operator. Its admissible range depends on the operator
/// and is checked by the classifiers.
struct Order {
  Rational value;

  friend bool operator==(const Order&, const Order&) = default;
};

std::string to_string(const Order& lambda);

/// p' with 1/p + 1/p' = 1. Throws std::domain_error when p < 1.
Exponent conjugate(const Exponent& p);

/// n1/p1' + n2/p2' + m/q. Throws std::domain_error if p1 < 1, p2 < 1 or a dimension is not positive.
Order homogeneous_lambda(int n1, int n2, int m, const Exponent& p1, const Exponent& p2, const Exponent& q);

}  // namespace bilinfrac
