#pragma once

#include <cstdint>
#include <string>

#include "lct/errors.hpp"

namespace lct {

// Exact rational with int64 numerator/denominator, always normalized
// (den > 0, gcd(|num|, den) == 1).  Arithmetic goes through 128-bit
// intermediates and throws DomainError on int64 overflow.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);
  // NOLINTNEXTLINE(google-explicit-constructor): integers are rationals.
  Rational(std::int64_t num) : num_(num), den_(1) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double to_double() const;
  // Serializes as "p/q" ("p" when q == 1).
  std::string to_string() const;
  // Accepts "p", "p/q", optional leading '-'.
  static Rational parse(const std::string& text);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace lct
