#include "lct/rational.hpp"

#include <numeric>

namespace lct {
namespace {

using I128 = __int128;

std::int64_t checked_narrow(I128 v, const char* op) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw DomainError(std::string("rational overflow in ") + op);
  }
  return static_cast<std::int64_t>(v);
}

I128 gcd128(I128 a, I128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  I128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked_narrow(n, "normalize");
  den_ = checked_narrow(d, "normalize");
}

Rational Rational::operator+(const Rational& o) const {
  I128 n = I128(num_) * o.den_ + I128(o.num_) * den_;
  I128 d = I128(den_) * o.den_;
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n, "add");
  r.den_ = checked_narrow(d, "add");
  return r;
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  I128 n = I128(num_) * o.num_;
  I128 d = I128(den_) * o.den_;
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n, "mul");
  r.den_ = checked_narrow(d, "mul");
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw DomainError("rational division by zero");
  I128 n = I128(num_) * o.den_;
  I128 d = I128(den_) * o.num_;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_narrow(n, "div");
  r.den_ = checked_narrow(d, "div");
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return I128(num_) * o.den_ < I128(o.num_) * den_;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw DomainError("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(std::stoll(text));
    }
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = std::stoll(text.substr(slash + 1));
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw DomainError("bad rational literal: " + text);
  } catch (const std::out_of_range&) {
    throw DomainError("rational literal out of range: " + text);
  }
}

}  // namespace lct
