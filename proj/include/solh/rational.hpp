#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace solh {

using BigInt = boost::multiprecision::cpp_int;

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

/// Floor division and the matching non-negative remainder (den > 0).
BigInt floor_div(const BigInt& num, const BigInt& den);
BigInt floor_mod(const BigInt& num, const BigInt& den);

/// Exact element of Q, always held in lowest terms with a positive
/// denominator. Zero is 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(BigInt n) : num_(std::move(n)), den_(1) {}

  /// Throws DomainError on a zero denominator.
  Rational(BigInt num, BigInt den);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return num_.sign(); }

  BigInt floor() const { return floor_div(num_, den_); }
  Rational abs() const { return num_.sign() < 0 ? -*this : *this; }
  double to_double() const;
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  struct Canonical {};
  Rational(BigInt num, BigInt den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  BigInt num_;
  BigInt den_;
};

/// Canonical reduced form of num/den.
Rational reduce(const BigInt& num, const BigInt& den);

/// Element a/b of Q/Z with 0 <= a < b, gcd(a, b) = 1 for a > 0; identity 0/1.
class RationalAngle {
 public:
  RationalAngle() : a_(0), b_(1) {}

  /// Any representative num/den (den != 0) is reduced modulo 1.
  RationalAngle(const BigInt& num, const BigInt& den);
  static RationalAngle of(const Rational& q);
  /// Fast path for machine-size representatives; den > 0.
  static RationalAngle of_int64(std::int64_t num, std::int64_t den);

  const BigInt& a() const noexcept { return a_; }
  const BigInt& b() const noexcept { return b_; }
  bool is_identity() const noexcept { return a_.is_zero(); }

  Rational as_rational() const { return Rational(a_, b_); }
  /// a/b as a fraction of a full turn.
  double turns() const;
  std::string str() const;

  friend bool operator==(const RationalAngle& x, const RationalAngle& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const RationalAngle& x, const RationalAngle& y);

 private:
  BigInt a_;
  BigInt b_;
};

/// q = n + rho with n = floor(q) and 0 <= rho < 1.
std::pair<BigInt, RationalAngle> frac_decompose(const Rational& q);

RationalAngle angle_add(const RationalAngle& p, const RationalAngle& r);
RationalAngle angle_neg(const RationalAngle& p);
RationalAngle angle_sub(const RationalAngle& p, const RationalAngle& r);

/// Fits in a signed 64-bit integer.
bool fits_int64(const BigInt& v);

}  // namespace solh
