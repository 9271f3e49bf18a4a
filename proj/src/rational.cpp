#include "solh/rational.hpp"

#include <limits>
#include <numeric>

#include "solh/errors.hpp"

namespace solh {

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a.is_zero() || b.is_zero()) return BigInt(0);
  BigInt g = gcd(a, b);
  BigInt r = (a / g) * b;
  return r.sign() < 0 ? BigInt(-r) : r;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;  // truncates toward zero
  BigInt r = num - q * den;
  if (!r.is_zero() && ((r.sign() < 0) != (den.sign() < 0))) q -= 1;
  return q;
}

BigInt floor_mod(const BigInt& num, const BigInt& den) {
  BigInt r = num % den;
  if (!r.is_zero() && ((r.sign() < 0) != (den.sign() < 0))) r += den;
  return r;
}

Rational::Rational(BigInt num, BigInt den) {
  if (den.is_zero()) throw DomainError("rational with zero denominator");
  if (den.sign() < 0) {
    num = -num;
    den = -den;
  }
  if (num.is_zero()) {
    num_ = 0;
    den_ = 1;
    return;
  }
  if (fits_int64(num) && den <= std::numeric_limits<std::int64_t>::max()) {
    const auto n = num.convert_to<std::int64_t>();
    const auto d = den.convert_to<std::int64_t>();
    if (n != std::numeric_limits<std::int64_t>::min()) {
      const std::int64_t g = std::gcd(n, d);
      num_ = n / g;
      den_ = d / g;
      return;
    }
  }
  BigInt g = gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational reduce(const BigInt& num, const BigInt& den) { return Rational(num, den); }

double Rational::to_double() const {
  // Split off the integer part so small fractions keep full precision.
  BigInt whole = floor();
  BigInt rem = num_ - whole * den_;
  return whole.convert_to<double>() + rem.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational Rational::operator-() const { return Rational(BigInt(-num_), den_, Canonical{}); }

Rational& Rational::operator+=(const Rational& o) {
  *this = Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = Rational(num_ * o.num_, den_ * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero rational");
  *this = Rational(num_ * o.den_, den_ * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  BigInt lhs = a.num_ * b.den_;
  BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

RationalAngle::RationalAngle(const BigInt& num, const BigInt& den) {
  if (den.is_zero()) throw DomainError("angle with zero denominator");
  Rational q(num, den);
  if (q.den() <= std::numeric_limits<std::int64_t>::max()) {
    const BigInt n = q.num() % q.den();  // |n| < den, so it fits
    const auto d = q.den().convert_to<std::int64_t>();
    std::int64_t r = n.convert_to<std::int64_t>();
    if (r < 0) r += d;
    a_ = r == 0 ? 0 : r;
    b_ = r == 0 ? 1 : d;
    return;
  }
  BigInt a = floor_mod(q.num(), q.den());
  if (a.is_zero()) {
    a_ = 0;
    b_ = 1;
  } else {
    a_ = a;
    b_ = q.den();
  }
}

RationalAngle RationalAngle::of(const Rational& q) { return RationalAngle(q.num(), q.den()); }

RationalAngle RationalAngle::of_int64(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("angle denominator must be positive");
  std::int64_t a = num % den;
  if (a < 0) a += den;
  RationalAngle out;
  if (a == 0) return out;
  const std::int64_t g = std::gcd(a, den);
  out.a_ = a / g;
  out.b_ = den / g;
  return out;
}

double RationalAngle::turns() const { return a_.convert_to<double>() / b_.convert_to<double>(); }

std::string RationalAngle::str() const { return a_.str() + "/" + b_.str(); }

std::strong_ordering operator<=>(const RationalAngle& x, const RationalAngle& y) {
  return x.as_rational() <=> y.as_rational();
}

std::pair<BigInt, RationalAngle> frac_decompose(const Rational& q) {
  return {q.floor(), RationalAngle::of(q)};
}

namespace {

constexpr std::int64_t kSmallModulus = std::int64_t{1} << 31;

bool small(const RationalAngle& p) { return p.b() < kSmallModulus; }

}  // namespace

RationalAngle angle_add(const RationalAngle& p, const RationalAngle& r) {
  if (small(p) && small(r)) {
    const auto pa = p.a().convert_to<std::int64_t>(), pb = p.b().convert_to<std::int64_t>();
    const auto ra = r.a().convert_to<std::int64_t>(), rb = r.b().convert_to<std::int64_t>();
    return RationalAngle::of_int64(pa * rb + ra * pb, pb * rb);
  }
  return RationalAngle(p.a() * r.b() + r.a() * p.b(), p.b() * r.b());
}

RationalAngle angle_neg(const RationalAngle& p) { return RationalAngle(BigInt(-p.a()), p.b()); }

RationalAngle angle_sub(const RationalAngle& p, const RationalAngle& r) {
  if (small(p) && small(r)) {
    const auto pa = p.a().convert_to<std::int64_t>(), pb = p.b().convert_to<std::int64_t>();
    const auto ra = r.a().convert_to<std::int64_t>(), rb = r.b().convert_to<std::int64_t>();
    return RationalAngle::of_int64(pa * rb - ra * pb, pb * rb);
  }
  return RationalAngle(p.a() * r.b() - r.a() * p.b(), p.b() * r.b());
}

bool fits_int64(const BigInt& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace solh
