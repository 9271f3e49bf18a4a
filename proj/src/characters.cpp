#include "solh/characters.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "solh/errors.hpp"

namespace solh {

std::complex<double> unit_phase(double turns) {
  double f = turns - std::floor(turns);
  if (f == 0.0) return {1.0, 0.0};
  if (f == 0.5) return {-1.0, 0.0};
  if (f == 0.25) return {0.0, 1.0};
  if (f == 0.75) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * f;
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> exp_2pi_i(const Rational& q, double x) {
  if (!std::isfinite(x)) throw NumericError("non-finite evaluation point");
  if (q.is_zero()) return {1.0, 0.0};
  const double whole = std::floor(x);
  const double part = x - whole;  // exact in binary floating point
  double turns = q.to_double() * part;
  if (whole != 0.0 && !q.is_integer()) {
    // frac(q * whole) exactly; whole is an integer-valued double.
    if (std::abs(whole) < 9.0e15 && fits_int64(q.num()) && fits_int64(q.den())) {
      const auto num = q.num().convert_to<std::int64_t>();
      const auto den = q.den().convert_to<std::int64_t>();
      __int128 k = static_cast<__int128>(num) * static_cast<std::int64_t>(whole);
      k %= den;
      if (k < 0) k += den;
      turns += static_cast<double>(static_cast<std::int64_t>(k)) / static_cast<double>(den);
    } else {
      const BigInt k = floor_mod(q.num() * BigInt(whole), q.den());
      turns += k.convert_to<double>() / q.den().convert_to<double>();
    }
  }
  return unit_phase(turns);
}

std::complex<double> eval_zhat(const RationalAngle& rho, const ProfiniteInt& t) {
  if (rho.is_identity()) return {1.0, 0.0};
  const BigInt r = residue(t, rho.b());
  const BigInt k = (rho.a() * r) % rho.b();
  return unit_phase(k.convert_to<double>() / rho.b().convert_to<double>());
}

std::complex<double> eval_product(const ProductCharacter& c, double x, const ProfiniteInt& t) {
  return exp_2pi_i(c.lambda, x) * eval_zhat(c.rho, t);
}

bool descends(const ProductCharacter& c) { return RationalAngle::of(c.lambda) == c.rho; }

SolenoidCharacter solenoid_character(const Rational& q) { return SolenoidCharacter{q}; }

ProductCharacter as_product(const SolenoidCharacter& s) {
  return ProductCharacter{s.q, RationalAngle::of(s.q)};
}

SolenoidCharacter as_solenoid(const ProductCharacter& c) {
  if (!descends(c)) {
    throw DomainError("character (" + c.lambda.str() + ", " + c.rho.str() +
                      ") does not annihilate the diagonal copy of Z");
  }
  return SolenoidCharacter{c.lambda};
}

std::vector<std::complex<double>> character_table(const RationalAngle& rho, std::uint64_t max_modulus) {
  if (rho.b() > max_modulus) {
    throw PrecisionError("cylinder modulus " + rho.b().str() + " exceeds the enumeration limit " +
                             std::to_string(max_modulus),
                         0);
  }
  const auto b = rho.b().convert_to<std::uint64_t>();
  const auto a = rho.a().convert_to<std::uint64_t>();
  std::vector<std::complex<double>> table(b);
  for (std::uint64_t r = 0; r < b; ++r) {
    const auto k = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * r) % b);
    table[r] = unit_phase(static_cast<double>(k) / static_cast<double>(b));
  }
  return table;
}

int haar_character_exact(const RationalAngle& rho) { return rho.is_identity() ? 1 : 0; }

}  // namespace solh
