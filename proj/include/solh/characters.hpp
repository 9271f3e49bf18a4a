#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <vector>

#include "solh/profinite.hpp"
#include "solh/rational.hpp"

namespace solh {

// Normalization throughout: chi_lambda(x) = exp(2 pi i lambda x) on R and
// chi_rho(t) = exp(2 pi i a (t mod b) / b) on Zhat for rho = a/b in Q/Z.

/// exp(2 pi i * turns) with turns reduced to [0, 1) first.
std::complex<double> unit_phase(double turns);

/// exp(2 pi i q x), with the integer part of x handled exactly so that large
/// |x| does not lose phase accuracy.
std::complex<double> exp_2pi_i(const Rational& q, double x);

/// Character of Zhat indexed by Q/Z.
struct ZhatCharacter {
  RationalAngle rho;

  friend bool operator==(const ZhatCharacter&, const ZhatCharacter&) = default;
};

/// chi_{lambda,rho}(x, t) = chi_lambda(x) chi_rho(t) on R x Zhat.
struct ProductCharacter {
  Rational lambda;
  RationalAngle rho;

  friend bool operator==(const ProductCharacter&, const ProductCharacter&) = default;
  friend std::strong_ordering operator<=>(const ProductCharacter& a, const ProductCharacter& b) {
    if (auto c = a.lambda <=> b.lambda; c != 0) return c;
    return a.rho <=> b.rho;
  }
};

/// Character chi_q of the solenoid, q in Q.
struct SolenoidCharacter {
  Rational q;

  friend bool operator==(const SolenoidCharacter&, const SolenoidCharacter&) = default;
  friend std::strong_ordering operator<=>(const SolenoidCharacter& a, const SolenoidCharacter& b) {
    return a.q <=> b.q;
  }
};

/// Throws PrecisionError when the denominator of rho is not resolvable for t.
std::complex<double> eval_zhat(const RationalAngle& rho, const ProfiniteInt& t);
std::complex<double> eval_product(const ProductCharacter& c, double x, const ProfiniteInt& t);

/// True iff rho = frac(lambda), i.e. the character kills the diagonal
/// generator (-1, 1) and factors through the solenoid.
bool descends(const ProductCharacter& c);

SolenoidCharacter solenoid_character(const Rational& q);
/// (q, frac q); always descends.
ProductCharacter as_product(const SolenoidCharacter& s);
/// Inverse of as_product; throws DomainError for a non-descending character.
SolenoidCharacter as_solenoid(const ProductCharacter& c);

/// chi_rho(r) for r = 0..b-1 (one period of the cylinder function).
/// Throws PrecisionError when b exceeds `max_modulus`.
std::vector<std::complex<double>> character_table(const RationalAngle& rho, std::uint64_t max_modulus = 1u << 24);

/// Exact Haar integral of chi_rho over Zhat: 1 for the trivial character and
/// 0 otherwise.
int haar_character_exact(const RationalAngle& rho);

}  // namespace solh
