#pragma once

// Shared test fixtures: the random corpus and oracles that avoid the
// library's own arithmetic (plain int64 residues and std::polar).

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "solh/fourier.hpp"
#include "solh/funcspace.hpp"

namespace solh::testing {

inline constexpr std::uint64_t kCorpusSeed = 20240917;

struct CorpusOptions {
  std::size_t count = 50;
  std::int64_t max_den = 12;
  std::size_t max_terms = 8;
  std::int64_t max_abs = 3;  // |q| <= max_abs
};

inline Rational random_rational(std::mt19937_64& rng, std::int64_t max_den, std::int64_t max_abs) {
  std::uniform_int_distribution<std::int64_t> den(1, max_den);
  const std::int64_t b = den(rng);
  std::uniform_int_distribution<std::int64_t> num(-max_abs * b, max_abs * b);
  return Rational(BigInt(num(rng)), BigInt(b));
}

inline Complex random_coeff(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
  return std::polar(mag(rng), arg(rng));
}

inline SolenoidPoly random_poly(std::mt19937_64& rng, const CorpusOptions& o = {}) {
  std::uniform_int_distribution<std::size_t> nterms(1, o.max_terms);
  const std::size_t n = nterms(rng);
  std::map<Rational, Complex> terms;
  while (terms.size() < n) terms.emplace(random_rational(rng, o.max_den, o.max_abs), random_coeff(rng));
  std::vector<SolenoidTerm> out;
  for (const auto& [q, c] : terms) out.push_back({c, SolenoidCharacter{q}});
  return SolenoidPoly(std::move(out));
}

/// The 50-function corpus (denominators <= 12, <= 8 terms).
inline std::vector<SolenoidPoly> corpus(const CorpusOptions& o = {}) {
  std::mt19937_64 rng(kCorpusSeed);
  std::vector<SolenoidPoly> out;
  for (std::size_t i = 0; i < o.count; ++i) out.push_back(random_poly(rng, o));
  return out;
}

inline std::int64_t i64(const BigInt& v) { return v.convert_to<std::int64_t>(); }

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// exp(2 pi i a r / b) from int64 residues.
inline Complex oracle_char(std::int64_t a, std::int64_t b, std::int64_t r) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(a * r, b)) / static_cast<double>(b));
}

/// Phi(x, t) for integer t: sum c exp(2 pi i q x) exp(2 pi i frac(q) t).
inline Complex oracle_eval(const SolenoidPoly& phi, double x, std::int64_t t) {
  Complex v{};
  for (const auto& term : phi.terms()) {
    const std::int64_t a = i64(term.chr.q.num());
    const std::int64_t b = i64(term.chr.q.den());
    const double qx = static_cast<double>(a) / static_cast<double>(b) * x;
    v += term.coeff * std::polar(1.0, 2.0 * std::numbers::pi * (qx - std::floor(qx))) * oracle_char(mod(a, b), b, t);
  }
  return v;
}

/// Transform by direct enumeration of residues modulo lcm(den lambda, b):
/// (1/m) sum_r [sum over terms with q = lambda of c chi_{frac q}(r)] conj(chi_rho(r)).
inline Complex oracle_transform(const SolenoidPoly& phi, const Rational& lambda, std::int64_t rho_a, std::int64_t rho_b) {
  const std::int64_t ld = i64(lambda.den());
  const std::int64_t m = std::lcm(ld, rho_b);
  Complex total{};
  for (std::int64_t r = 0; r < m; ++r) {
    Complex leaf{};
    for (const auto& term : phi.terms()) {
      if (term.chr.q != lambda) continue;
      leaf += term.coeff * oracle_char(mod(i64(lambda.num()), ld), ld, r);
    }
    total += leaf * std::conj(oracle_char(rho_a, rho_b, r));
  }
  return total / static_cast<double>(m);
}

/// M(|Phi|^2) by pairing equal frequencies in the double sum.
inline double oracle_mean_sq(const SolenoidPoly& phi) {
  Complex v{};
  for (const auto& a : phi.terms()) {
    for (const auto& b : phi.terms()) {
      if (a.chr.q == b.chr.q) v += a.coeff * std::conj(b.coeff);
    }
  }
  return v.real();
}

/// (1/T) int_0^T exp(2 pi i nu x) dx.
inline Complex oracle_window_mean(double nu, double horizon) {
  const Complex z(0.0, 2.0 * std::numbers::pi * nu * horizon);
  return (std::exp(z) - 1.0) / z;
}

/// Cesaro double average: the kernel is the self-convolution of a box of
/// width T/2, so the mean is the square of the half-window mean.
inline Complex oracle_cesaro_mean(double nu, double horizon) {
  const Complex h = oracle_window_mean(nu, horizon / 2.0);
  return h * h;
}

}  // namespace solh::testing
