#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "solh/characters.hpp"
#include "solh/profinite.hpp"
#include "solh/rational.hpp"

namespace solh {

using Complex = std::complex<double>;

/// Sup norms are estimated on uniform grids: `points_per_period` samples per
/// smallest period 1/max|lambda|, over one common period when it fits in
/// `max_points`, otherwise over the prefix [0, max_points * spacing).
struct GridPolicy {
  double points_per_period = 64.0;
  std::size_t max_points = std::size_t{1} << 16;
};

// ---------------------------------------------------------------------------
// Trigonometric polynomials on the real line (leaf functions).

struct TrigTerm {
  Rational freq;
  Complex coeff;
};

/// Finite sum of c * exp(2 pi i lambda x); canonical: sorted by frequency,
/// equal frequencies merged, exact zeros dropped.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(std::vector<TrigTerm> terms);

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  Complex operator()(double x) const;
  Complex coefficient(const Rational& freq) const;

  /// Largest |lambda| (0 for constants).
  Rational max_abs_frequency() const;
  /// Smallest nonzero |lambda|, if any term oscillates.
  std::optional<Rational> min_nonzero_frequency() const;
  /// Least common period 1 / gcd(lambda_j); empty for constants.
  std::optional<Rational> common_period() const;

 private:
  std::vector<TrigTerm> terms_;
};

/// Phi_t restricted to one leaf. `tail_bound` is the sup-norm distance to the
/// true leaf function when `poly` comes from a truncated series.
struct LeafFunction {
  TrigPoly poly;
  double tail_bound = 0.0;

  Complex operator()(double x) const { return poly(x); }
};

/// Uniform x-grid for `poly` under `policy`.
std::vector<double> sample_grid(const TrigPoly& poly, const GridPolicy& policy);
double sup_norm_on_grid(const TrigPoly& poly, const GridPolicy& policy);

// ---------------------------------------------------------------------------
// Z-invariant functions on R x Zhat.

struct SolenoidTerm {
  Complex coeff;
  SolenoidCharacter chr;
};

/// Finite solenoidal trigonometric polynomial sum c_q chi_q. Every term uses
/// a descending character, so Z-invariance holds by construction.
/// Canonical: sorted by q, duplicates merged, exact zeros dropped.
class SolenoidPoly {
 public:
  SolenoidPoly() = default;
  explicit SolenoidPoly(std::vector<SolenoidTerm> terms);

  const std::vector<SolenoidTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Complex coefficient(const Rational& q) const;
  /// lcm of the denominators of all q (1 for the empty poly).
  BigInt denominator_lcm() const;
  Rational max_abs_frequency() const;

  /// Phi o R_s: (x, t) -> Phi(x + s, t).
  SolenoidPoly translated(double s) const;

  friend SolenoidPoly operator+(const SolenoidPoly& a, const SolenoidPoly& b);
  friend SolenoidPoly operator-(const SolenoidPoly& a, const SolenoidPoly& b);

 private:
  std::vector<SolenoidTerm> terms_;
};

struct ProductTerm {
  Complex coeff;
  ProductCharacter chr;
};

/// Finite sum over arbitrary characters of R x Zhat, with no invariance
/// guarantee. Used to ingest hand-written terms and to exhibit functions
/// that fail to descend.
class ProductPoly {
 public:
  ProductPoly() = default;
  explicit ProductPoly(std::vector<ProductTerm> terms);
  explicit ProductPoly(const SolenoidPoly& phi);

  const std::vector<ProductTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  bool all_descend() const;
  /// Throws DomainError naming the first non-descending character.
  SolenoidPoly to_solenoid() const;
  BigInt denominator_lcm() const;
  Rational max_abs_frequency() const;

 private:
  std::vector<ProductTerm> terms_;
};

/// sum_k c_k chi_{q_k} given by a term generator (k >= 1) and a summable
/// majorant |c_k| <= B_k. `tail(N)` must bound sum_{k>N} B_k.
class LimitPeriodicSeries {
 public:
  using Generator = std::function<SolenoidTerm(std::size_t)>;
  using Majorant = std::function<double(std::size_t)>;
  using Tail = std::function<double(std::size_t)>;

  LimitPeriodicSeries(Generator generator, Majorant majorant, Tail tail,
                      std::optional<std::size_t> length = std::nullopt);

  /// Finitely many listed terms; `tail_beyond` bounds whatever follows them.
  static LimitPeriodicSeries from_terms(std::vector<SolenoidTerm> terms, std::vector<double> majorant,
                                        double tail_beyond = 0.0);
  /// sum_{k>=1} 2^-k chi_{1/2^k}.
  static LimitPeriodicSeries dyadic();

  /// Throws DomainError if |c_k| exceeds B_k.
  SolenoidTerm term(std::size_t k) const;
  double majorant(std::size_t k) const { return majorant_(k); }
  double tail_bound(std::size_t n) const { return tail_(n); }
  std::optional<std::size_t> length() const noexcept { return length_; }

  /// First n terms (fewer if the listing is shorter).
  SolenoidPoly truncate(std::size_t n) const;
  /// Smallest N whose tail bound is <= tol, capped at `cap` (and the length).
  std::size_t order_for_tail(double tol, std::size_t cap = 62) const;

 private:
  Generator generator_;
  Majorant majorant_;
  Tail tail_;
  std::optional<std::size_t> length_;
};

// ---------------------------------------------------------------------------
// Operations.

Complex eval(const SolenoidPoly& phi, double x, const ProfiniteInt& t);
Complex eval(const ProductPoly& phi, double x, const ProfiniteInt& t);

struct SamplePoint {
  double x;
  ProfiniteInt t;
};

/// `count` points with x uniform in [x_lo, x_hi) and t Haar-uniform on the tower.
std::vector<SamplePoint> random_samples(std::size_t count, double x_lo, double x_hi,
                                        const ModulusTower& tower, std::mt19937_64& rng);

/// max over samples and gamma of |Phi(x + gamma, t - gamma) - Phi(x, t)|.
double check_invariance(const ProductPoly& phi, const std::vector<std::int64_t>& gammas,
                        const std::vector<SamplePoint>& samples);
double check_invariance(const SolenoidPoly& phi, const std::vector<std::int64_t>& gammas,
                        const std::vector<SamplePoint>& samples);

/// x -> Phi(x, t): frequencies lambda with constant phases chi_rho(t).
LeafFunction leaf_restrict(const SolenoidPoly& phi, const ProfiniteInt& t);
LeafFunction leaf_restrict(const ProductPoly& phi, const ProfiniteInt& t);
/// First n terms of the series on the leaf, carrying the tail bound.
LeafFunction leaf_restrict(const LimitPeriodicSeries& phi, const ProfiniteInt& t, std::size_t n);

struct TranslationNumbers {
  std::vector<double> taus;
  /// Largest gap between consecutive accepted tau; empty when fewer than two
  /// were found ("no tau found below W").
  std::optional<double> inclusion_length;
  /// Number of x-grid points the sup estimate used.
  std::size_t grid_points = 0;
};

/// Grid tau in [0, window] (spacing `step`) with sup_x |phi(x + tau) - phi(x)| <= eps.
TranslationNumbers translation_numbers(const LeafFunction& phi, double eps, double window, double step,
                                       const GridPolicy& policy = {});

/// sup_x |Phi_{t_k} - Phi_t| for t_k = approx_sequence(t, k), k in depths.
std::vector<double> transversal_continuity_probe(const SolenoidPoly& phi, const ProfiniteInt& t,
                                                 const std::vector<std::size_t>& depths,
                                                 const GridPolicy& policy = {});

}  // namespace solh
