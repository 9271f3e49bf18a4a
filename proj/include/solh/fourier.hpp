#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "solh/funcspace.hpp"
#include "solh/meanval.hpp"

namespace solh {

struct SpectrumEntry {
  SolenoidCharacter chr;
  Complex coeff;
};

/// Finite spectrum over characters of the solenoid, sorted by q, no
/// duplicates. residual_power = M(|Phi|^2) - sum |coeff|^2.
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  double residual_power = 0.0;

  /// Sorts and merges; throws DomainError on duplicate q.
  static Spectrum make(std::vector<SpectrumEntry> entries, double residual_power = 0.0);

  Complex coefficient(const Rational& q) const;
  double sum_sq() const;
  SolenoidPoly to_poly() const;
};

struct ProductSpectrumEntry {
  ProductCharacter chr;
  Complex coeff;
};

/// Spectrum indexed by characters of R x Zhat, before descent.
struct ProductSpectrum {
  std::vector<ProductSpectrumEntry> entries;
};

/// A_lambda as a character of Zhat. Under chi_rho(t) = exp(2 pi i a t / b)
/// it is chi_{frac(lambda)}.
struct TransversalFactor {
  Rational lambda;
  RationalAngle character;

  explicit TransversalFactor(const Rational& lam);
  Complex operator()(const ProfiniteInt& t) const;
};

// ---------------------------------------------------------------------------
// Coefficients.

/// Coefficient of frequency lambda in the leaf function Phi_t.
Complex leaf_coefficient(const SolenoidPoly& phi, const ProfiniteInt& t, const Rational& lambda);
Complex leaf_coefficient(const ProductPoly& phi, const ProfiniteInt& t, const Rational& lambda);

/// Window mean of f(x) exp(-2 pi i lambda x) for a sampled leaf.
MeanEstimate leaf_coefficient_window(const RealFn& leaf, const Rational& lambda, double horizon,
                                     const WindowOptions& options = {});

/// exp(2 pi i lambda t_k) with t_k = approx_sequence(t, depth); exact once
/// den(lambda) divides M_depth. `depth` defaults to the tower depth.
/// Throws PrecisionError when the depth does not resolve den(lambda).
Complex transversal_factor(const Rational& lambda, const ProfiniteInt& t, std::optional<std::size_t> depth = {});

/// frac(lambda t_k) for k = 1..depth as exact angles. Entries at depths that
/// do not resolve den(lambda) still appear; they just need not agree with
/// the limit.
std::vector<RationalAngle> transversal_factor_approximants(const Rational& lambda, const ProfiniteInt& t);

/// Fourier coefficient against chi_{lambda,rho}, computed symbolically.
Complex transform(const SolenoidPoly& phi, const ProductCharacter& c);
Complex transform(const ProductPoly& phi, const ProductCharacter& c);

/// The same integral by brute force: exact leaf coefficients at every residue
/// r modulo lcm(den frac(lambda), den rho), times conj chi_rho(r), averaged.
Complex transform_by_enumeration(const SolenoidPoly& phi, const ProductCharacter& c);

/// Numeric coefficients of Phi against each character in `targets`, plus the
/// numeric double mean of |Phi|^2, from one quadrature pass. The Haar
/// integral over Zhat is taken first, then the window mean in x.
struct NumericTransform {
  std::vector<Complex> coeffs;
  double mean_sq = 0.0;
  double coeff_error_bound = 0.0;
  double mean_sq_error_bound = 0.0;
};
NumericTransform transform_window(const ProductPoly& phi, const std::vector<ProductCharacter>& targets,
                                  double horizon, MeanScheme scheme = MeanScheme::window);

// ---------------------------------------------------------------------------
// Spectra.

/// |Phi|^2 expanded symbolically.
SolenoidPoly abs_squared(const SolenoidPoly& phi);

/// Symbolic spectrum: equals the term map, residual from the |Phi|^2 expansion.
Spectrum spectrum(const SolenoidPoly& phi);
/// Restriction to the given candidates (coefficients with |c| > threshold).
Spectrum spectrum(const SolenoidPoly& phi, const std::vector<Rational>& candidates, double threshold = 0.0);

/// Spectrum over R x Zhat of an arbitrary product polynomial.
ProductSpectrum product_spectrum(const ProductPoly& phi);

/// Farey candidates a/b with b <= max_den and |a/b| <= max_abs, ascending.
std::vector<Rational> farey_grid(std::uint64_t max_den, std::uint64_t max_abs);

struct BlackBoxOptions {
  std::uint64_t max_den = 12;
  std::uint64_t max_abs = 6;
  double horizon = 1e4;
  double threshold_factor = 5.0;
  MeanScheme scheme = MeanScheme::cesaro;
  std::size_t nodes_per_panel = 32;
};

struct BlackBoxSpectrum {
  Spectrum spectrum;
  double threshold = 0.0;
  /// A-priori coefficient error bound the threshold is derived from.
  double error_bound = 0.0;
  /// Largest |coefficient| among rejected candidates (0 if none).
  double max_rejected = 0.0;
  std::size_t candidates = 0;
};

/// Recovers the spectrum of a sampled leaf function over the Farey grid.
/// All candidate coefficients share the same samples: for denominator b the
/// samples are folded by unit-block index modulo b, so each candidate costs
/// O(b * nodes per unit) instead of O(nodes).
BlackBoxSpectrum spectrum_blackbox(const RealFn& leaf, const BlackBoxOptions& options = {});

/// Re-indexes descending characters (lambda, frac lambda) to q = lambda.
/// Throws DomainError on a non-descending support character.
Spectrum descend_spectrum(const ProductSpectrum& spec);

// ---------------------------------------------------------------------------
// Parseval and uniqueness.

struct ParsevalReport {
  double sum_sq = 0.0;
  double mean_sq = 0.0;
  double gap = 0.0;
};

ParsevalReport parseval_check(const SolenoidPoly& phi);
/// Numeric coefficients and numeric M(|Phi|^2) at horizon T.
ParsevalReport parseval_check_window(const SolenoidPoly& phi, double horizon, MeanScheme scheme = MeanScheme::window);

struct UniquenessReport {
  bool spectra_equal = false;
  bool samples_equal = false;
  double coeff_gap = 0.0;
  double sample_gap = 0.0;
  /// Both directions of the equivalence held on this pair.
  bool consistent() const noexcept { return spectra_equal == samples_equal; }
};

inline constexpr double kUniquenessCoeffTol = 1e-12;
inline constexpr double kUniquenessSampleTol = 1e-10;

/// Compares spectra and values on a fixed 10^3-point sample of R x Zhat.
UniquenessReport uniqueness_report(const SolenoidPoly& phi, const SolenoidPoly& psi, std::size_t samples = 1000);
/// spectra_equal; throws std::logic_error if the two directions disagree.
bool uniqueness_check(const SolenoidPoly& phi, const SolenoidPoly& psi);

// ---------------------------------------------------------------------------
// Partial sums.

/// |coeff| descending, then denominator ascending, |q| ascending, q ascending.
bool partial_sum_before(const SpectrumEntry& a, const SpectrumEntry& b);
std::vector<SpectrumEntry> ordered_entries(const Spectrum& spec);

/// First N terms in the fixed order.
SolenoidPoly partial_sum(const Spectrum& spec, std::size_t n);

struct ApproxRow {
  std::size_t n = 0;
  double sup_error = 0.0;
  std::optional<double> majorant_bound;
};

struct ApproxReport {
  std::vector<ApproxRow> rows;
  /// Errors non-increasing in the order N was listed (sorted ascending).
  bool monotone = true;
  std::size_t grid_points = 0;
};

/// sup over a base-leaf grid of |Phi - s_N|.
ApproxReport approx_report(const SolenoidPoly& phi, const std::vector<std::size_t>& n_list,
                           const GridPolicy& policy = {});
/// For series s_N is the first N terms; the reference is the truncation whose
/// majorant tail is below `reference_tail` (or the whole listing).
ApproxReport approx_report(const LimitPeriodicSeries& phi, const std::vector<std::size_t>& n_list,
                           const GridPolicy& policy = {}, double reference_tail = 1e-15);

// ---------------------------------------------------------------------------
// Export.

std::string spectrum_csv(const Spectrum& spec);

}  // namespace solh
