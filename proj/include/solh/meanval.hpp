#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "solh/funcspace.hpp"
#include "solh/quadrature.hpp"

namespace solh {

/// A mean value together with how it was obtained. Exact estimates carry
/// error_bound = 0; numeric ones carry the a-priori bound when the smallest
/// nonzero frequency of the input is known.
struct MeanEstimate {
  Complex value;
  MeanScheme scheme = MeanScheme::exact;
  std::optional<double> horizon;
  std::optional<double> error_bound;
};

/// Black-box window-mean configuration. `amplitude` bounds the total
/// coefficient mass of the oscillating part (1 for a pure exponential).
struct WindowOptions {
  double max_frequency = 1.0;
  std::optional<double> min_frequency;
  double amplitude = 1.0;
  MeanScheme scheme = MeanScheme::window;
  std::size_t nodes_per_panel = 32;
};

using RealFn = std::function<Complex(double)>;

/// A-priori bound on |mean over [0, T]| of a*exp(2 pi i nu x) for |nu| >= min_freq:
/// a/(pi nu T) for window means, 4a/(pi nu T)^2 for Cesaro double averages.
double mean_error_bound(MeanScheme scheme, double amplitude, double min_freq, double horizon);

/// Constant term of a trigonometric polynomial.
MeanEstimate mean_exact(const TrigPoly& phi);

/// Composite Gauss-Legendre approximation of (1/T) int_0^T f (or its Cesaro
/// variant). Throws NumericError on non-finite samples.
MeanEstimate mean_window(const RealFn& f, double horizon, const WindowOptions& options = {});

/// Same quadrature applied to a symbolic polynomial, with its bound derived
/// from the coefficients.
MeanEstimate mean_window(const TrigPoly& phi, double horizon, MeanScheme scheme = MeanScheme::window);

/// Solenoidal mean: Haar average over t of the leaf means M(Phi_t), computed
/// symbolically (coefficient of the trivial character).
MeanEstimate solenoid_mean(const SolenoidPoly& phi);
MeanEstimate solenoid_mean(const ProductPoly& phi);

/// Numeric double mean of Phi over [0, T] x Zhat. The Haar integral over the
/// transversal is taken first, by enumerating each transversal character over
/// its cylinder modulus; the remaining function of x is window-averaged.
MeanEstimate solenoid_mean_window(const ProductPoly& phi, double horizon, MeanScheme scheme = MeanScheme::window);

/// Numeric double mean of |Phi|^2, via the Haar Gram matrix of the
/// transversal characters and a window mean in x.
MeanEstimate solenoid_mean_sq_window(const ProductPoly& phi, double horizon, MeanScheme scheme = MeanScheme::window);

/// max over t of |M(Phi_t) - M_solenoid(Phi)| with exact leaf means.
double mean_comparison_check(const SolenoidPoly& phi, const std::vector<ProfiniteInt>& t_samples);

struct MeanResiduals {
  double linearity = 0.0;    // |M(Phi + Psi) - M(Phi) - M(Psi)|
  double translation = 0.0;  // |M(Phi o R_s) - M(Phi)|
};

MeanResiduals mean_linearity_translation_check(const SolenoidPoly& phi, const SolenoidPoly& psi, double s);
MeanResiduals mean_linearity_translation_check_window(const SolenoidPoly& phi, const SolenoidPoly& psi, double s,
                                                      double horizon);

struct UniformLimitCheck {
  double deviation = 0.0;  // |M(s_n) - M(s_m)|
  double bound = 0.0;      // tail bound at min(n, m)
};

/// Mean of uniform limits: the means of two truncations differ by at most the
/// majorant tail.
UniformLimitCheck mean_uniform_limit_check(const LimitPeriodicSeries& phi, std::size_t n, std::size_t m);

/// CSV report row: scheme,T,value_re,value_im,error_bound.
std::string mean_csv_header();
std::string mean_csv_row(const MeanEstimate& m);

}  // namespace solh
