#include "solh/meanval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "solh/errors.hpp"
#include "solh/summation.hpp"

namespace solh {

namespace {

// Terms of a ProductPoly grouped by transversal character rho, with the
// Haar data each group needs.
struct TransversalGroups {
  std::vector<RationalAngle> rhos;
  std::vector<std::size_t> group_of_term;
  std::vector<Rational> freqs;
  std::vector<Complex> coeffs;

  explicit TransversalGroups(const ProductPoly& phi) {
    std::map<RationalAngle, std::size_t> index;
    for (const auto& term : phi.terms()) {
      auto [it, inserted] = index.emplace(term.chr.rho, rhos.size());
      if (inserted) rhos.push_back(term.chr.rho);
      group_of_term.push_back(it->second);
      freqs.push_back(term.chr.lambda);
      coeffs.push_back(term.coeff);
    }
  }
};

// Haar integral of chi_rho over Zhat by enumeration of one period.
Complex haar_of_character(const RationalAngle& rho) {
  const auto table = character_table(rho);
  const ModulusTower tower(std::vector<BigInt>{rho.b()});
  return haar_average([&](std::uint64_t r) { return table[r]; }, table.size(), tower);
}

Complex haar_gram(const RationalAngle& a, const RationalAngle& b) {
  const auto ta = character_table(a);
  const auto tb = character_table(b);
  const ModulusTower tower(std::vector<BigInt>{lcm(a.b(), b.b())});
  return haar_inner_product([&](std::uint64_t r) { return ta[r]; }, ta.size(), [&](std::uint64_t r) { return tb[r]; },
                            tb.size(), tower);
}

double oscillating_mass(const TrigPoly& phi) {
  CompensatedSum acc;
  for (const auto& t : phi.terms()) {
    if (!t.freq.is_zero()) acc.add(std::abs(t.coeff));
  }
  return acc.value();
}

}  // namespace

double mean_error_bound(MeanScheme scheme, double amplitude, double min_freq, double horizon) {
  if (scheme == MeanScheme::exact) return 0.0;
  if (!(min_freq > 0.0) || !(horizon > 0.0)) throw DomainError("error bound needs positive frequency and horizon");
  const double x = std::numbers::pi * min_freq * horizon;
  return scheme == MeanScheme::window ? amplitude / x : 4.0 * amplitude / (x * x);
}

MeanEstimate mean_exact(const TrigPoly& phi) {
  return MeanEstimate{phi.coefficient(Rational(0)), MeanScheme::exact, std::nullopt, 0.0};
}

MeanEstimate mean_window(const RealFn& f, double horizon, const WindowOptions& options) {
  const WindowQuadrature quad(horizon, options.max_frequency, options.scheme, options.nodes_per_panel);
  MeanEstimate out;
  out.value = quad.mean(f);
  out.scheme = options.scheme;
  out.horizon = horizon;
  if (options.min_frequency) {
    out.error_bound = mean_error_bound(options.scheme, options.amplitude, *options.min_frequency, horizon);
  }
  return out;
}

MeanEstimate mean_window(const TrigPoly& phi, double horizon, MeanScheme scheme) {
  const WindowQuadrature quad(horizon, phi.max_abs_frequency().to_double(), scheme);
  std::vector<Rational> freqs;
  std::vector<Complex> coeffs;
  for (const auto& t : phi.terms()) {
    freqs.push_back(t.freq);
    coeffs.push_back(t.coeff);
  }
  const NodePhases phases(quad, freqs);
  ComplexCompensatedSum acc;
  phases.for_each_node([&](double, double w, std::span<const Complex> e) {
    Complex v{};
    for (std::size_t j = 0; j < e.size(); ++j) v += coeffs[j] * e[j];
    acc.add(v * w);
  });
  MeanEstimate out{acc.value(), scheme, horizon, std::nullopt};
  if (auto fmin = phi.min_nonzero_frequency()) {
    out.error_bound = mean_error_bound(scheme, oscillating_mass(phi), fmin->to_double(), horizon);
  } else {
    out.error_bound = 0.0;
  }
  return out;
}

MeanEstimate solenoid_mean(const SolenoidPoly& phi) {
  return MeanEstimate{phi.coefficient(Rational(0)), MeanScheme::exact, std::nullopt, 0.0};
}

MeanEstimate solenoid_mean(const ProductPoly& phi) {
  // Leaf mean keeps lambda = 0 terms with phase chi_rho(t); the Haar average
  // of chi_rho is 1 or 0.
  Complex v{};
  for (const auto& term : phi.terms()) {
    if (term.chr.lambda.is_zero()) v += term.coeff * static_cast<double>(haar_character_exact(term.chr.rho));
  }
  return MeanEstimate{v, MeanScheme::exact, std::nullopt, 0.0};
}

MeanEstimate solenoid_mean_window(const ProductPoly& phi, double horizon, MeanScheme scheme) {
  const TransversalGroups groups(phi);
  std::vector<Complex> haar(groups.rhos.size());
  for (std::size_t g = 0; g < haar.size(); ++g) haar[g] = haar_of_character(groups.rhos[g]);

  std::vector<Complex> weight(groups.coeffs.size());
  for (std::size_t j = 0; j < weight.size(); ++j) weight[j] = groups.coeffs[j] * haar[groups.group_of_term[j]];

  const WindowQuadrature quad(horizon, phi.max_abs_frequency().to_double(), scheme);
  const NodePhases phases(quad, groups.freqs);
  ComplexCompensatedSum acc;
  phases.for_each_node([&](double, double w, std::span<const Complex> e) {
    Complex v{};
    for (std::size_t j = 0; j < e.size(); ++j) v += weight[j] * e[j];
    acc.add(v * w);
  });

  // Only lambda != 0 terms leak; their total mass bounds the error.
  CompensatedSum mass;
  std::optional<double> fmin;
  for (std::size_t j = 0; j < groups.freqs.size(); ++j) {
    if (groups.freqs[j].is_zero()) continue;
    mass.add(std::abs(groups.coeffs[j]));
    const double f = groups.freqs[j].abs().to_double();
    fmin = fmin ? std::min(*fmin, f) : f;
  }
  MeanEstimate out{acc.value(), scheme, horizon, 0.0};
  if (fmin) out.error_bound = mean_error_bound(scheme, mass.value(), *fmin, horizon);
  return out;
}

MeanEstimate solenoid_mean_sq_window(const ProductPoly& phi, double horizon, MeanScheme scheme) {
  const TransversalGroups groups(phi);
  const std::size_t ng = groups.rhos.size();
  std::vector<Complex> gram(ng * ng);
  for (std::size_t a = 0; a < ng; ++a) {
    for (std::size_t b = a; b < ng; ++b) {
      gram[a * ng + b] = haar_gram(groups.rhos[a], groups.rhos[b]);
      gram[b * ng + a] = std::conj(gram[a * ng + b]);
    }
  }

  const WindowQuadrature quad(horizon, 2.0 * phi.max_abs_frequency().to_double(), scheme);
  const NodePhases phases(quad, groups.freqs);
  std::vector<Complex> leaf(ng);
  ComplexCompensatedSum acc;
  phases.for_each_node([&](double, double w, std::span<const Complex> e) {
    std::fill(leaf.begin(), leaf.end(), Complex{});
    for (std::size_t j = 0; j < e.size(); ++j) leaf[groups.group_of_term[j]] += groups.coeffs[j] * e[j];
    Complex v{};
    for (std::size_t a = 0; a < ng; ++a) {
      for (std::size_t b = 0; b < ng; ++b) v += gram[a * ng + b] * leaf[a] * std::conj(leaf[b]);
    }
    acc.add(v * w);
  });

  // Cross terms c_j conj(c_k) chi_{lambda_j - lambda_k} with lambda_j != lambda_k leak.
  CompensatedSum mass;
  std::optional<double> fmin;
  for (std::size_t j = 0; j < groups.freqs.size(); ++j) {
    for (std::size_t k = 0; k < groups.freqs.size(); ++k) {
      if (groups.freqs[j] == groups.freqs[k]) continue;
      mass.add(std::abs(groups.coeffs[j]) * std::abs(groups.coeffs[k]));
      const double f = (groups.freqs[j] - groups.freqs[k]).abs().to_double();
      fmin = fmin ? std::min(*fmin, f) : f;
    }
  }
  MeanEstimate out{acc.value(), scheme, horizon, 0.0};
  if (fmin) out.error_bound = mean_error_bound(scheme, mass.value(), *fmin, horizon);
  return out;
}

double mean_comparison_check(const SolenoidPoly& phi, const std::vector<ProfiniteInt>& t_samples) {
  const Complex global = solenoid_mean(phi).value;
  double worst = 0.0;
  for (const auto& t : t_samples) {
    const Complex leaf = mean_exact(leaf_restrict(phi, t).poly).value;
    worst = std::max(worst, std::abs(leaf - global));
  }
  return worst;
}

MeanResiduals mean_linearity_translation_check(const SolenoidPoly& phi, const SolenoidPoly& psi, double s) {
  const Complex m_phi = solenoid_mean(phi).value;
  const Complex m_psi = solenoid_mean(psi).value;
  return MeanResiduals{std::abs(solenoid_mean(phi + psi).value - m_phi - m_psi),
                       std::abs(solenoid_mean(phi.translated(s)).value - m_phi)};
}

MeanResiduals mean_linearity_translation_check_window(const SolenoidPoly& phi, const SolenoidPoly& psi, double s,
                                                      double horizon) {
  auto mean = [horizon](const SolenoidPoly& f) { return solenoid_mean_window(ProductPoly(f), horizon).value; };
  const Complex m_phi = mean(phi);
  const Complex m_psi = mean(psi);
  return MeanResiduals{std::abs(mean(phi + psi) - m_phi - m_psi), std::abs(mean(phi.translated(s)) - m_phi)};
}

UniformLimitCheck mean_uniform_limit_check(const LimitPeriodicSeries& phi, std::size_t n, std::size_t m) {
  const Complex a = solenoid_mean(phi.truncate(n)).value;
  const Complex b = solenoid_mean(phi.truncate(m)).value;
  return UniformLimitCheck{std::abs(a - b), phi.tail_bound(std::min(n, m))};
}

std::string mean_csv_header() { return "scheme,T,value_re,value_im,error_bound"; }

std::string mean_csv_row(const MeanEstimate& m) {
  std::ostringstream os;
  os.precision(17);
  os << scheme_name(m.scheme) << ',';
  if (m.horizon) os << *m.horizon;
  os << ',' << m.value.real() << ',' << m.value.imag() << ',';
  if (m.error_bound) os << *m.error_bound;
  return os.str();
}

}  // namespace solh
