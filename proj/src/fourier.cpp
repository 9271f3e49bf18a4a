#include "solh/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "solh/errors.hpp"
#include "solh/summation.hpp"

namespace solh {

namespace {

Complex unit(const RationalAngle& a) { return unit_phase(a.turns()); }

// Haar inner product of two transversal characters, by enumeration.
Complex character_inner(const RationalAngle& a, const RationalAngle& b) {
  const auto ta = character_table(a);
  const auto tb = character_table(b);
  const ModulusTower tower(std::vector<BigInt>{lcm(a.b(), b.b())});
  return haar_inner_product([&](std::uint64_t r) { return ta[r]; }, ta.size(), [&](std::uint64_t r) { return tb[r]; },
                            tb.size(), tower);
}

const ProfiniteInt& base_point() {
  static const ProfiniteInt zero = embed_int(0, ModulusTower::lcm_tower(1));
  return zero;
}

// sup_x |sum_j w_j c_j e_j(x)| over a grid, given precomputed term values.
double sup_of(const std::vector<std::vector<Complex>>& values, const std::vector<bool>& keep, std::size_t npoints) {
  double sup = 0.0;
  for (std::size_t i = 0; i < npoints; ++i) {
    ComplexCompensatedSum acc;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (keep[j]) acc.add(values[j][i]);
    }
    sup = std::max(sup, std::abs(acc.value()));
  }
  return sup;
}

// Base-leaf grid shared by every partial sum of `terms`.
std::vector<double> shared_grid(const std::vector<SolenoidTerm>& terms, const GridPolicy& policy) {
  std::vector<TrigTerm> shape;
  shape.reserve(terms.size());
  for (const auto& t : terms) shape.push_back({t.chr.q, Complex(1.0, 0.0)});
  return sample_grid(TrigPoly(std::move(shape)), policy);
}

ApproxReport approx_over(const std::vector<SolenoidTerm>& order, std::vector<std::size_t> n_list,
                         const std::vector<double>& xs) {
  std::vector<std::vector<Complex>> values(order.size(), std::vector<Complex>(xs.size()));
  for (std::size_t j = 0; j < order.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) values[j][i] = order[j].coeff * exp_2pi_i(order[j].chr.q, xs[i]);
  }
  std::sort(n_list.begin(), n_list.end());
  ApproxReport report;
  report.grid_points = xs.size();
  std::vector<bool> keep(order.size());
  for (std::size_t n : n_list) {
    for (std::size_t j = 0; j < order.size(); ++j) keep[j] = j >= n;
    const double err = std::any_of(keep.begin(), keep.end(), [](bool k) { return k; }) ? sup_of(values, keep, xs.size())
                                                                                     : 0.0;
    if (!report.rows.empty() && err > report.rows.back().sup_error) report.monotone = false;
    report.rows.push_back({n, err, std::nullopt});
  }
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

Spectrum Spectrum::make(std::vector<SpectrumEntry> entries, double residual_power) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.chr.q < b.chr.q; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].chr.q == entries[i - 1].chr.q) throw DomainError("duplicate spectrum entry q = " + entries[i].chr.q.str());
  }
  return Spectrum{std::move(entries), residual_power};
}

Complex Spectrum::coefficient(const Rational& q) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), q,
                             [](const SpectrumEntry& e, const Rational& v) { return e.chr.q < v; });
  return it != entries.end() && it->chr.q == q ? it->coeff : Complex{};
}

double Spectrum::sum_sq() const {
  CompensatedSum acc;
  for (const auto& e : entries) acc.add(std::norm(e.coeff));
  return acc.value();
}

SolenoidPoly Spectrum::to_poly() const {
  std::vector<SolenoidTerm> terms;
  terms.reserve(entries.size());
  for (const auto& e : entries) terms.push_back({e.coeff, e.chr});
  return SolenoidPoly(std::move(terms));
}

TransversalFactor::TransversalFactor(const Rational& lam) : lambda(lam), character(RationalAngle::of(lam)) {}

Complex TransversalFactor::operator()(const ProfiniteInt& t) const { return eval_zhat(character, t); }

// ---------------------------------------------------------------------------

Complex leaf_coefficient(const SolenoidPoly& phi, const ProfiniteInt& t, const Rational& lambda) {
  return leaf_restrict(phi, t).poly.coefficient(lambda);
}

Complex leaf_coefficient(const ProductPoly& phi, const ProfiniteInt& t, const Rational& lambda) {
  ComplexCompensatedSum acc;
  for (const auto& term : phi.terms()) {
    if (term.chr.lambda == lambda) acc.add(term.coeff * eval_zhat(term.chr.rho, t));
  }
  return acc.value();
}

MeanEstimate leaf_coefficient_window(const RealFn& leaf, const Rational& lambda, double horizon,
                                     const WindowOptions& options) {
  WindowOptions shifted = options;
  shifted.max_frequency = options.max_frequency + lambda.abs().to_double();
  const Rational minus = -lambda;
  return mean_window([&](double x) { return leaf(x) * exp_2pi_i(minus, x); }, horizon, shifted);
}

Complex transversal_factor(const Rational& lambda, const ProfiniteInt& t, std::optional<std::size_t> depth) {
  if (lambda.is_integer()) return {1.0, 0.0};
  const BigInt& den = lambda.den();
  BigInt tk;
  if (t.embedded_value()) {
    tk = *t.embedded_value();
  } else {
    const std::size_t k = depth.value_or(t.tower().depth());
    const auto need = t.tower().resolving_depth(den);
    if (!need) require_resolvable(t.tower(), den);
    if (k < *need) {
      throw PrecisionError("modulus " + den.str() + " requires tower depth ≥ " + std::to_string(*need) +
                               " (requested depth " + std::to_string(k) + ")",
                           *need);
    }
    tk = approx_sequence(t, k);
  }
  return unit(RationalAngle(lambda.num() * tk, den));
}

std::vector<RationalAngle> transversal_factor_approximants(const Rational& lambda, const ProfiniteInt& t) {
  std::vector<RationalAngle> out;
  out.reserve(t.tower().depth());
  for (std::size_t k = 1; k <= t.tower().depth(); ++k) {
    out.emplace_back(lambda.num() * approx_sequence(t, k), lambda.den());
  }
  return out;
}

Complex transform(const SolenoidPoly& phi, const ProductCharacter& c) {
  // Leaf coefficient on the base leaf times the Haar integral of
  // A_lambda * conj(chi_rho), which is 1 exactly when rho = frac(lambda).
  const RationalAngle diff = angle_sub(RationalAngle::of(c.lambda), c.rho);
  if (haar_character_exact(diff) == 0) return {};
  return leaf_coefficient(phi, base_point(), c.lambda);
}

Complex transform(const ProductPoly& phi, const ProductCharacter& c) {
  Complex v{};
  for (const auto& term : phi.terms()) {
    if (term.chr.lambda == c.lambda) v += term.coeff * static_cast<double>(haar_character_exact(angle_sub(term.chr.rho, c.rho)));
  }
  return v;
}

Complex transform_by_enumeration(const SolenoidPoly& phi, const ProductCharacter& c) {
  const BigInt m = lcm(RationalAngle::of(c.lambda).b(), c.rho.b());
  if (m > (BigInt(1) << 24)) throw PrecisionError("cylinder modulus " + m.str() + " too large to enumerate", 0);
  const ModulusTower tower(std::vector<BigInt>{m});
  const auto mm = m.convert_to<std::uint64_t>();
  return haar_average(
      [&](std::uint64_t r) {
        const ProfiniteInt t = embed_int(BigInt(r), tower);
        return leaf_coefficient(phi, t, c.lambda) * std::conj(eval_zhat(c.rho, t));
      },
      mm, tower);
}

NumericTransform transform_window(const ProductPoly& phi, const std::vector<ProductCharacter>& targets,
                                  double horizon, MeanScheme scheme) {
  // Transversal characters of Phi's terms and of the targets, deduplicated.
  std::map<RationalAngle, std::size_t> index;
  std::vector<RationalAngle> rhos;
  auto group = [&](const RationalAngle& r) {
    auto [it, inserted] = index.emplace(r, rhos.size());
    if (inserted) rhos.push_back(r);
    return it->second;
  };
  std::vector<Rational> freqs;
  std::vector<std::size_t> term_group;
  std::vector<Complex> coeffs;
  for (const auto& term : phi.terms()) {
    freqs.push_back(term.chr.lambda);
    term_group.push_back(group(term.chr.rho));
    coeffs.push_back(term.coeff);
  }
  const std::size_t nterms = freqs.size();
  std::vector<std::size_t> target_group;
  for (const auto& c : targets) {
    freqs.push_back(c.lambda);
    target_group.push_back(group(c.rho));
  }

  const std::size_t ng = rhos.size();
  std::vector<Complex> gram(ng * ng);
  for (std::size_t a = 0; a < ng; ++a) {
    for (std::size_t b = a; b < ng; ++b) {
      gram[a * ng + b] = character_inner(rhos[a], rhos[b]);
      gram[b * ng + a] = std::conj(gram[a * ng + b]);
    }
  }

  double max_term = 0.0;
  double max_target = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    (j < nterms ? max_term : max_target) = std::max(j < nterms ? max_term : max_target, freqs[j].abs().to_double());
  }
  const WindowQuadrature quad(horizon, max_term + std::max(max_term, max_target), scheme);
  const NodePhases phases(quad, freqs);

  std::vector<ComplexCompensatedSum> coeff_acc(targets.size());
  ComplexCompensatedSum sq_acc;
  std::vector<Complex> leaf(ng);
  phases.for_each_node([&](double, double w, std::span<const Complex> e) {
    std::fill(leaf.begin(), leaf.end(), Complex{});
    for (std::size_t j = 0; j < nterms; ++j) leaf[term_group[j]] += coeffs[j] * e[j];
    for (std::size_t i = 0; i < targets.size(); ++i) {
      Complex v{};
      const std::size_t ti = target_group[i];
      for (std::size_t g = 0; g < ng; ++g) v += gram[g * ng + ti] * leaf[g];
      coeff_acc[i].add(v * std::conj(e[nterms + i]) * w);
    }
    Complex s{};
    for (std::size_t a = 0; a < ng; ++a) {
      for (std::size_t b = 0; b < ng; ++b) s += gram[a * ng + b] * leaf[a] * std::conj(leaf[b]);
    }
    sq_acc.add(s * w);
  });

  NumericTransform out;
  out.coeffs.reserve(targets.size());
  for (const auto& acc : coeff_acc) out.coeffs.push_back(acc.value());
  out.mean_sq = sq_acc.value().real();

  for (const auto& c : targets) {
    CompensatedSum mass;
    std::optional<double> fmin;
    for (std::size_t j = 0; j < nterms; ++j) {
      if (freqs[j] == c.lambda) continue;
      mass.add(std::abs(coeffs[j]));
      const double f = (freqs[j] - c.lambda).abs().to_double();
      fmin = fmin ? std::min(*fmin, f) : f;
    }
    if (fmin) out.coeff_error_bound = std::max(out.coeff_error_bound, mean_error_bound(scheme, mass.value(), *fmin, horizon));
  }
  CompensatedSum mass;
  std::optional<double> fmin;
  for (std::size_t j = 0; j < nterms; ++j) {
    for (std::size_t k = 0; k < nterms; ++k) {
      if (freqs[j] == freqs[k]) continue;
      mass.add(std::abs(coeffs[j]) * std::abs(coeffs[k]));
      const double f = (freqs[j] - freqs[k]).abs().to_double();
      fmin = fmin ? std::min(*fmin, f) : f;
    }
  }
  if (fmin) out.mean_sq_error_bound = mean_error_bound(scheme, mass.value(), *fmin, horizon);
  return out;
}

// ---------------------------------------------------------------------------

SolenoidPoly abs_squared(const SolenoidPoly& phi) {
  std::vector<SolenoidTerm> terms;
  terms.reserve(phi.size() * phi.size());
  for (const auto& a : phi.terms()) {
    for (const auto& b : phi.terms()) terms.push_back({a.coeff * std::conj(b.coeff), SolenoidCharacter{a.chr.q - b.chr.q}});
  }
  return SolenoidPoly(std::move(terms));
}

Spectrum spectrum(const SolenoidPoly& phi) {
  std::vector<SpectrumEntry> entries;
  entries.reserve(phi.size());
  for (const auto& t : phi.terms()) entries.push_back({t.chr, t.coeff});
  Spectrum out = Spectrum::make(std::move(entries));
  out.residual_power = solenoid_mean(abs_squared(phi)).value.real() - out.sum_sq();
  return out;
}

Spectrum spectrum(const SolenoidPoly& phi, const std::vector<Rational>& candidates, double threshold) {
  std::vector<SpectrumEntry> entries;
  std::vector<Rational> seen = candidates;
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (const auto& q : seen) {
    const Complex c = transform(phi, as_product(SolenoidCharacter{q}));
    if (std::abs(c) > threshold) entries.push_back({SolenoidCharacter{q}, c});
  }
  Spectrum out = Spectrum::make(std::move(entries));
  out.residual_power = solenoid_mean(abs_squared(phi)).value.real() - out.sum_sq();
  return out;
}

ProductSpectrum product_spectrum(const ProductPoly& phi) {
  ProductSpectrum out;
  for (const auto& t : phi.terms()) out.entries.push_back({t.chr, t.coeff});
  return out;
}

std::vector<Rational> farey_grid(std::uint64_t max_den, std::uint64_t max_abs) {
  std::vector<Rational> out;
  const auto top = static_cast<std::int64_t>(max_abs);
  for (std::uint64_t b = 1; b <= max_den; ++b) {
    const auto bb = static_cast<std::int64_t>(b);
    for (std::int64_t a = -top * bb; a <= top * bb; ++a) {
      if (std::gcd(a < 0 ? -a : a, bb) == 1) out.emplace_back(BigInt(a), BigInt(bb));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlackBoxSpectrum spectrum_blackbox(const RealFn& leaf, const BlackBoxOptions& options) {
  if (options.max_den == 0) throw DomainError("Farey grid needs max denominator >= 1");
  const double band = 2.0 * static_cast<double>(options.max_abs);
  const WindowQuadrature quad(options.horizon, band, options.scheme, options.nodes_per_panel);
  const std::size_t per_unit = quad.offsets().size();
  const std::size_t units = quad.full_units();

  // Weighted samples w(x) f(x), laid out [unit][offset].
  std::vector<Complex> samples(units * per_unit);
  double sup = 0.0;
  CompensatedSum power;
  auto sample = [&](double x) {
    const Complex v = leaf(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("non-finite sample at x = " + std::to_string(x));
    }
    sup = std::max(sup, std::abs(v));
    return v;
  };
  for (std::size_t n = 0; n < units; ++n) {
    if (n == quad.split_unit()) continue;  // its nodes are in the tail, samples stay 0
    for (std::size_t k = 0; k < per_unit; ++k) {
      const double x = static_cast<double>(n) + quad.offsets()[k];
      const double w = quad.offset_weights()[k] * quad.kernel(x);
      const Complex v = sample(x);
      power.add(std::norm(v) * w);
      samples[n * per_unit + k] = v * w;
    }
  }
  std::vector<Complex> tail(quad.tail_nodes().size());
  for (std::size_t k = 0; k < tail.size(); ++k) {
    const double x = quad.tail_nodes()[k];
    const double w = quad.tail_weights()[k] * quad.kernel(x);
    const Complex v = sample(x);
    power.add(std::norm(v) * w);
    tail[k] = v * w;
  }

  BlackBoxSpectrum out;
  const double den_max = static_cast<double>(options.max_den);
  out.error_bound = mean_error_bound(options.scheme, sup, 1.0 / (den_max * den_max), options.horizon);
  out.threshold = options.threshold_factor * out.error_bound;

  const auto grid = farey_grid(options.max_den, options.max_abs);
  out.candidates = grid.size();
  std::map<std::uint64_t, std::vector<Rational>> by_den;
  for (const auto& q : grid) by_den[q.den().convert_to<std::uint64_t>()].push_back(q);

  std::vector<SpectrumEntry> found;
  std::vector<Complex> offset_phase(per_unit);
  for (const auto& [b, qs] : by_den) {
    // Fold unit blocks by n mod b: exp(-2 pi i q n) depends only on n mod b.
    std::vector<ComplexCompensatedSum> fold(b * per_unit);
    for (std::size_t n = 0; n < units; ++n) {
      const std::size_t r = n % b;
      for (std::size_t k = 0; k < per_unit; ++k) fold[r * per_unit + k].add(samples[n * per_unit + k]);
    }
    std::vector<Complex> folded(fold.size());
    for (std::size_t i = 0; i < fold.size(); ++i) folded[i] = fold[i].value();

    for (const auto& q : qs) {
      const Rational minus = -q;
      const double qd = minus.to_double();
      for (std::size_t k = 0; k < per_unit; ++k) offset_phase[k] = unit_phase(qd * quad.offsets()[k]);
      const std::int64_t a = floor_mod(minus.num(), q.den()).convert_to<std::int64_t>();
      ComplexCompensatedSum acc;
      for (std::size_t r = 0; r < b; ++r) {
        Complex inner{};
        for (std::size_t k = 0; k < per_unit; ++k) inner += folded[r * per_unit + k] * offset_phase[k];
        const auto turn = static_cast<double>((a * static_cast<std::int64_t>(r)) % static_cast<std::int64_t>(b)) /
                          static_cast<double>(b);
        acc.add(inner * unit_phase(turn));
      }
      for (std::size_t k = 0; k < tail.size(); ++k) acc.add(tail[k] * exp_2pi_i(minus, quad.tail_nodes()[k]));
      const Complex c = acc.value();
      if (std::abs(c) > out.threshold) {
        found.push_back({SolenoidCharacter{q}, c});
      } else {
        out.max_rejected = std::max(out.max_rejected, std::abs(c));
      }
    }
  }
  out.spectrum = Spectrum::make(std::move(found));
  out.spectrum.residual_power = power.value() - out.spectrum.sum_sq();
  return out;
}

Spectrum descend_spectrum(const ProductSpectrum& spec) {
  std::vector<SpectrumEntry> entries;
  entries.reserve(spec.entries.size());
  for (const auto& e : spec.entries) entries.push_back({as_solenoid(e.chr), e.coeff});
  return Spectrum::make(std::move(entries));
}

// ---------------------------------------------------------------------------

ParsevalReport parseval_check(const SolenoidPoly& phi) {
  ParsevalReport r;
  CompensatedSum acc;
  for (const auto& t : phi.terms()) acc.add(std::norm(transform(phi, as_product(t.chr))));
  r.sum_sq = acc.value();
  r.mean_sq = solenoid_mean(abs_squared(phi)).value.real();
  r.gap = std::abs(r.sum_sq - r.mean_sq);
  return r;
}

ParsevalReport parseval_check_window(const SolenoidPoly& phi, double horizon, MeanScheme scheme) {
  std::vector<ProductCharacter> targets;
  targets.reserve(phi.size());
  for (const auto& t : phi.terms()) targets.push_back(as_product(t.chr));
  const NumericTransform nt = transform_window(ProductPoly(phi), targets, horizon, scheme);
  ParsevalReport r;
  CompensatedSum acc;
  for (const auto& c : nt.coeffs) acc.add(std::norm(c));
  r.sum_sq = acc.value();
  r.mean_sq = nt.mean_sq;
  r.gap = std::abs(r.sum_sq - r.mean_sq);
  return r;
}

UniquenessReport uniqueness_report(const SolenoidPoly& phi, const SolenoidPoly& psi, std::size_t samples) {
  UniquenessReport r;
  const Spectrum a = spectrum(phi);
  const Spectrum b = spectrum(psi);
  std::vector<Rational> support;
  for (const auto& e : a.entries) support.push_back(e.chr.q);
  for (const auto& e : b.entries) support.push_back(e.chr.q);
  for (const auto& q : support) r.coeff_gap = std::max(r.coeff_gap, std::abs(a.coefficient(q) - b.coefficient(q)));
  r.spectra_equal = r.coeff_gap < kUniquenessCoeffTol;

  const ModulusTower tower(std::vector<BigInt>{lcm(phi.denominator_lcm(), psi.denominator_lcm())});
  std::mt19937_64 rng(0x756e697175ULL);
  const SolenoidPoly diff = phi - psi;
  for (const auto& s : random_samples(samples, -100.0, 100.0, tower, rng)) {
    r.sample_gap = std::max(r.sample_gap, std::abs(eval(diff, s.x, s.t)));
  }
  r.samples_equal = r.sample_gap < kUniquenessSampleTol;
  return r;
}

bool uniqueness_check(const SolenoidPoly& phi, const SolenoidPoly& psi) {
  const UniquenessReport r = uniqueness_report(phi, psi);
  if (!r.consistent()) {
    std::ostringstream os;
    os << "spectra " << (r.spectra_equal ? "agree" : "differ") << " (gap " << r.coeff_gap << ") but samples "
       << (r.samples_equal ? "agree" : "differ") << " (gap " << r.sample_gap << ")";
    throw std::logic_error(os.str());
  }
  return r.spectra_equal;
}

// ---------------------------------------------------------------------------

bool partial_sum_before(const SpectrumEntry& a, const SpectrumEntry& b) {
  const double ma = std::abs(a.coeff);
  const double mb = std::abs(b.coeff);
  if (ma != mb) return ma > mb;
  if (a.chr.q.den() != b.chr.q.den()) return a.chr.q.den() < b.chr.q.den();
  const Rational aa = a.chr.q.abs();
  const Rational ab = b.chr.q.abs();
  if (aa != ab) return aa < ab;
  return a.chr.q < b.chr.q;
}

std::vector<SpectrumEntry> ordered_entries(const Spectrum& spec) {
  std::vector<SpectrumEntry> out = spec.entries;
  std::sort(out.begin(), out.end(), partial_sum_before);
  return out;
}

SolenoidPoly partial_sum(const Spectrum& spec, std::size_t n) {
  const auto order = ordered_entries(spec);
  std::vector<SolenoidTerm> terms;
  for (std::size_t i = 0; i < std::min(n, order.size()); ++i) terms.push_back({order[i].coeff, order[i].chr});
  return SolenoidPoly(std::move(terms));
}

ApproxReport approx_report(const SolenoidPoly& phi, const std::vector<std::size_t>& n_list, const GridPolicy& policy) {
  std::vector<SolenoidTerm> order;
  for (const auto& e : ordered_entries(spectrum(phi))) order.push_back({e.coeff, e.chr});
  return approx_over(order, n_list, shared_grid(order, policy));
}

ApproxReport approx_report(const LimitPeriodicSeries& phi, const std::vector<std::size_t>& n_list,
                           const GridPolicy& policy, double reference_tail) {
  const std::size_t ref = phi.order_for_tail(reference_tail);
  std::vector<SolenoidTerm> order;
  order.reserve(ref);
  for (std::size_t k = 1; k <= ref; ++k) order.push_back(phi.term(k));
  ApproxReport report = approx_over(order, n_list, shared_grid(order, policy));
  for (auto& row : report.rows) row.majorant_bound = phi.tail_bound(row.n);
  return report;
}

std::string spectrum_csv(const Spectrum& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "q_num,q_den,coeff_re,coeff_im,abs\n";
  for (const auto& e : spec.entries) {
    os << e.chr.q.num() << ',' << e.chr.q.den() << ',' << e.coeff.real() << ',' << e.coeff.imag() << ','
       << std::abs(e.coeff) << '\n';
  }
  return os.str();
}

}  // namespace solh
