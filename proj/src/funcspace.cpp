#include "solh/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "solh/errors.hpp"
#include "solh/summation.hpp"

namespace solh {

namespace {

template <typename Term, typename Key, typename KeyOf>
std::vector<Term> canonicalize(std::vector<Term> terms, KeyOf key_of) {
  std::map<Key, Complex> merged;
  std::map<Key, Term> proto;
  for (auto& term : terms) {
    const Key key = key_of(term);
    merged[key] += term.coeff;
    proto.emplace(key, term);
  }
  std::vector<Term> out;
  out.reserve(merged.size());
  for (auto& [key, coeff] : merged) {
    if (coeff == Complex(0.0, 0.0)) continue;
    Term t = proto.at(key);
    t.coeff = coeff;
    out.push_back(std::move(t));
  }
  return out;
}

Rational max_abs(const Rational& a, const Rational& b) { return a.abs() < b.abs() ? b.abs() : a.abs(); }

// Uniform grid of spacing 1 / (density * fmax) covering [0, period) or the
// capped prefix of it.
std::vector<double> uniform_grid(double fmax, std::optional<Rational> period, const GridPolicy& policy) {
  if (fmax <= 0.0) return {0.0};
  const double h = 1.0 / (policy.points_per_period * fmax);
  std::size_t n = policy.max_points;
  if (period) {
    const double span = period->to_double() / h;
    if (span < static_cast<double>(policy.max_points)) n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span)));
  }
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i) * h;
  return xs;
}

// Values c_j * exp(2 pi i q_j x_i), laid out [term][point].
std::vector<std::vector<Complex>> term_table(const TrigPoly& poly, const std::vector<double>& xs) {
  std::vector<std::vector<Complex>> table;
  table.reserve(poly.terms().size());
  for (const auto& term : poly.terms()) {
    std::vector<Complex> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) row[i] = term.coeff * exp_2pi_i(term.freq, xs[i]);
    table.push_back(std::move(row));
  }
  return table;
}

double sup_weighted(const std::vector<std::vector<Complex>>& table, const std::vector<Complex>& weights,
                    std::size_t npoints) {
  double sup = 0.0;
  for (std::size_t i = 0; i < npoints; ++i) {
    ComplexCompensatedSum acc;
    for (std::size_t j = 0; j < table.size(); ++j) acc.add(table[j][i] * weights[j]);
    sup = std::max(sup, std::abs(acc.value()));
  }
  return sup;
}

}  // namespace

// ---------------------------------------------------------------------------

TrigPoly::TrigPoly(std::vector<TrigTerm> terms)
    : terms_(canonicalize<TrigTerm, Rational>(std::move(terms), [](const TrigTerm& t) { return t.freq; })) {}

Complex TrigPoly::operator()(double x) const {
  ComplexCompensatedSum acc;
  for (const auto& term : terms_) acc.add(term.coeff * exp_2pi_i(term.freq, x));
  return acc.value();
}

Complex TrigPoly::coefficient(const Rational& freq) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), freq,
                             [](const TrigTerm& t, const Rational& f) { return t.freq < f; });
  return it != terms_.end() && it->freq == freq ? it->coeff : Complex{};
}

Rational TrigPoly::max_abs_frequency() const {
  Rational m;
  for (const auto& t : terms_) m = max_abs(m, t.freq);
  return m;
}

std::optional<Rational> TrigPoly::min_nonzero_frequency() const {
  std::optional<Rational> m;
  for (const auto& t : terms_) {
    if (t.freq.is_zero()) continue;
    if (!m || t.freq.abs() < *m) m = t.freq.abs();
  }
  return m;
}

std::optional<Rational> TrigPoly::common_period() const {
  // gcd of rationals n_j/d_j is gcd(n_j * L/d_j) / L with L = lcm(d_j).
  BigInt l = 1;
  bool any = false;
  for (const auto& t : terms_) {
    if (t.freq.is_zero()) continue;
    l = lcm(l, t.freq.den());
    any = true;
  }
  if (!any) return std::nullopt;
  BigInt g = 0;
  for (const auto& t : terms_) {
    if (t.freq.is_zero()) continue;
    g = gcd(g, t.freq.num() * (l / t.freq.den()));
  }
  return Rational(l, g);
}

std::vector<double> sample_grid(const TrigPoly& poly, const GridPolicy& policy) {
  return uniform_grid(poly.max_abs_frequency().to_double(), poly.common_period(), policy);
}

double sup_norm_on_grid(const TrigPoly& poly, const GridPolicy& policy) {
  double sup = 0.0;
  for (double x : sample_grid(poly, policy)) sup = std::max(sup, std::abs(poly(x)));
  return sup;
}

// ---------------------------------------------------------------------------

SolenoidPoly::SolenoidPoly(std::vector<SolenoidTerm> terms)
    : terms_(canonicalize<SolenoidTerm, Rational>(std::move(terms),
                                                  [](const SolenoidTerm& t) { return t.chr.q; })) {}

Complex SolenoidPoly::coefficient(const Rational& q) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), q,
                             [](const SolenoidTerm& t, const Rational& f) { return t.chr.q < f; });
  return it != terms_.end() && it->chr.q == q ? it->coeff : Complex{};
}

BigInt SolenoidPoly::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& t : terms_) l = lcm(l, t.chr.q.den());
  return l;
}

Rational SolenoidPoly::max_abs_frequency() const {
  Rational m;
  for (const auto& t : terms_) m = max_abs(m, t.chr.q);
  return m;
}

SolenoidPoly SolenoidPoly::translated(double s) const {
  std::vector<SolenoidTerm> out = terms_;
  for (auto& t : out) t.coeff *= exp_2pi_i(t.chr.q, s);
  return SolenoidPoly(std::move(out));
}

SolenoidPoly operator+(const SolenoidPoly& a, const SolenoidPoly& b) {
  std::vector<SolenoidTerm> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return SolenoidPoly(std::move(all));
}

SolenoidPoly operator-(const SolenoidPoly& a, const SolenoidPoly& b) {
  std::vector<SolenoidTerm> all = a.terms_;
  for (auto t : b.terms_) {
    t.coeff = -t.coeff;
    all.push_back(std::move(t));
  }
  return SolenoidPoly(std::move(all));
}

ProductPoly::ProductPoly(std::vector<ProductTerm> terms)
    : terms_(canonicalize<ProductTerm, ProductCharacter>(std::move(terms),
                                                         [](const ProductTerm& t) { return t.chr; })) {}

ProductPoly::ProductPoly(const SolenoidPoly& phi) {
  terms_.reserve(phi.size());
  for (const auto& t : phi.terms()) terms_.push_back({t.coeff, as_product(t.chr)});
}

bool ProductPoly::all_descend() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const ProductTerm& t) { return descends(t.chr); });
}

SolenoidPoly ProductPoly::to_solenoid() const {
  std::vector<SolenoidTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.coeff, as_solenoid(t.chr)});
  return SolenoidPoly(std::move(out));
}

BigInt ProductPoly::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& t : terms_) l = lcm(lcm(l, t.chr.lambda.den()), t.chr.rho.b());
  return l;
}

Rational ProductPoly::max_abs_frequency() const {
  Rational m;
  for (const auto& t : terms_) m = max_abs(m, t.chr.lambda);
  return m;
}

// ---------------------------------------------------------------------------

LimitPeriodicSeries::LimitPeriodicSeries(Generator generator, Majorant majorant, Tail tail,
                                         std::optional<std::size_t> length)
    : generator_(std::move(generator)), majorant_(std::move(majorant)), tail_(std::move(tail)), length_(length) {
  if (!generator_ || !majorant_ || !tail_) throw DomainError("series needs a generator, majorant and tail bound");
}

LimitPeriodicSeries LimitPeriodicSeries::from_terms(std::vector<SolenoidTerm> terms, std::vector<double> majorant,
                                                    double tail_beyond) {
  if (terms.size() != majorant.size()) {
    throw DomainError("majorant has " + std::to_string(majorant.size()) + " entries for " +
                      std::to_string(terms.size()) + " terms");
  }
  if (!(tail_beyond >= 0.0) || !std::isfinite(tail_beyond)) throw DomainError("tail bound must be finite and >= 0");
  for (double b : majorant) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("majorant entries must be finite and >= 0");
  }
  const std::size_t n = terms.size();
  auto shared_terms = std::make_shared<std::vector<SolenoidTerm>>(std::move(terms));
  auto shared_b = std::make_shared<std::vector<double>>(std::move(majorant));
  return LimitPeriodicSeries(
      [shared_terms](std::size_t k) { return shared_terms->at(k - 1); },
      [shared_b](std::size_t k) { return k <= shared_b->size() ? (*shared_b)[k - 1] : 0.0; },
      [shared_b, tail_beyond](std::size_t m) {
        CompensatedSum acc;
        for (std::size_t k = m; k < shared_b->size(); ++k) acc.add((*shared_b)[k]);
        acc.add(tail_beyond);
        return acc.value();
      },
      n);
}

LimitPeriodicSeries LimitPeriodicSeries::dyadic() {
  return LimitPeriodicSeries(
      [](std::size_t k) {
        return SolenoidTerm{Complex(std::ldexp(1.0, -static_cast<int>(k)), 0.0),
                            SolenoidCharacter{Rational(BigInt(1), BigInt(1) << k)}};
      },
      [](std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k)); },
      [](std::size_t n) { return std::ldexp(1.0, -static_cast<int>(n)); });
}

SolenoidTerm LimitPeriodicSeries::term(std::size_t k) const {
  if (k == 0) throw DomainError("series terms are indexed from 1");
  if (length_ && k > *length_) throw DomainError("series has only " + std::to_string(*length_) + " terms");
  SolenoidTerm t = generator_(k);
  const double b = majorant_(k);
  if (std::abs(t.coeff) > b * (1.0 + 1e-12)) {
    throw DomainError("term " + std::to_string(k) + " exceeds its majorant bound");
  }
  return t;
}

SolenoidPoly LimitPeriodicSeries::truncate(std::size_t n) const {
  const std::size_t upto = length_ ? std::min(n, *length_) : n;
  std::vector<SolenoidTerm> terms;
  terms.reserve(upto);
  for (std::size_t k = 1; k <= upto; ++k) terms.push_back(term(k));
  return SolenoidPoly(std::move(terms));
}

std::size_t LimitPeriodicSeries::order_for_tail(double tol, std::size_t cap) const {
  if (length_) cap = std::min(cap, *length_);
  for (std::size_t n = 0; n < cap; ++n) {
    if (tail_(n) <= tol) return n;
  }
  return cap;
}

// ---------------------------------------------------------------------------

Complex eval(const SolenoidPoly& phi, double x, const ProfiniteInt& t) {
  ComplexCompensatedSum acc;
  for (const auto& term : phi.terms()) acc.add(term.coeff * eval_product(as_product(term.chr), x, t));
  return acc.value();
}

Complex eval(const ProductPoly& phi, double x, const ProfiniteInt& t) {
  ComplexCompensatedSum acc;
  for (const auto& term : phi.terms()) acc.add(term.coeff * eval_product(term.chr, x, t));
  return acc.value();
}

std::vector<SamplePoint> random_samples(std::size_t count, double x_lo, double x_hi, const ModulusTower& tower,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xdist(x_lo, x_hi);
  std::vector<SamplePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = xdist(rng);
    out.push_back({x, sample_uniform(tower, rng)});
  }
  return out;
}

double check_invariance(const ProductPoly& phi, const std::vector<std::int64_t>& gammas,
                        const std::vector<SamplePoint>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    const Complex base = eval(phi, s.x, s.t);
    for (std::int64_t g : gammas) {
      const ProfiniteInt shifted = pf_sub(s.t, embed_int(g, s.t.tower()));
      const Complex moved = eval(phi, s.x + static_cast<double>(g), shifted);
      worst = std::max(worst, std::abs(moved - base));
    }
  }
  return worst;
}

double check_invariance(const SolenoidPoly& phi, const std::vector<std::int64_t>& gammas,
                        const std::vector<SamplePoint>& samples) {
  return check_invariance(ProductPoly(phi), gammas, samples);
}

LeafFunction leaf_restrict(const ProductPoly& phi, const ProfiniteInt& t) {
  std::vector<TrigTerm> terms;
  terms.reserve(phi.terms().size());
  for (const auto& term : phi.terms()) terms.push_back({term.chr.lambda, term.coeff * eval_zhat(term.chr.rho, t)});
  return LeafFunction{TrigPoly(std::move(terms)), 0.0};
}

LeafFunction leaf_restrict(const SolenoidPoly& phi, const ProfiniteInt& t) {
  return leaf_restrict(ProductPoly(phi), t);
}

LeafFunction leaf_restrict(const LimitPeriodicSeries& phi, const ProfiniteInt& t, std::size_t n) {
  LeafFunction leaf = leaf_restrict(phi.truncate(n), t);
  leaf.tail_bound = phi.tail_bound(n);
  return leaf;
}

TranslationNumbers translation_numbers(const LeafFunction& phi, double eps, double window, double step,
                                       const GridPolicy& policy) {
  if (!(eps > 0.0)) throw DomainError("translation tolerance must be positive");
  if (!(step > 0.0) || !(window >= 0.0)) throw DomainError("translation scan needs step > 0 and window >= 0");
  const auto xs = sample_grid(phi.poly, policy);
  const auto table = term_table(phi.poly, xs);

  TranslationNumbers out;
  out.grid_points = xs.size();
  const auto count = static_cast<std::size_t>(std::floor(window / step + 1e-9));
  std::vector<Complex> factor(phi.poly.terms().size());
  for (std::size_t k = 0; k <= count; ++k) {
    const double tau = static_cast<double>(k) * step;
    for (std::size_t j = 0; j < factor.size(); ++j) {
      factor[j] = exp_2pi_i(phi.poly.terms()[j].freq, tau) - Complex(1.0, 0.0);
    }
    if (sup_weighted(table, factor, xs.size()) <= eps) out.taus.push_back(tau);
  }
  if (out.taus.size() >= 2) {
    double gap = 0.0;
    for (std::size_t i = 1; i < out.taus.size(); ++i) gap = std::max(gap, out.taus[i] - out.taus[i - 1]);
    out.inclusion_length = gap;
  }
  return out;
}

std::vector<double> transversal_continuity_probe(const SolenoidPoly& phi, const ProfiniteInt& t,
                                                 const std::vector<std::size_t>& depths, const GridPolicy& policy) {
  const LeafFunction at_t = leaf_restrict(phi, t);
  std::vector<TrigTerm> unit;
  unit.reserve(phi.size());
  for (const auto& term : phi.terms()) unit.push_back({term.chr.q, Complex(1.0, 0.0)});
  const TrigPoly shape(std::move(unit));
  const auto xs = sample_grid(shape, policy);
  const auto table = term_table(shape, xs);

  std::vector<double> gaps;
  gaps.reserve(depths.size());
  std::vector<Complex> diff(phi.size());
  for (std::size_t depth : depths) {
    const ProfiniteInt tk = embed_int(approx_sequence(t, depth), t.tower());
    bool all_zero = true;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const auto& term = phi.terms()[j];
      diff[j] = term.coeff * eval_zhat(RationalAngle::of(term.chr.q), tk) - at_t.poly.coefficient(term.chr.q);
      all_zero = all_zero && diff[j] == Complex(0.0, 0.0);
    }
    gaps.push_back(all_zero ? 0.0 : sup_weighted(table, diff, xs.size()));
  }
  return gaps;
}

}  // namespace solh
