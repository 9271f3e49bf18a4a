#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solh/errors.hpp"
#include "solh/fourier.hpp"
#include "support.hpp"

using namespace solh;
namespace st = solh::testing;

namespace {

Rational r(std::int64_t n, std::int64_t d) { return Rational(BigInt(n), BigInt(d)); }
RationalAngle ang(std::int64_t a, std::int64_t b) { return RationalAngle(BigInt(a), BigInt(b)); }

const ModulusTower& tower() {
  static const ModulusTower t = ModulusTower::lcm_tower();
  return t;
}

SolenoidPoly two_term() {
  return SolenoidPoly({{{2.0, 0.0}, SolenoidCharacter{Rational(1)}}, {{0.0, 3.0}, SolenoidCharacter{r(1, 2)}}});
}

ProductPoly as_prod(const SolenoidPoly& phi) {
  std::vector<ProductTerm> terms;
  for (const auto& t : phi.terms()) terms.push_back({t.coeff, as_product(t.chr)});
  return ProductPoly(std::move(terms));
}

// Exact leaf coefficient from int64 residues: sum of c chi_{frac q}(t) over terms with q = lambda.
Complex oracle_leaf_coeff(const SolenoidPoly& phi, std::int64_t t, const Rational& lambda) {
  Complex v{};
  for (const auto& term : phi.terms()) {
    if (term.chr.q != lambda) continue;
    const std::int64_t a = st::i64(lambda.num());
    const std::int64_t b = st::i64(lambda.den());
    v += term.coeff * st::oracle_char(st::mod(a, b), b, t);
  }
  return v;
}

}  // namespace

TEST_CASE("leaf_coefficient examples") {
  const SolenoidPoly four({{{4.0, 0.0}, SolenoidCharacter{Rational(2)}}});
  const ProfiniteInt zero = embed_int(0, tower());
  CHECK(leaf_coefficient(four, zero, Rational(2)) == Complex(4.0, 0.0));
  CHECK(leaf_coefficient(four, zero, r(1, 2)) == Complex(0.0, 0.0));
  const SolenoidPoly half({{{1.0, 0.0}, SolenoidCharacter{r(1, 2)}}});
  CHECK(std::abs(leaf_coefficient(half, embed_int(1, tower()), r(1, 2)) - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("leaf_coefficient matches the residue oracle") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> ts(-1000000, 1000000);
  for (const auto& phi : st::corpus()) {
    const std::int64_t t = ts(rng);
    for (const auto& term : phi.terms()) {
      CHECK(std::abs(leaf_coefficient(phi, embed_int(t, tower()), term.chr.q) -
                     oracle_leaf_coeff(phi, t, term.chr.q)) < 1e-12);
    }
  }
}

TEST_CASE("numeric leaf coefficient") {
  const SolenoidPoly phi = two_term();
  const RealFn leaf = [&](double x) { return st::oracle_eval(phi, x, 0); };
  WindowOptions o;
  o.max_frequency = 1.0;
  o.min_frequency = 0.5;
  o.amplitude = 5.0;
  for (const auto& [q, c] : {std::pair{Rational(1), Complex(2.0, 0.0)}, std::pair{r(1, 2), Complex(0.0, 3.0)},
                             std::pair{r(1, 3), Complex(0.0, 0.0)}}) {
    const auto m = leaf_coefficient_window(leaf, q, 1e4, o);
    CHECK(std::abs(m.value - c) < 1e-3);
  }
}

TEST_CASE("transversal factor examples") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10; ++i) {
    const auto t = sample_uniform(tower(), rng);
    CHECK(transversal_factor(Rational(7), t) == Complex(1.0, 0.0));
    CHECK(transversal_factor(Rational(-3), t) == Complex(1.0, 0.0));
  }
  const Complex w = transversal_factor(r(1, 3), embed_int(2, tower()));
  CHECK(std::abs(w - std::polar(1.0, 4.0 * std::numbers::pi / 3.0)) < 1e-15);
  CHECK(TransversalFactor(r(7, 3)).character == ang(1, 3));
  CHECK(TransversalFactor(r(-1, 4)).character == ang(3, 4));
}

TEST_CASE("transversal factor is a character") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const auto s = sample_uniform(tower(), rng);
    const auto t = sample_uniform(tower(), rng);
    const Rational lambda = st::random_rational(rng, 12, 5);
    const TransversalFactor a(lambda);
    CHECK(std::abs(a(pf_add(s, t)) - a(s) * a(t)) < 1e-12);
    CHECK(std::abs(a(pf_neg(s)) - std::conj(a(s))) < 1e-12);
  }
}

TEST_CASE("transversal factor stabilizes once the tower resolves the denominator") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 50; ++i) {
    const auto t = sample_uniform(tower(), rng);
    const Rational lambda = st::random_rational(rng, 12, 5);
    const auto approx = transversal_factor_approximants(lambda, t);
    const std::size_t need = *tower().resolving_depth(lambda.den());
    const RationalAngle limit = approx.back();
    for (std::size_t k = need; k <= approx.size(); ++k) CHECK(approx[k - 1] == limit);
    CHECK(std::abs(transversal_factor(lambda, t, need) - eval_zhat(TransversalFactor(lambda).character, t)) < 1e-15);
  }
}

TEST_CASE("transversal factor reports insufficient depth") {
  std::mt19937_64 rng(25);
  const auto t = sample_uniform(tower(), rng);
  CHECK_THROWS_AS(transversal_factor(r(1, 17), t, 8), PrecisionError);
  try {
    transversal_factor(r(1, 17), t, 8);
  } catch (const PrecisionError& e) {
    CHECK(e.required_depth() == 17);
    CHECK(std::string(e.what()).find("requires tower depth ≥ 17") != std::string::npos);
  }
  // Embedded integers resolve every modulus.
  CHECK(std::abs(transversal_factor(r(1, 17), embed_int(17, tower()), 2) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("leaf and transversal consistency") {
  std::mt19937_64 rng(26);
  const auto polys = st::corpus();
  std::uniform_int_distribution<std::size_t> pick(0, polys.size() - 1);
  const ProfiniteInt zero = embed_int(0, tower());
  for (int i = 0; i < 100; ++i) {
    const auto& phi = polys[pick(rng)];
    std::uniform_int_distribution<std::size_t> term(0, phi.size() - 1);
    const Rational lambda = phi.terms()[term(rng)].chr.q;
    const auto t = sample_uniform(tower(), rng);
    const Complex lhs = leaf_coefficient(phi, t, lambda);
    const Complex rhs = transversal_factor(lambda, t) * leaf_coefficient(phi, zero, lambda);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("transform examples") {
  const SolenoidPoly phi({{{1.0, 0.0}, SolenoidCharacter{r(3, 2)}}});
  CHECK(std::abs(transform(phi, {r(3, 2), ang(1, 2)}) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(transform(phi, {r(1, 2), ang(1, 2)}) == Complex(0.0, 0.0));
  CHECK(transform(phi, {r(3, 2), ang(0, 1)}) == Complex(0.0, 0.0));
  CHECK(std::abs(transform_by_enumeration(phi, {r(3, 2), ang(1, 2)}) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("selection rule and orthonormality on the corpus") {
  std::mt19937_64 rng(27);
  for (const auto& phi : st::corpus()) {
    for (const auto& term : phi.terms()) {
      const Rational& q = term.chr.q;
      CHECK(transform(phi, as_product(term.chr)) == term.coeff);
      std::uniform_int_distribution<std::int64_t> den(1, 12);
      for (int k = 0; k < 6; ++k) {
        const std::int64_t b = den(rng);
        std::uniform_int_distribution<std::int64_t> num(0, b - 1);
        const RationalAngle rho = ang(num(rng), b);
        const ProductCharacter c{q, rho};
        const Complex sym = transform(phi, c);
        const Complex oracle = st::oracle_transform(phi, q, st::i64(rho.a()), st::i64(rho.b()));
        CHECK(std::abs(sym - oracle) < 1e-12);
        CHECK(std::abs(transform_by_enumeration(phi, c) - oracle) < 1e-12);
        if (!descends(c)) CHECK(sym == Complex(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("transform factorizes through the base leaf") {
  std::mt19937_64 rng(28);
  const ProfiniteInt zero = embed_int(0, tower());
  for (const auto& phi : st::corpus()) {
    for (const auto& term : phi.terms()) {
      const Rational& lambda = term.chr.q;
      for (const RationalAngle& rho : {frac_decompose(lambda).second, ang(1, 5), ang(0, 1)}) {
        const Complex haar = haar_character_exact(angle_sub(TransversalFactor(lambda).character, rho));
        CHECK(std::abs(transform(phi, {lambda, rho}) - leaf_coefficient(phi, zero, lambda) * haar) < 1e-12);
      }
    }
  }
}

TEST_CASE("numeric transform agrees with the symbolic one") {
  const auto polys = st::corpus();
  for (std::size_t i = 0; i < polys.size(); i += 7) {
    const auto& phi = polys[i];
    std::vector<ProductCharacter> targets;
    for (const auto& term : phi.terms()) {
      targets.push_back(as_product(term.chr));
      targets.push_back({term.chr.q, angle_add(frac_decompose(term.chr.q).second, ang(1, 3))});
    }
    const auto nt = transform_window(as_prod(phi), targets, 1e3);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      CHECK(std::abs(nt.coeffs[k] - transform(phi, targets[k])) <= nt.coeff_error_bound + 1e-10);
    }
    CHECK(std::abs(nt.mean_sq - st::oracle_mean_sq(phi)) <= nt.mean_sq_error_bound + 1e-10);
  }
}

TEST_CASE("spectrum examples") {
  const Spectrum s = spectrum(two_term());
  REQUIRE(s.entries.size() == 2);
  CHECK(s.coefficient(Rational(1)) == Complex(2.0, 0.0));
  CHECK(s.coefficient(r(1, 2)) == Complex(0.0, 3.0));
  CHECK(s.residual_power == 0.0);
  CHECK(spectrum(SolenoidPoly{}).entries.empty());
  const Spectrum restricted = spectrum(two_term(), {Rational(1), r(1, 3)});
  REQUIRE(restricted.entries.size() == 1);
  CHECK(restricted.entries[0].chr.q == Rational(1));
  CHECK(spectrum(two_term(), {Rational(1), r(1, 2)}, 2.5).entries.size() == 1);
  CHECK_THROWS_AS(Spectrum::make({{SolenoidCharacter{Rational(1)}, {1.0, 0.0}}, {SolenoidCharacter{Rational(1)}, {2.0, 0.0}}}),
                  DomainError);
}

TEST_CASE("symbolic spectrum is the term map") {
  for (const auto& phi : st::corpus()) {
    const Spectrum s = spectrum(phi);
    REQUIRE(s.entries.size() == phi.size());
    for (const auto& term : phi.terms()) CHECK(s.coefficient(term.chr.q) == term.coeff);
    CHECK(std::abs(s.residual_power) < 1e-12);
  }
}

TEST_CASE("farey grid") {
  const auto g = farey_grid(3, 1);
  // 0, ±1, ±1/2, ±1/3, ±2/3
  CHECK(g.size() == 9);
  CHECK(g.front() == Rational(-1));
  CHECK(g.back() == Rational(1));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(farey_grid(12, 6).size() == 1 + 2 * 6 * 46);  // sum of phi(b), b <= 12, is 46
}

TEST_CASE("black-box spectrum of a two-term leaf") {
  const SolenoidPoly phi = two_term();
  BlackBoxOptions o;
  o.max_den = 8;
  const auto bb = spectrum_blackbox([&](double x) { return st::oracle_eval(phi, x, 0); }, o);
  REQUIRE(bb.spectrum.entries.size() == 2);
  CHECK(std::abs(bb.spectrum.coefficient(Rational(1)) - Complex(2.0, 0.0)) < 1e-3);
  CHECK(std::abs(bb.spectrum.coefficient(r(1, 2)) - Complex(0.0, 3.0)) < 1e-3);
  CHECK(bb.max_rejected < bb.threshold);
  CHECK(bb.candidates == farey_grid(8, 6).size());
}

TEST_CASE("black-box spectrum recovers corpus leaves") {
  st::CorpusOptions co;
  co.count = 5;
  for (const auto& phi : st::corpus(co)) {
    const auto bb = spectrum_blackbox([&](double x) { return st::oracle_eval(phi, x, 0); });
    REQUIRE(bb.spectrum.entries.size() == phi.size());
    for (const auto& term : phi.terms()) CHECK(std::abs(bb.spectrum.coefficient(term.chr.q) - term.coeff) < 1e-3);
  }
}

TEST_CASE("descend_spectrum") {
  const ProductSpectrum ok{{{ProductCharacter{r(3, 2), ang(1, 2)}, {2.0, 0.0}}}};
  const Spectrum d = descend_spectrum(ok);
  REQUIRE(d.entries.size() == 1);
  CHECK(d.entries[0].chr.q == r(3, 2));
  CHECK(d.entries[0].coeff == Complex(2.0, 0.0));
  CHECK(descend_spectrum(ProductSpectrum{}).entries.empty());
  const ProductSpectrum bad{{{ProductCharacter{r(1, 2), ang(1, 3)}, {1.0, 0.0}}}};
  CHECK_THROWS_AS(descend_spectrum(bad), DomainError);

  for (const auto& phi : st::corpus()) {
    const Spectrum back = descend_spectrum(product_spectrum(as_prod(phi)));
    REQUIRE(back.entries.size() == phi.size());
    for (const auto& term : phi.terms()) CHECK(back.coefficient(term.chr.q) == term.coeff);
  }
}

TEST_CASE("Parseval, exact path") {
  const auto p = parseval_check(two_term());
  CHECK(p.sum_sq == 13.0);
  CHECK(p.mean_sq == 13.0);
  CHECK(p.gap == 0.0);
  const auto c = parseval_check(SolenoidPoly({{{3.0, 4.0}, SolenoidCharacter{Rational(0)}}}));
  CHECK(c.sum_sq == 25.0);
  CHECK(c.mean_sq == 25.0);
  for (const auto& phi : st::corpus()) {
    const auto rep = parseval_check(phi);
    CHECK(rep.gap < 1e-12);
    CHECK(std::abs(rep.mean_sq - st::oracle_mean_sq(phi)) < 1e-12);
  }
}

TEST_CASE("Parseval, numeric path") {
  const auto p = parseval_check_window(two_term(), 1e4);
  CHECK(p.gap <= 1e-2);
  CHECK(p.mean_sq == doctest::Approx(13.0).epsilon(1e-3));
  const auto polys = st::corpus();
  for (std::size_t i = 0; i < polys.size(); i += 10) CHECK(parseval_check_window(polys[i], 1e4).gap <= 1e-2);
}

TEST_CASE("uniqueness") {
  const SolenoidPoly phi = two_term();
  CHECK(uniqueness_check(phi, phi));
  const SolenoidPoly reordered({{{0.0, 3.0}, SolenoidCharacter{r(1, 2)}}, {{2.0, 0.0}, SolenoidCharacter{Rational(1)}}});
  CHECK(uniqueness_check(phi, reordered));
  const SolenoidPoly bumped({{{3.0, 0.0}, SolenoidCharacter{Rational(1)}}, {{0.0, 3.0}, SolenoidCharacter{r(1, 2)}}});
  const auto rep = uniqueness_report(phi, bumped);
  CHECK(!rep.spectra_equal);
  CHECK(!rep.samples_equal);
  CHECK(rep.sample_gap >= 1.0 - 1e-6);
  CHECK(rep.consistent());
  CHECK(!uniqueness_check(phi, bumped));

  const auto polys = st::corpus();
  for (std::size_t i = 0; i + 1 < polys.size(); ++i) {
    CHECK(uniqueness_report(polys[i], polys[i + 1]).consistent());
    CHECK(uniqueness_check(polys[i], polys[i] + SolenoidPoly{}));
  }
}

TEST_CASE("partial sum ordering") {
  const Spectrum s = Spectrum::make({{SolenoidCharacter{r(1, 3)}, {1.0, 0.0}},
                                     {SolenoidCharacter{r(-1, 2)}, {1.0, 0.0}},
                                     {SolenoidCharacter{r(1, 2)}, {1.0, 0.0}},
                                     {SolenoidCharacter{Rational(2)}, {1.0, 0.0}},
                                     {SolenoidCharacter{Rational(5)}, {0.0, 4.0}}});
  const auto order = ordered_entries(s);
  REQUIRE(order.size() == 5);
  CHECK(order[0].chr.q == Rational(5));
  CHECK(order[1].chr.q == Rational(2));
  CHECK(order[2].chr.q == r(-1, 2));
  CHECK(order[3].chr.q == r(1, 2));
  CHECK(order[4].chr.q == r(1, 3));
  CHECK(partial_sum(s, 0).empty());
  CHECK(partial_sum(s, 2).size() == 2);
  CHECK(partial_sum(s, 2).coefficient(Rational(2)) == Complex(1.0, 0.0));
  CHECK(partial_sum(s, 99).size() == 5);
}

TEST_CASE("approximation of finite polynomials") {
  std::mt19937_64 rng(29);
  st::CorpusOptions o;
  o.max_terms = 5;
  for (const auto& phi : st::corpus(o)) {
    std::vector<std::size_t> ns;
    for (std::size_t n = 0; n <= phi.size(); ++n) ns.push_back(n);
    const auto rep = approx_report(phi, ns);
    CHECK(rep.monotone);
    CHECK(rep.rows.back().sup_error < 1e-10);
    const TrigPoly base = leaf_restrict(phi, embed_int(0, tower())).poly;
    CHECK(rep.rows.front().sup_error == doctest::Approx(sup_norm_on_grid(base, GridPolicy{})));
  }
}

TEST_CASE("approximation of the dyadic series") {
  const auto dy = LimitPeriodicSeries::dyadic();
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 10; ++n) ns.push_back(n);
  const auto rep = approx_report(dy, ns);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    CHECK(row.sup_error <= std::ldexp(2.0, -static_cast<int>(row.n)));
    REQUIRE(row.majorant_bound);
    CHECK(row.sup_error <= *row.majorant_bound + 1e-15);
    if (i > 0) CHECK(row.sup_error < rep.rows[i - 1].sup_error);
  }
}

TEST_CASE("spectrum csv") {
  const auto csv = spectrum_csv(spectrum(two_term()));
  CHECK(csv.rfind("q_num,q_den,coeff_re,coeff_im,abs\n", 0) == 0);
  CHECK(csv.find("\n1,2,0,3,3\n") != std::string::npos);
  CHECK(csv.find("\n1,1,2,0,2\n") != std::string::npos);
}
