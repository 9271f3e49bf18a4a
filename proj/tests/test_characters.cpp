#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "solh/characters.hpp"
#include "solh/errors.hpp"
#include "support.hpp"

using namespace solh;
using solh::testing::oracle_char;

namespace {

Rational r(std::int64_t n, std::int64_t d) { return Rational(BigInt(n), BigInt(d)); }

const ModulusTower& tower() {
  static const ModulusTower t = ModulusTower::lcm_tower();
  return t;
}

double annihilation_residual(const ProductCharacter& c, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> xs(-20.0, 20.0);
  const ProfiniteInt one = embed_int(1, tower());
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = xs(rng);
    const ProfiniteInt t = sample_uniform(tower(), rng);
    worst = std::max(worst, std::abs(eval_product(c, x + 1.0, pf_sub(t, one)) - eval_product(c, x, t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("eval_zhat examples") {
  CHECK(eval_zhat(RationalAngle(1, 2), embed_int(3, tower())) == Complex(-1.0, 0.0));
  std::mt19937_64 rng(1);
  CHECK(eval_zhat(RationalAngle(), sample_uniform(tower(), rng)) == Complex(1.0, 0.0));

  const ProfiniteInt two = embed_int(2, tower());
  const Complex expect = std::polar(1.0, 4.0 * std::numbers::pi / 3.0);
  CHECK(std::abs(eval_zhat(RationalAngle(1, 3), two) - expect) < 1e-15);
  // Cross-check along the approximating integers once 3 | M_k.
  for (std::size_t k = 3; k <= tower().depth(); ++k) {
    const auto tk = approx_sequence(two, k).convert_to<std::int64_t>();
    CHECK(std::abs(oracle_char(1, 3, tk) - expect) < 1e-15);
  }
}

TEST_CASE("eval_product examples") {
  std::mt19937_64 rng(2);
  const ProfiniteInt t = sample_uniform(tower(), rng);
  CHECK(eval_product(ProductCharacter{Rational(0), RationalAngle()}, 3.7, t) == Complex(1.0, 0.0));
  CHECK(eval_product(ProductCharacter{Rational(1), RationalAngle()}, 0.5, t) == Complex(-1.0, 0.0));
  const Complex v = eval_product(ProductCharacter{r(3, 2), RationalAngle(1, 2)}, 1.0, embed_int(0, tower()));
  CHECK(std::abs(v - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("descends examples") {
  std::mt19937_64 rng(3);
  const ProductCharacter good{r(3, 2), RationalAngle(1, 2)};
  CHECK(descends(good));
  CHECK(annihilation_residual(good, rng, 100) < 1e-12);
  CHECK_FALSE(descends(ProductCharacter{r(1, 2), RationalAngle(1, 3)}));
  for (int n = -5; n <= 5; ++n) CHECK(descends(ProductCharacter{Rational(n), RationalAngle()}));
}

TEST_CASE("solenoid characters as product characters") {
  const auto a = as_product(solenoid_character(r(5, 3)));
  CHECK(a.lambda == r(5, 3));
  CHECK(a.rho == RationalAngle(2, 3));
  const auto b = as_product(solenoid_character(Rational(-2)));
  CHECK(b.lambda == Rational(-2));
  CHECK(b.rho.is_identity());
  const auto c = as_product(solenoid_character(r(1, 2)));
  CHECK(c.rho == RationalAngle(1, 2));
  CHECK_THROWS_AS(as_solenoid(ProductCharacter{r(1, 2), RationalAngle(1, 3)}), DomainError);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Rational q = solh::testing::random_rational(rng, 50, 10);
    const ProductCharacter p = as_product(solenoid_character(q));
    REQUIRE(as_solenoid(p).q == q);
    auto [n, rho] = frac_decompose(q);
    REQUIRE(Rational(n) + p.rho.as_rational() == q);
  }
}

TEST_CASE("Zhat characters are homomorphisms") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> den(1, 16);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t b = den(rng);
    std::uniform_int_distribution<std::int64_t> num(0, b - 1);
    const RationalAngle rho(BigInt(num(rng)), BigInt(b));
    const ProfiniteInt s = sample_uniform(tower(), rng);
    const ProfiniteInt t = sample_uniform(tower(), rng);
    worst = std::max(worst, std::abs(eval_zhat(rho, pf_add(s, t)) - eval_zhat(rho, s) * eval_zhat(rho, t)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("product characters have unit modulus") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> xs(-1e6, 1e6);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Rational lambda = solh::testing::random_rational(rng, 16, 20);
    const ProductCharacter c{lambda, RationalAngle::of(solh::testing::random_rational(rng, 16, 1))};
    worst = std::max(worst, std::abs(std::abs(eval_product(c, xs(rng), sample_uniform(tower(), rng))) - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("descent is equivalent to annihilating the diagonal") {
  std::mt19937_64 rng(7);
  int agree = 0;
  for (int i = 0; i < 300; ++i) {
    const Rational lambda = solh::testing::random_rational(rng, 12, 4);
    // Half the time use the matching angle, otherwise a random one.
    const RationalAngle rho = (i % 2 == 0) ? RationalAngle::of(lambda)
                                           : RationalAngle::of(solh::testing::random_rational(rng, 12, 1));
    const ProductCharacter c{lambda, rho};
    const bool numeric = annihilation_residual(c, rng, 100) < 1e-10;
    if (numeric == descends(c)) ++agree;
  }
  CHECK(agree == 300);
}

TEST_CASE("exp_2pi_i keeps phase accuracy at large x") {
  // Oracle: long double reduction of q * x modulo 1 for exactly representable x.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::int64_t> big(-(std::int64_t{1} << 32), std::int64_t{1} << 32);  // n + f stays exact
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Rational q = solh::testing::random_rational(rng, 97, 5);
    const std::int64_t n = big(rng);
    const double f = std::ldexp(std::floor(std::ldexp(frac(rng), 20)), -20);  // 20-bit fraction, exact
    const double x = static_cast<double>(n) + f;
    const std::int64_t a = solh::testing::i64(q.num());
    const std::int64_t b = solh::testing::i64(q.den());
    // q x = (a n mod b)/b + q f  (mod 1)
    const long double turns =
        static_cast<long double>(solh::testing::mod(a * (n % b), b)) / b + static_cast<long double>(a) * f / b;
    const long double red = turns - std::floor(turns);
    const Complex expect = std::polar(1.0, static_cast<double>(2.0L * std::numbers::pi_v<long double> * red));
    worst = std::max(worst, std::abs(exp_2pi_i(q, x) - expect));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("unit_phase is exact on quarter turns") {
  CHECK(unit_phase(0.0) == Complex(1.0, 0.0));
  CHECK(unit_phase(0.25) == Complex(0.0, 1.0));
  CHECK(unit_phase(0.5) == Complex(-1.0, 0.0));
  CHECK(unit_phase(0.75) == Complex(0.0, -1.0));
  CHECK(unit_phase(-0.25) == Complex(0.0, -1.0));
  CHECK(unit_phase(7.5) == Complex(-1.0, 0.0));
}

TEST_CASE("character tables and the exact Haar integral") {
  const auto t = character_table(RationalAngle(1, 4));
  REQUIRE(t.size() == 4);
  CHECK(t[1] == Complex(0.0, 1.0));
  CHECK(t[2] == Complex(-1.0, 0.0));
  CHECK(haar_character_exact(RationalAngle()) == 1);
  CHECK(haar_character_exact(RationalAngle(1, 7)) == 0);
  CHECK_THROWS_AS(character_table(RationalAngle(1, 1000), 100), PrecisionError);
}

TEST_CASE("unresolvable transversal modulus is a precision error") {
  std::mt19937_64 rng(9);
  const ProfiniteInt t = sample_uniform(ModulusTower::lcm_tower(4), rng);
  CHECK_THROWS_AS(eval_zhat(RationalAngle(1, 5), t), PrecisionError);
}
