#include "solh/profinite.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "solh/errors.hpp"
#include "solh/summation.hpp"

namespace solh {

namespace {

BigInt lcm_upto(std::size_t k) {
  BigInt m = 1;
  for (std::size_t i = 2; i <= k; ++i) m = lcm(m, BigInt(i));
  return m;
}

std::size_t clamp_depth(const BigInt& v) {
  if (v > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  return v.convert_to<std::size_t>();
}

[[noreturn]] void throw_unresolvable(const ModulusTower& tower, const BigInt& m) {
  if (tower.is_lcm_family()) {
    const std::size_t need = lcm_depth_for(m);
    throw PrecisionError("modulus " + m.str() + " requires tower depth ≥ " + std::to_string(need) +
                             " (configured depth " + std::to_string(tower.depth()) + ")",
                         need);
  }
  throw PrecisionError("modulus " + m.str() + " divides no level of the tower (top " +
                           tower.top().str() + ")",
                       0);
}

// Levels of `from` that the other operand can also resolve.
std::vector<BigInt> shared_chain(const ProfiniteInt& from, const ProfiniteInt& other) {
  std::vector<BigInt> out;
  for (const auto& m : from.tower().levels()) {
    if (other.embedded_value() || other.tower().resolving_depth(m)) out.push_back(m);
  }
  return out;
}

}  // namespace

std::size_t lcm_depth_for(const BigInt& m_in) {
  BigInt m = m_in.sign() < 0 ? BigInt(-m_in) : m_in;
  if (m.is_zero()) throw DomainError("lcm depth of modulus 0");
  BigInt best = 1;
  BigInt rest = m;
  // Trial division; a cofactor left after 2^20 is at least 2^20 itself, which
  // is beyond any practical tower depth either way.
  for (std::uint64_t p = 2; p < (1u << 20) && BigInt(p) * p <= rest; ++p) {
    if (rest % p != 0) continue;
    BigInt pe = 1;
    while (rest % p == 0) {
      rest /= p;
      pe *= p;
    }
    best = std::max(best, pe);
  }
  if (rest > 1) best = std::max(best, rest);
  return clamp_depth(best);
}

ModulusTower::ModulusTower(std::vector<BigInt> levels, bool lcm_family)
    : levels_(std::move(levels)), lcm_family_(lcm_family) {}

ModulusTower ModulusTower::lcm_tower(std::size_t depth) {
  if (depth == 0) throw DomainError("tower depth must be positive");
  std::vector<BigInt> levels;
  levels.reserve(depth);
  BigInt m = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    m = lcm(m, BigInt(k));
    levels.push_back(m);
  }
  return ModulusTower(std::move(levels), true);
}

ModulusTower::ModulusTower(std::vector<BigInt> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("modulus tower needs at least one level");
  if (levels_.front() < 1) throw DomainError("tower levels must be positive");
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    if (levels_[k] % levels_[k - 1] != 0) {
      throw DomainError("tower level " + levels_[k - 1].str() + " does not divide " +
                        levels_[k].str());
    }
  }
  lcm_family_ = true;
  for (std::size_t k = 0; k < levels_.size() && lcm_family_; ++k) {
    lcm_family_ = levels_[k] == lcm_upto(k + 1);
  }
}

std::optional<std::size_t> ModulusTower::resolving_depth(const BigInt& m) const {
  if (lcm_family_ && m >= 1 && m <= (1u << 20)) {
    // Smallest K with m | lcm(1..K) is the largest prime power dividing m.
    auto rest = m.convert_to<std::uint64_t>();
    std::uint64_t need = 1;
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
      std::uint64_t pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
      }
      need = std::max(need, pe);
    }
    need = std::max(need, rest);
    if (need > levels_.size()) return std::nullopt;
    return static_cast<std::size_t>(need);
  }
  // Levels form a divisibility chain, so "m divides level k" is monotone in k.
  if (levels_.back() % m != 0) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = levels_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (levels_[mid] % m == 0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo + 1;
}

ProfiniteInt::ProfiniteInt(ModulusTower tower, std::vector<BigInt> residues, std::optional<BigInt> exact)
    : tower_(std::move(tower)), residues_(std::move(residues)), exact_(std::move(exact)) {}

ProfiniteInt::ProfiniteInt(ModulusTower tower, std::vector<BigInt> residues)
    : tower_(std::move(tower)), residues_(std::move(residues)) {
  if (residues_.size() != tower_.depth()) {
    throw DomainError("expected " + std::to_string(tower_.depth()) + " residues, got " +
                      std::to_string(residues_.size()));
  }
  for (std::size_t k = 0; k < residues_.size(); ++k) {
    const BigInt& m = tower_.levels()[k];
    if (residues_[k].sign() < 0 || residues_[k] >= m) {
      throw DomainError("residue " + residues_[k].str() + " out of range for modulus " + m.str());
    }
    if (k > 0) {
      const BigInt& prev = tower_.levels()[k - 1];
      if (residues_[k] % prev != residues_[k - 1]) {
        throw DomainError("incoherent residues: " + residues_[k].str() + " mod " + prev.str() +
                          " != " + residues_[k - 1].str());
      }
    }
  }
}

ProfiniteInt embed_int(const BigInt& n, const ModulusTower& tower) {
  std::vector<BigInt> residues;
  residues.reserve(tower.depth());
  for (const auto& m : tower.levels()) residues.push_back(floor_mod(n, m));
  return ProfiniteInt(tower, std::move(residues), n);
}

BigInt residue(const ProfiniteInt& t, const BigInt& m) {
  if (m < 1) throw DomainError("residue modulus must be positive");
  if (m == 1) return BigInt(0);
  if (t.embedded_value()) return floor_mod(*t.embedded_value(), m);
  const auto k = t.tower().resolving_depth(m);
  if (!k) throw_unresolvable(t.tower(), m);
  return t.residues()[*k - 1] % m;
}

ProfiniteInt pf_add(const ProfiniteInt& s, const ProfiniteInt& t) {
  std::optional<BigInt> exact;
  if (s.exact_ && t.exact_) exact = *s.exact_ + *t.exact_;

  if (s.tower_ == t.tower_) {
    std::vector<BigInt> r(s.residues_.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = s.residues_[k] + t.residues_[k];
      if (r[k] >= s.tower_.levels()[k]) r[k] -= s.tower_.levels()[k];
    }
    return ProfiniteInt(s.tower_, std::move(r), std::move(exact));
  }

  ModulusTower target = s.tower_;
  if (exact) {
    target = s.tower_.depth() >= t.tower_.depth() ? s.tower_ : t.tower_;
  } else if (s.exact_) {
    target = t.tower_;
  } else if (!t.exact_) {
    auto from_s = shared_chain(s, t);
    auto from_t = shared_chain(t, s);
    auto& chain = from_t.size() > from_s.size() ? from_t : from_s;
    const bool trivial = chain.empty() || chain.back() == 1;
    if (trivial && !(s.tower_.top() == 1 && t.tower_.top() == 1)) {
      throw DomainError("towers " + s.tower_.top().str() + " and " + t.tower_.top().str() +
                        " have no common refinement");
    }
    target = ModulusTower(std::move(chain));
  }

  std::vector<BigInt> r;
  r.reserve(target.depth());
  for (const auto& m : target.levels()) r.push_back((residue(s, m) + residue(t, m)) % m);
  return ProfiniteInt(std::move(target), std::move(r), std::move(exact));
}

ProfiniteInt pf_neg(const ProfiniteInt& t) {
  std::vector<BigInt> r(t.residues_.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    r[k] = t.residues_[k].is_zero() ? BigInt(0) : BigInt(t.tower_.levels()[k] - t.residues_[k]);
  }
  std::optional<BigInt> exact;
  if (t.exact_) exact = BigInt(-*t.exact_);
  return ProfiniteInt(t.tower_, std::move(r), std::move(exact));
}

ProfiniteInt pf_sub(const ProfiniteInt& s, const ProfiniteInt& t) { return pf_add(s, pf_neg(t)); }

bool operator==(const ProfiniteInt& s, const ProfiniteInt& t) {
  for (const auto& m : s.tower_.levels()) {
    if ((t.exact_ || t.tower_.resolving_depth(m)) && residue(s, m) != residue(t, m)) return false;
  }
  for (const auto& m : t.tower_.levels()) {
    if ((s.exact_ || s.tower_.resolving_depth(m)) && residue(s, m) != residue(t, m)) return false;
  }
  return true;
}

BigInt approx_sequence(const ProfiniteInt& t, std::size_t depth) {
  if (depth == 0 || depth > t.tower().depth()) {
    throw PrecisionError("approximation depth " + std::to_string(depth) + " exceeds tower depth " +
                             std::to_string(t.tower().depth()),
                         depth);
  }
  return t.residues()[depth - 1];
}

ProfiniteInt sample_uniform(const ModulusTower& tower, std::mt19937_64& rng) {
  const BigInt& top = tower.top();
  // 64 extra random bits keep the modulo bias below 2^-64.
  const auto bits = static_cast<std::size_t>(msb(top)) + 1 + 64;
  BigInt v = 0;
  for (std::size_t have = 0; have < bits; have += 64) v = (v << 64) | BigInt(rng());
  const BigInt n = v % top;
  std::vector<BigInt> residues;
  residues.reserve(tower.depth());
  for (const auto& m : tower.levels()) residues.push_back(n % m);
  return ProfiniteInt(tower, std::move(residues));
}

void require_resolvable(const ModulusTower& tower, const BigInt& m) {
  if (m == 1) return;
  if (!tower.resolving_depth(m)) throw_unresolvable(tower, m);
}

std::complex<double> haar_average(const CylinderFn& f, std::uint64_t m, const ModulusTower& tower) {
  if (m == 0) throw DomainError("cylinder modulus must be positive");
  require_resolvable(tower, BigInt(m));
  ComplexCompensatedSum acc;
  for (std::uint64_t r = 0; r < m; ++r) acc.add(f(r));
  return acc.value() / static_cast<double>(m);
}

namespace {

template <typename F, typename G>
std::complex<double> inner_product_impl(const F& f, std::uint64_t mf, const G& g, std::uint64_t mg,
                                        const ModulusTower& tower) {
  if (mf == 0 || mg == 0) throw DomainError("cylinder modulus must be positive");
  const std::uint64_t d = std::gcd(mf, mg);
  const std::uint64_t mf_d = mf / d;
  if (mf_d > std::numeric_limits<std::uint64_t>::max() / mg) {
    require_resolvable(tower, BigInt(mf_d) * mg);
  } else {
    require_resolvable(tower, BigInt(mf_d * mg));
  }
  const double m = static_cast<double>(mf_d) * static_cast<double>(mg);
  if (d == 1) {
    ComplexCompensatedSum sf;
    ComplexCompensatedSum sg;
    for (std::uint64_t r = 0; r < mf; ++r) sf.add(f(r));
    for (std::uint64_t r = 0; r < mg; ++r) sg.add(g(r));
    return sf.value() * std::conj(sg.value()) / m;
  }
  std::vector<ComplexCompensatedSum> fibre(2 * d);
  for (std::uint64_t r = 0, c = 0; r < mf; ++r, c = c + 1 == d ? 0 : c + 1) fibre[c].add(f(r));
  for (std::uint64_t r = 0, c = 0; r < mg; ++r, c = c + 1 == d ? 0 : c + 1) fibre[d + c].add(g(r));
  ComplexCompensatedSum acc;
  for (std::uint64_t c = 0; c < d; ++c) acc.add(fibre[c].value() * std::conj(fibre[d + c].value()));
  return acc.value() / m;
}

}  // namespace

std::complex<double> haar_inner_product(const CylinderFn& f, std::uint64_t mf, const CylinderFn& g,
                                        std::uint64_t mg, const ModulusTower& tower) {
  return inner_product_impl(f, mf, g, mg, tower);
}

std::complex<double> haar_inner_product(std::span<const std::complex<double>> f,
                                        std::span<const std::complex<double>> g, const ModulusTower& tower) {
  return inner_product_impl([f](std::uint64_t r) { return f[r]; }, f.size(), [g](std::uint64_t r) { return g[r]; },
                            g.size(), tower);
}

}  // namespace solh
