#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "solh/rational.hpp"

namespace solh {

/// Depth used when no tower is configured explicitly; lcm(1..16) = 720720.
inline constexpr std::size_t kDefaultTowerDepth = 16;

/// Smallest k with m | lcm(1..k): the largest prime power exactly dividing m.
std::size_t lcm_depth_for(const BigInt& m);

/// Divisibility chain M_1 | M_2 | ... | M_K indexing a truncation of
/// Zhat = lim Z/nZ. Levels may repeat (lcm(1..5) = lcm(1..6)), so that depth
/// k of an lcm tower always means lcm(1..k).
class ModulusTower {
 public:
  /// M_k = lcm(1..k), k = 1..depth.
  static ModulusTower lcm_tower(std::size_t depth = kDefaultTowerDepth);

  /// Custom chain; throws DomainError unless M_1 >= 1 and M_k | M_{k+1}.
  explicit ModulusTower(std::vector<BigInt> levels);

  std::size_t depth() const noexcept { return levels_.size(); }
  /// 1-based, matching the usual M_k notation.
  const BigInt& level(std::size_t k) const { return levels_.at(k - 1); }
  const std::vector<BigInt>& levels() const noexcept { return levels_; }
  const BigInt& top() const { return levels_.back(); }
  bool is_lcm_family() const noexcept { return lcm_family_; }

  /// Smallest depth k with m | M_k, if any.
  std::optional<std::size_t> resolving_depth(const BigInt& m) const;

  friend bool operator==(const ModulusTower& a, const ModulusTower& b) {
    return a.levels_ == b.levels_;
  }

 private:
  ModulusTower(std::vector<BigInt> levels, bool lcm_family);

  std::vector<BigInt> levels_;
  bool lcm_family_ = false;
};

/// Truncated element of Zhat: a coherent residue tower r_k = t mod M_k.
///
/// Elements built by embed_int also remember the integer they came from, so
/// any modulus can be resolved for them regardless of tower depth. Equality
/// is agreement at every level both operands resolve, not equality in Zhat.
class ProfiniteInt {
 public:
  /// Throws DomainError if a residue is out of range or the residues are not
  /// coherent (r_j = r_k mod M_j for j <= k).
  ProfiniteInt(ModulusTower tower, std::vector<BigInt> residues);

  const ModulusTower& tower() const noexcept { return tower_; }
  const std::vector<BigInt>& residues() const noexcept { return residues_; }
  const std::optional<BigInt>& embedded_value() const noexcept { return exact_; }

  friend ProfiniteInt embed_int(const BigInt& n, const ModulusTower& tower);
  friend bool operator==(const ProfiniteInt& s, const ProfiniteInt& t);

 private:
  ProfiniteInt(ModulusTower tower, std::vector<BigInt> residues, std::optional<BigInt> exact);

  ModulusTower tower_;
  std::vector<BigInt> residues_;
  std::optional<BigInt> exact_;

  friend ProfiniteInt pf_add(const ProfiniteInt&, const ProfiniteInt&);
  friend ProfiniteInt pf_neg(const ProfiniteInt&);
};

ProfiniteInt embed_int(const BigInt& n, const ModulusTower& tower);
inline ProfiniteInt embed_int(std::int64_t n, const ModulusTower& tower) {
  return embed_int(BigInt(n), tower);
}

/// Levelwise sum. Operands on different towers are carried to the longest
/// chain of levels both resolve; DomainError if that chain is trivial while
/// the inputs are not.
ProfiniteInt pf_add(const ProfiniteInt& s, const ProfiniteInt& t);
ProfiniteInt pf_neg(const ProfiniteInt& t);
ProfiniteInt pf_sub(const ProfiniteInt& s, const ProfiniteInt& t);

/// t mod m in [0, m). Throws PrecisionError when m divides no tower level
/// (embedded integers resolve every m).
BigInt residue(const ProfiniteInt& t, const BigInt& m);

/// Integer approximant t_k in [0, M_k) with t_k = t mod M_k (depth is 1-based).
BigInt approx_sequence(const ProfiniteInt& t, std::size_t depth);

/// Haar-uniform draw truncated to the tower.
ProfiniteInt sample_uniform(const ModulusTower& tower, std::mt19937_64& rng);

/// Throws PrecisionError unless the tower resolves m.
void require_resolvable(const ModulusTower& tower, const BigInt& m);

using CylinderFn = std::function<std::complex<double>(std::uint64_t)>;

/// Normalized Haar integral over Zhat of a function that depends only on
/// t mod m: (1/m) sum_{r<m} f(r), compensated summation.
std::complex<double> haar_average(const CylinderFn& f, std::uint64_t m, const ModulusTower& tower);

/// Integral of f(t mod mf) * conj(g(t mod mg)) over Zhat. Residues mod
/// lcm(mf, mg) are enumerated through their CRT fibres over gcd(mf, mg), so
/// the cost is O(mf + mg) rather than O(lcm).
std::complex<double> haar_inner_product(const CylinderFn& f, std::uint64_t mf, const CylinderFn& g,
                                        std::uint64_t mg, const ModulusTower& tower);
/// Same with f and g given as one period each (moduli f.size(), g.size()).
std::complex<double> haar_inner_product(std::span<const std::complex<double>> f,
                                        std::span<const std::complex<double>> g, const ModulusTower& tower);

}  // namespace solh
