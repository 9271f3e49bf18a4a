#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "solh/rational.hpp"

namespace solh {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussLegendre make(std::size_t n);
};

/// Averaging kernel applied over [0, T].
enum class MeanScheme {
  exact,   ///< symbolic, no quadrature
  window,  ///< (1/T) int_0^T
  cesaro,  ///< mean over s in [0, T/2] of window means on [s, s + T/2]
};

const char* scheme_name(MeanScheme s);

/// Composite Gauss-Legendre layout for weighted means over [0, T].
///
/// [0, floor(T)) is cut into unit blocks, each split into `panels_per_unit`
/// equal panels of `nodes_per_panel` nodes; the same in-block offsets repeat
/// in every block. The remainder [floor(T), T] gets its own panels. With
/// panels_per_unit = ceil(max_freq) there are at least nodes_per_panel nodes
/// per smallest period 1/max_freq.
class WindowQuadrature {
 public:
  WindowQuadrature(double horizon, double max_freq, MeanScheme scheme = MeanScheme::window,
                   std::size_t nodes_per_panel = 32);

  double horizon() const noexcept { return horizon_; }
  MeanScheme scheme() const noexcept { return scheme_; }
  std::size_t full_units() const noexcept { return full_units_; }
  std::size_t panels_per_unit() const noexcept { return panels_per_unit_; }
  std::size_t nodes_per_unit() const noexcept { return offsets_.size(); }
  std::size_t node_count() const noexcept {
    return (full_units_ - (split_unit_ ? 1 : 0)) * offsets_.size() + tail_x_.size();
  }
  /// Unit block replaced by explicit nodes (the Cesaro kink block), if any.
  std::optional<std::size_t> split_unit() const noexcept { return split_unit_; }

  /// In-block node offsets u_k in [0, 1) and their raw GL weights (sum 1).
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::vector<double>& offset_weights() const noexcept { return offset_weights_; }
  /// Absolute explicit nodes and raw weights: the remainder [floor(T), T]
  /// plus the split block, if any.
  const std::vector<double>& tail_nodes() const noexcept { return tail_x_; }
  const std::vector<double>& tail_weights() const noexcept { return tail_w_; }

  /// Averaging density at x: 1/T (window) or 4 min(x, T - x) / T^2 (cesaro).
  double kernel(double x) const noexcept;

  /// Weighted mean of f over all nodes, compensated and in fixed order.
  template <typename F>
  std::complex<double> mean(F&& f) const;

 private:
  double horizon_;
  MeanScheme scheme_;
  std::size_t full_units_;
  std::size_t panels_per_unit_;
  std::optional<std::size_t> split_unit_;
  std::vector<double> offsets_;
  std::vector<double> offset_weights_;
  std::vector<double> tail_x_;
  std::vector<double> tail_w_;
};

/// exp(2 pi i q x) at every quadrature node for a fixed set of rational
/// frequencies. Full-block nodes x = n + u_k are evaluated as
/// exp(2 pi i frac(q n)) * exp(2 pi i q u_k), with frac(q n) tracked exactly,
/// so no trigonometric call is made per node.
class NodePhases {
 public:
  NodePhases(const WindowQuadrature& quad, std::vector<Rational> freqs);

  std::size_t size() const noexcept { return freqs_.size(); }

  /// Calls fn(x, weight, phases) for every node, where weight includes the
  /// averaging kernel and phases[j] = exp(2 pi i q_j x).
  template <typename F>
  void for_each_node(F&& fn) const;

 private:
  struct Stepper {
    bool exact = false;        // integer residue tracking available
    std::int64_t num_mod = 0;  // num mod den
    std::int64_t den = 1;
  };

  const WindowQuadrature& quad_;
  std::vector<Rational> freqs_;
  std::vector<Stepper> steppers_;
  std::vector<std::vector<std::complex<double>>> offset_phase_;  // [term][k]
  std::vector<std::vector<std::complex<double>>> residue_phase_;  // [term][r], exact steppers only
};

}  // namespace solh

#include "solh/quadrature_impl.hpp"
