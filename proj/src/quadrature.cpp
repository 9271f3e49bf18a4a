#include "solh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "solh/errors.hpp"

namespace solh {

namespace {

// Residue tables are built for denominators up to this size; larger ones
// fall back to direct evaluation per block.
constexpr std::int64_t kMaxResidueTable = std::int64_t{1} << 20;

}  // namespace

GaussLegendre GaussLegendre::make(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const char* scheme_name(MeanScheme s) {
  switch (s) {
    case MeanScheme::exact:
      return "exact";
    case MeanScheme::window:
      return "window";
    case MeanScheme::cesaro:
      return "cesaro";
  }
  return "?";
}

WindowQuadrature::WindowQuadrature(double horizon, double max_freq, MeanScheme scheme, std::size_t nodes_per_panel)
    : horizon_(horizon), scheme_(scheme) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("mean horizon T must be positive and finite");
  if (!(max_freq >= 0.0) || !std::isfinite(max_freq)) throw DomainError("max frequency must be finite");
  if (scheme == MeanScheme::exact) throw DomainError("the exact scheme has no quadrature");

  static std::mutex cache_mutex;
  static std::map<std::size_t, GaussLegendre> cache;
  GaussLegendre rule;
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(nodes_per_panel);
    if (it == cache.end()) it = cache.emplace(nodes_per_panel, GaussLegendre::make(nodes_per_panel)).first;
    rule = it->second;
  }

  panels_per_unit_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(max_freq)));
  full_units_ = static_cast<std::size_t>(std::floor(horizon));

  const double h = 1.0 / static_cast<double>(panels_per_unit_);
  offsets_.reserve(panels_per_unit_ * nodes_per_panel);
  offset_weights_.reserve(panels_per_unit_ * nodes_per_panel);
  for (std::size_t p = 0; p < panels_per_unit_; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t k = 0; k < nodes_per_panel; ++k) {
      offsets_.push_back(mid + 0.5 * h * rule.nodes[k]);
      offset_weights_.push_back(0.5 * h * rule.weights[k]);
    }
  }

  // Explicit segments: the remainder [floor(T), T] and, for the Cesaro kernel,
  // the unit block holding its kink at T/2, which is split there.
  std::vector<std::pair<double, double>> segments;
  const double half = 0.5 * horizon;
  if (scheme == MeanScheme::cesaro && half != std::floor(half) && half < static_cast<double>(full_units_)) {
    const auto unit = static_cast<std::size_t>(std::floor(half));
    split_unit_ = unit;
    segments.emplace_back(static_cast<double>(unit), half);
    segments.emplace_back(half, static_cast<double>(unit + 1));
  }
  const double start = static_cast<double>(full_units_);
  if (horizon > start) {
    if (scheme == MeanScheme::cesaro && half > start) {
      segments.emplace_back(start, half);
      segments.emplace_back(half, horizon);
    } else {
      segments.emplace_back(start, horizon);
    }
  }
  for (const auto& [a, b] : segments) {
    const double len = b - a;
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len * static_cast<double>(panels_per_unit_))));
    const double hr = len / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * hr;
      for (std::size_t k = 0; k < nodes_per_panel; ++k) {
        tail_x_.push_back(mid + 0.5 * hr * rule.nodes[k]);
        tail_w_.push_back(0.5 * hr * rule.weights[k]);
      }
    }
  }
}

double WindowQuadrature::kernel(double x) const noexcept {
  if (scheme_ == MeanScheme::cesaro) return 4.0 * std::min(x, horizon_ - x) / (horizon_ * horizon_);
  return 1.0 / horizon_;
}

NodePhases::NodePhases(const WindowQuadrature& quad, std::vector<Rational> freqs)
    : quad_(quad), freqs_(std::move(freqs)) {
  steppers_.resize(freqs_.size());
  offset_phase_.resize(freqs_.size());
  residue_phase_.resize(freqs_.size());
  for (std::size_t j = 0; j < freqs_.size(); ++j) {
    const Rational& q = freqs_[j];
    auto& step = steppers_[j];
    if (q.den() <= kMaxResidueTable && fits_int64(q.num())) {
      step.exact = true;
      step.den = q.den().convert_to<std::int64_t>();
      step.num_mod = floor_mod(q.num(), q.den()).convert_to<std::int64_t>();
      auto& table = residue_phase_[j];
      table.resize(static_cast<std::size_t>(step.den));
      for (std::int64_t r = 0; r < step.den; ++r) {
        table[static_cast<std::size_t>(r)] = unit_phase(static_cast<double>(r) / static_cast<double>(step.den));
      }
    }
    const double qd = q.to_double();
    auto& off = offset_phase_[j];
    off.reserve(quad.offsets().size());
    for (double u : quad.offsets()) off.push_back(unit_phase(qd * u));
  }
}

}  // namespace solh
