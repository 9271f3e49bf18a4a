#pragma once

// Template bodies for quadrature.hpp.

#include <cmath>

#include "solh/characters.hpp"
#include "solh/errors.hpp"
#include "solh/summation.hpp"

namespace solh {

template <typename F>
std::complex<double> WindowQuadrature::mean(F&& f) const {
  ComplexCompensatedSum total;
  const std::size_t per_unit = offsets_.size();
  for (std::size_t n = 0; n < full_units_; ++n) {
    if (n == split_unit_) continue;
    ComplexCompensatedSum block;
    const double base = static_cast<double>(n);
    for (std::size_t k = 0; k < per_unit; ++k) {
      const double x = base + offsets_[k];
      const std::complex<double> v = f(x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericError("non-finite sample at x = " + std::to_string(x));
      }
      block.add(v * (offset_weights_[k] * kernel(x)));
    }
    total.add(block);
  }
  for (std::size_t k = 0; k < tail_x_.size(); ++k) {
    const std::complex<double> v = f(tail_x_[k]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("non-finite sample at x = " + std::to_string(tail_x_[k]));
    }
    total.add(v * (tail_w_[k] * kernel(tail_x_[k])));
  }
  return total.value();
}

template <typename F>
void NodePhases::for_each_node(F&& fn) const {
  const std::size_t terms = freqs_.size();
  const std::size_t per_unit = quad_.offsets().size();
  std::vector<std::complex<double>> phases(terms);
  std::vector<std::int64_t> residue(terms, 0);
  std::vector<std::complex<double>> block_phase(terms);

  for (std::size_t n = 0; n < quad_.full_units(); ++n) {
    const double base = static_cast<double>(n);
    const bool skip = n == quad_.split_unit();
    for (std::size_t j = 0; j < terms && !skip; ++j) {
      if (steppers_[j].exact) {
        block_phase[j] = residue_phase_[j][static_cast<std::size_t>(residue[j])];
      } else {
        block_phase[j] = exp_2pi_i(freqs_[j], base);
      }
    }
    for (std::size_t k = 0; k < per_unit && !skip; ++k) {
      const double x = base + quad_.offsets()[k];
      for (std::size_t j = 0; j < terms; ++j) phases[j] = block_phase[j] * offset_phase_[j][k];
      fn(x, quad_.offset_weights()[k] * quad_.kernel(x), std::span<const std::complex<double>>(phases));
    }
    for (std::size_t j = 0; j < terms; ++j) {
      if (!steppers_[j].exact) continue;
      residue[j] += steppers_[j].num_mod;
      if (residue[j] >= steppers_[j].den) residue[j] -= steppers_[j].den;
    }
  }
  for (std::size_t k = 0; k < quad_.tail_nodes().size(); ++k) {
    const double x = quad_.tail_nodes()[k];
    for (std::size_t j = 0; j < terms; ++j) phases[j] = exp_2pi_i(freqs_[j], x);
    fn(x, quad_.tail_weights()[k] * quad_.kernel(x), std::span<const std::complex<double>>(phases));
  }
}

}  // namespace solh
