#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eia/channels.hpp"

namespace eia {

// Nearest-point quantizer onto the complex grid gamma * (Z + jZ), with blocks
// discarded when any coefficient magnitude exceeds tau.
struct Quantizer {
  double gamma;
  double tau;

  Quantizer(double gamma_, double tau_) : gamma(gamma_), tau(tau_) {
    if (!(gamma > 0.0)) throw std::invalid_argument("quantizer: gamma must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("quantizer: tau must be > 0");
  }
};

struct GridPoint {
  std::int64_t re = 0;
  std::int64_t im = 0;

  std::complex<double> value(double gamma) const { return {double(re) * gamma, double(im) * gamma}; }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

// Ties round half away from zero on each axis, so Q(-h) = -Q(h) always.
inline GridPoint quantize(std::complex<double> h, double gamma) {
  return {std::llround(h.real() / gamma), std::llround(h.imag() / gamma)};
}

inline GridPoint quantize(std::complex<double> h, const Quantizer& qz) { return quantize(h, qz.gamma); }

struct QuantizedMatrix {
  std::uint32_t k = 0;
  std::vector<GridPoint> p;

  QuantizedMatrix() = default;
  explicit QuantizedMatrix(std::uint32_t dim) : k(dim), p(std::size_t(dim) * dim) {}

  const GridPoint& at(std::uint32_t i, std::uint32_t j) const { return p[std::size_t(i) * k + j]; }
  GridPoint& at(std::uint32_t i, std::uint32_t j) { return p[std::size_t(i) * k + j]; }

  std::string key() const {
    std::string s = "gq:" + std::to_string(k) + ":";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s.push_back(';');
      s += std::to_string(p[i].re) + "_" + std::to_string(p[i].im);
    }
    return s;
  }

  friend bool operator==(const QuantizedMatrix&, const QuantizedMatrix&) = default;
};

inline QuantizedMatrix quantize_matrix(const ComplexMatrix& m, const Quantizer& qz) {
  QuantizedMatrix out(m.k);
  for (std::size_t i = 0; i < m.v.size(); ++i) {
    out.p[i] = quantize(m.v[i], qz.gamma);
  }
  return out;
}

inline bool exceeds_truncation(const ComplexMatrix& m, double tau) {
  for (const auto& h : m.v) {
    if (std::abs(h) > tau) return true;
  }
  return false;
}

// Gaussian complement map: diagonal unchanged, off-diagonals negated. An
// involution, and probability-preserving under the symmetric fading law.
inline QuantizedMatrix gauss_complement(const QuantizedMatrix& m) {
  QuantizedMatrix out(m.k);
  for (std::uint32_t i = 0; i < m.k; ++i) {
    for (std::uint32_t j = 0; j < m.k; ++j) {
      const GridPoint& g = m.at(i, j);
      out.at(i, j) = (i == j) ? g : GridPoint{-g.re, -g.im};
    }
  }
  return out;
}

}  // namespace eia
