#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eia/channels.hpp"

namespace eia {

// Finite-field ergodic capacity region: the rate tuples with
// R_k + R_l <= C = log2(q) - H(Z) for every pair k != l.
struct RateRegion {
  std::uint32_t num_users;
  double cap_bits;

  RateRegion(std::uint32_t k, double cap) : num_users(k), cap_bits(cap) {
    if (k < 2) throw std::invalid_argument("rate region: need K >= 2 users");
    if (!(cap >= 0.0)) throw std::invalid_argument("rate region: capacity must be >= 0");
  }

  static RateRegion finite_field(std::uint32_t k, const FiniteFieldNoiseModel& noise) {
    require_odd_prime(noise.q);
    return RateRegion(k, std::log2(double(noise.q)) - noise_entropy_bits(noise));
  }
};

namespace detail {
inline void check_rates(const RateRegion& region, std::span<const double> rates) {
  if (rates.size() != region.num_users) throw std::invalid_argument("rates: need one rate per user");
  for (double r : rates) {
    if (!(r >= 0.0)) throw std::invalid_argument("rates: must be nonnegative");
  }
}
}  // namespace detail

inline bool region_contains(const RateRegion& region, std::span<const double> rates) {
  detail::check_rates(region, rates);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    for (std::size_t l = k + 1; l < rates.size(); ++l) {
      if (rates[k] + rates[l] > region.cap_bits) return false;
    }
  }
  return true;
}

// Equivalent description for rates sorted in descending order:
// R_1 <= C and R_k <= beta C for k >= 2, beta = min(1 - R_1/C, 1/2).
inline bool equivalent_form(const RateRegion& region, std::span<const double> rates_desc) {
  detail::check_rates(region, rates_desc);
  for (std::size_t i = 1; i < rates_desc.size(); ++i) {
    if (rates_desc[i] > rates_desc[i - 1]) {
      throw std::invalid_argument("equivalent_form: rates must be sorted in descending order");
    }
  }
  const double c = region.cap_bits;
  const double r1 = rates_desc[0];
  if (r1 > c) return false;
  const double beta = std::min(1.0 - r1 / c, 0.5);
  for (std::size_t i = 1; i < rates_desc.size(); ++i) {
    if (rates_desc[i] > beta * c) return false;
  }
  return true;
}

// Time-sharing weight: alpha of the uses run the symmetric scheme, the rest a
// single-user code, so that user 1 attains r1. alpha = 2 (1 - r1 / C).
inline double timeshare_split(const RateRegion& region, double r1) {
  const double c = region.cap_bits;
  if (!(r1 >= c / 2.0 && r1 <= c)) {
    throw std::invalid_argument("timeshare_split: need C/2 <= R1 <= C");
  }
  return 2.0 * (1.0 - r1 / c);
}

// Pairs (0-based) whose sum exceeds the cap, and pairs on the boundary.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> violating_pairs(const RateRegion& region,
                                                                            std::span<const double> rates) {
  detail::check_rates(region, rates);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t k = 0; k < rates.size(); ++k) {
    for (std::uint32_t l = k + 1; l < rates.size(); ++l) {
      if (rates[k] + rates[l] > region.cap_bits) out.emplace_back(k, l);
    }
  }
  return out;
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> tight_pairs(const RateRegion& region,
                                                                        std::span<const double> rates,
                                                                        double tol = 1e-12) {
  detail::check_rates(region, rates);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t k = 0; k < rates.size(); ++k) {
    for (std::uint32_t l = k + 1; l < rates.size(); ++l) {
      if (std::abs(rates[k] + rates[l] - region.cap_bits) <= tol) out.emplace_back(k, l);
    }
  }
  return out;
}

}  // namespace eia
