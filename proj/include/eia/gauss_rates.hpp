#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eia/monte_carlo.hpp"
#include "eia/rng.hpp"
#include "json.hpp"

namespace eia {

namespace stream_tag {
inline constexpr std::uint64_t kAchievable = 16;
inline constexpr std::uint64_t kOuterBound = 17;
}  // namespace stream_tag

// Ergodic per-user achievable rate (1/2) E[log2(1 + 2 |h|^2 snr)] with
// h ~ CN(0,1), estimated by Monte Carlo. All rates are in bits per use.
inline McEstimate gauss_achievable(double snr, std::int64_t samples, std::uint64_t seed, int threads = 1) {
  if (!(snr >= 0.0)) throw std::invalid_argument("gauss_achievable: snr must be >= 0");
  if (snr == 0.0) return {0.0, 0.0, samples};
  return mc_estimate(samples, seed, stream_tag::kAchievable, threads, [snr](Rng& rng) {
    const double h_sq = std::norm(rng.complex_normal());
    return 0.5 * std::log2(1.0 + 2.0 * h_sq * snr);
  });
}

struct OuterBoundEstimate {
  McEstimate total;  // bound on R_k + R_l
  McEstimate term_kl;
  McEstimate term_lk;
};

// Pairwise outer bound on R_k + R_l: the sum of the two genie expectations,
// with all four cross coefficients drawn jointly per sample.
inline OuterBoundEstimate gauss_outer_bound(std::span<const double> snr, std::size_t k, std::size_t l,
                                            std::int64_t samples, std::uint64_t seed, int threads = 1) {
  if (k == l || k >= snr.size() || l >= snr.size()) {
    throw std::invalid_argument("gauss_outer_bound: need a valid user pair");
  }
  const double sk = snr[k], sl = snr[l];
  if (!(sk >= 0.0) || !(sl >= 0.0)) throw std::invalid_argument("gauss_outer_bound: snr must be >= 0");

  auto est = mc_estimate_vec<3>(samples, seed, stream_tag::kOuterBound, threads, [sk, sl](Rng& rng) {
    const double h_kk = std::norm(rng.complex_normal());
    const double h_kl = std::norm(rng.complex_normal());
    const double h_lk = std::norm(rng.complex_normal());
    const double h_ll = std::norm(rng.complex_normal());
    const double t1 = std::log2(1.0 + h_kl * sl + h_kk * sk / (1.0 + h_lk * sk));
    const double t2 = std::log2(1.0 + h_lk * sk + h_ll * sl / (1.0 + h_kl * sl));
    return std::array<double, 3>{t1 + t2, t1, t2};
  });
  return {est[0], est[1], est[2]};
}

struct SweepRow {
  double snr_db;
  double achievable;
  double bound_half;
  double gap;
  double stderr_ach;
  double stderr_bound;
};

// Symmetric-SNR sweep: per-user achievable rate against half the pairwise
// outer bound (all pairs coincide under equal SNR).
inline std::vector<SweepRow> sweep_figure(std::span<const double> snr_db_grid, std::int64_t samples,
                                          std::uint64_t seed, int threads = 1) {
  if (snr_db_grid.empty()) throw std::invalid_argument("sweep_figure: empty SNR grid");
  std::vector<SweepRow> rows;
  rows.reserve(snr_db_grid.size());
  for (std::size_t i = 0; i < snr_db_grid.size(); ++i) {
    const double snr = std::pow(10.0, snr_db_grid[i] / 10.0);
    const std::uint64_t point_seed = splitmix64_mix(seed ^ (0x5157454550ULL + i));
    const McEstimate ach = gauss_achievable(snr, samples, point_seed, threads);
    const std::vector<double> s{snr, snr};
    const OuterBoundEstimate ob = gauss_outer_bound(s, 0, 1, samples, point_seed, threads);
    const double bound_half = 0.5 * ob.total.mean;
    rows.push_back({snr_db_grid[i], ach.mean, bound_half, bound_half - ach.mean, ach.stderr_of_mean,
                    0.5 * ob.total.stderr_of_mean});
  }
  return rows;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                            const nlohmann::json& config) {
  os << "# config " << config.dump() << "\n";
  os << "snr_db,achievable,bound_half,gap,stderr_ach,stderr_bound\n";
  for (const auto& r : rows) {
    os << format_double(r.snr_db) << "," << format_double(r.achievable) << ","
       << format_double(r.bound_half) << "," << format_double(r.gap) << ","
       << format_double(r.stderr_ach) << "," << format_double(r.stderr_bound) << "\n";
  }
}

inline nlohmann::json sweep_rows_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back(nlohmann::json{{"snr_db", r.snr_db},
                                 {"achievable", r.achievable},
                                 {"bound_half", r.bound_half},
                                 {"gap", r.gap},
                                 {"stderr_ach", r.stderr_ach},
                                 {"stderr_bound", r.stderr_bound}});
  }
  return arr;
}

}  // namespace eia
