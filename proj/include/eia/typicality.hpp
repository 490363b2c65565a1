#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace eia {

// Occurrence counts N(H | H^n) over a sequence of canonical state keys.
struct TypeCount {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  double frequency(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0 : double(it->second) / double(total);
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"n", total}, {"counts", nlohmann::json::object()}};
    for (const auto& [k, c] : counts) j["counts"][k] = c;
    return j;
  }
};

template <typename Iterator>
TypeCount count_types(Iterator first, Iterator last) {
  if (first == last) throw std::invalid_argument("count_types: empty sequence");
  TypeCount tc;
  for (auto it = first; it != last; ++it) {
    ++tc.counts[*it];
    ++tc.total;
  }
  return tc;
}

inline TypeCount count_types(const std::vector<std::string>& keys) {
  return count_types(keys.begin(), keys.end());
}

namespace detail {
inline void check_typicality_args(std::int64_t n, double delta) {
  if (n < 1) throw std::invalid_argument("typicality: counts must cover at least one state");
  if (delta < 0.0) throw std::invalid_argument("typicality: delta must be >= 0");
}
}  // namespace detail

// |N(H|H^n)/n - P(H)| <= delta for every state of the declared alphabet.
// Counted states missing from the law are treated as probability zero, per the
// same inequality.
inline bool is_delta_typical(const TypeCount& tc, const std::map<std::string, double>& law, double delta) {
  detail::check_typicality_args(tc.total, delta);
  double mass = 0.0;
  for (const auto& [key, p] : law) {
    if (p < 0.0) throw std::invalid_argument("typicality: law has a negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw std::invalid_argument("typicality: law must sum to 1 over the declared alphabet");
  }
  for (const auto& [key, p] : law) {
    if (std::abs(tc.frequency(key) - p) > delta) return false;
  }
  for (const auto& [key, c] : tc.counts) {
    if (!law.contains(key) && double(c) / double(tc.total) > delta) return false;
  }
  return true;
}

// Same check for a uniform law over an alphabet too large to enumerate:
// every uncounted state has frequency 0 and probability 1/|H|.
inline bool is_delta_typical_uniform(const TypeCount& tc, double alphabet_size, double delta) {
  detail::check_typicality_args(tc.total, delta);
  if (alphabet_size < 1.0) throw std::invalid_argument("typicality: alphabet size must be >= 1");
  const double p = 1.0 / alphabet_size;
  for (const auto& [key, c] : tc.counts) {
    if (std::abs(double(c) / double(tc.total) - p) > delta) return false;
  }
  if (double(tc.counts.size()) < alphabet_size && p > delta) return false;
  return true;
}

// P(A_delta^n) >= 1 - |H| / (4 n delta^2), clamped to [0, 1].
inline double typicality_probability_bound(std::int64_t n, double delta, double alphabet_size) {
  if (n < 1) throw std::invalid_argument("typicality_probability_bound: n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("typicality_probability_bound: delta must be > 0");
  double b = 1.0 - alphabet_size / (4.0 * double(n) * delta * delta);
  return b < 0.0 ? 0.0 : b;
}

}  // namespace eia
