#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eia {

inline bool is_odd_prime(std::uint32_t q) {
  if (q < 3 || q % 2 == 0) return false;
  for (std::uint32_t d = 3; d * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

inline void require_odd_prime(std::uint32_t q) {
  if (!is_odd_prime(q)) {
    throw std::invalid_argument("q must be an odd prime >= 3, got " + std::to_string(q));
  }
}

// Unchecked mod-q helpers for hot loops. Arguments must already be reduced.
inline std::uint32_t gf_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  std::uint32_t s = a + b;
  return s >= q ? s - q : s;
}

inline std::uint32_t gf_neg(std::uint32_t a, std::uint32_t q) {
  return a == 0 ? 0 : q - a;
}

inline std::uint32_t gf_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return gf_add(a, gf_neg(b, q), q);
}

inline std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q);
}

inline std::uint32_t gf_inv(std::uint32_t a, std::uint32_t q) {
  if (a == 0) throw std::domain_error("gf_inv: zero has no multiplicative inverse");
  // extended Euclid; q prime so gcd(a, q) = 1
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q, new_r = a;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    t -= quot * new_t;
    std::swap(t, new_t);
    r -= quot * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += q;
  return static_cast<std::uint32_t>(t);
}

// Alphabet-preserving diagonal pairing: sigma(a) = 1 - a for a != 1, sigma(1) = 1.
// A permutation of F_q \ {0}; a + sigma(a) is 1 (a != 1) or 2 (a == 1), never 0
// for odd prime q.
inline std::uint32_t gf_diagonal_pair(std::uint32_t a, std::uint32_t q) {
  if (a == 0) throw std::domain_error("diagonal_pair: argument must be nonzero");
  return a == 1 ? 1 : gf_sub(1, a, q);
}

struct FieldElement {
  std::uint32_t value = 0;
  std::uint32_t modulus = 3;

  FieldElement() = default;
  FieldElement(std::uint32_t v, std::uint32_t q) : value(v), modulus(q) {
    require_odd_prime(q);
    if (v >= q) throw std::invalid_argument("FieldElement: value must lie in [0, q)");
  }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline void require_same_modulus(const FieldElement& a, const FieldElement& b) {
  if (a.modulus != b.modulus) {
    throw std::invalid_argument("field elements have mismatched moduli: " +
                                std::to_string(a.modulus) + " vs " + std::to_string(b.modulus));
  }
}

inline FieldElement add(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return {gf_add(a.value, b.value, a.modulus), a.modulus};
}

inline FieldElement neg(const FieldElement& a) {
  return {gf_neg(a.value, a.modulus), a.modulus};
}

inline FieldElement sub(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return {gf_sub(a.value, b.value, a.modulus), a.modulus};
}

inline FieldElement mul(const FieldElement& a, const FieldElement& b) {
  require_same_modulus(a, b);
  return {gf_mul(a.value, b.value, a.modulus), a.modulus};
}

inline FieldElement inv(const FieldElement& a) {
  return {gf_inv(a.value, a.modulus), a.modulus};
}

inline FieldElement diagonal_pair(const FieldElement& a) {
  return {gf_diagonal_pair(a.value, a.modulus), a.modulus};
}

}  // namespace eia
