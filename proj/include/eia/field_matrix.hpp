#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eia/field.hpp"
#include "json.hpp"

namespace eia {

// Dense K x K matrix over GF(q). Channel-valid matrices have every entry in
// F_q \ {0}.
class FieldMatrix {
 public:
  FieldMatrix(std::uint32_t dim, std::uint32_t q) : q_(q), k_(dim), v_(std::size_t(dim) * dim, 0) {
    require_odd_prime(q);
    if (dim < 1) throw std::invalid_argument("FieldMatrix: dimension must be >= 1");
  }

  static FieldMatrix from_rows(const std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t q) {
    if (rows.empty()) throw std::invalid_argument("FieldMatrix: empty rows");
    FieldMatrix m(static_cast<std::uint32_t>(rows.size()), q);
    for (std::uint32_t i = 0; i < m.k_; ++i) {
      if (rows[i].size() != m.k_) throw std::invalid_argument("FieldMatrix: ragged rows");
      for (std::uint32_t j = 0; j < m.k_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::uint32_t dim() const { return k_; }
  std::uint32_t modulus() const { return q_; }

  std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return v_[std::size_t(i) * k_ + j]; }

  void set(std::uint32_t i, std::uint32_t j, std::uint32_t value) {
    if (value >= q_) throw std::invalid_argument("FieldMatrix: entry must lie in [0, q)");
    v_[std::size_t(i) * k_ + j] = value;
  }

  bool channel_valid() const {
    for (auto x : v_) {
      if (x == 0) return false;
    }
    return true;
  }

  // Canonical serialization used as a type-count / pairing key. Contains no
  // commas so it can sit in a CSV column unquoted.
  std::string key() const {
    std::string s = "ff:" + std::to_string(q_) + ":" + std::to_string(k_) + ":";
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i) s.push_back('_');
      s += std::to_string(v_[i]);
    }
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint32_t i = 0; i < k_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::uint32_t j = 0; j < k_; ++j) row.push_back(at(i, j));
      rows.push_back(row);
    }
    return nlohmann::json{{"modulus", q_}, {"entries", rows}};
  }

  static FieldMatrix from_json(const nlohmann::json& j) {
    std::uint32_t q = j.at("modulus").get<std::uint32_t>();
    auto rows = j.at("entries").get<std::vector<std::vector<std::uint32_t>>>();
    return from_rows(rows, q);
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::uint32_t q_;
  std::uint32_t k_;
  std::vector<std::uint32_t> v_;
};

inline FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.modulus() != b.modulus() || a.dim() != b.dim()) {
    throw std::invalid_argument("FieldMatrix add: shape or modulus mismatch");
  }
  FieldMatrix out(a.dim(), a.modulus());
  for (std::uint32_t i = 0; i < a.dim(); ++i) {
    for (std::uint32_t j = 0; j < a.dim(); ++j) {
      out.set(i, j, gf_add(a.at(i, j), b.at(i, j), a.modulus()));
    }
  }
  return out;
}

// Complement map g: diagonal entries pass through the alphabet-preserving
// pairing sigma, off-diagonals become additive inverses. H + g(H) then has
// zero off-diagonals and diagonal entries in {1, 2}, and g(g(H)) = H.
inline FieldMatrix complement_matrix(const FieldMatrix& h) {
  if (!h.channel_valid()) {
    throw std::invalid_argument("complement_matrix: all entries must be nonzero");
  }
  const std::uint32_t q = h.modulus();
  FieldMatrix out(h.dim(), q);
  for (std::uint32_t i = 0; i < h.dim(); ++i) {
    for (std::uint32_t j = 0; j < h.dim(); ++j) {
      out.set(i, j, i == j ? gf_diagonal_pair(h.at(i, j), q) : gf_neg(h.at(i, j), q));
    }
  }
  return out;
}

}  // namespace eia
