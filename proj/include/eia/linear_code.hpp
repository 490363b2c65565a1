#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eia/field.hpp"
#include "eia/rng.hpp"

namespace eia {

// Linear block code over GF(q) given by a full-row-rank m x n generator,
// shared by every transmitter so that any GF(q)-combination of codewords is
// again a codeword of the same combination of messages.
class LinearCode {
 public:
  static LinearCode from_rows(std::uint32_t q, std::size_t m, std::size_t n,
                              std::vector<std::uint32_t> row_major) {
    LinearCode c(q, m, n, std::move(row_major));
    if (rank_of(c.g_, m, n, q) != m) {
      throw std::invalid_argument("LinearCode: generator must have full row rank");
    }
    return c;
  }

  // Uniform random generator entries, resampled until full row rank.
  static LinearCode random_full_rank(Rng& rng, std::uint32_t q, std::size_t m, std::size_t n) {
    if (m == 0 || n == 0 || m > n) throw std::invalid_argument("LinearCode: need 1 <= m <= n");
    std::vector<std::uint32_t> g(m * n);
    for (;;) {
      for (auto& x : g) x = static_cast<std::uint32_t>(rng.below(q));
      if (rank_of(g, m, n, q) == m) return LinearCode(q, m, n, g);
    }
  }

  // [I | P] with the given parity part (may be empty when m == n).
  static LinearCode systematic(std::uint32_t q, std::size_t m, std::size_t n,
                               const std::vector<std::uint32_t>& parity) {
    if (parity.size() != m * (n - m)) throw std::invalid_argument("LinearCode: parity size mismatch");
    std::vector<std::uint32_t> g(m * n, 0);
    for (std::size_t i = 0; i < m; ++i) {
      g[i * n + i] = 1;
      for (std::size_t j = 0; j < n - m; ++j) g[i * n + m + j] = parity[i * (n - m) + j];
    }
    return from_rows(q, m, n, std::move(g));
  }

  std::uint32_t modulus() const { return q_; }
  std::size_t message_length() const { return m_; }
  std::size_t block_length() const { return n_; }
  std::uint32_t generator_at(std::size_t i, std::size_t j) const { return g_[i * n_ + j]; }

  // Bits conveyed per code symbol.
  double rate_bits() const { return double(m_) / double(n_) * std::log2(double(q_)); }

  // x = w G over GF(q).
  std::vector<std::uint32_t> encode(std::span<const std::uint32_t> w) const {
    if (w.size() != m_) throw std::invalid_argument("encode: message length mismatch");
    std::vector<std::uint32_t> x(n_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::uint32_t wi = w[i];
      if (wi >= q_) throw std::invalid_argument("encode: symbol out of range");
      if (wi == 0) continue;
      const std::uint32_t* row = g_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) x[j] = gf_add(x[j], gf_mul(wi, row[j], q_), q_);
    }
    return x;
  }

  // Exhaustive maximum-likelihood decoding of the sent message under the
  // mixture noise law (zero w.p. 1-rho, else uniform nonzero): for
  // rho < (q-1)/q the likelihood decreases in Hamming distance, so the
  // nearest codeword wins. Candidates are scanned in lexicographic order and
  // only strict improvements are kept, so ties resolve to the smallest u.
  std::vector<std::uint32_t> decode_ml(std::span<const std::uint32_t> y) const {
    if (y.size() != n_) throw std::invalid_argument("decode_ml: received length mismatch");
    double cand = std::pow(double(q_), double(m_));
    if (cand > 8e6) {
      throw std::invalid_argument("decode_ml: q^m too large for exhaustive search");
    }

    std::vector<std::uint32_t> u(m_, 0), cw(n_, 0);
    std::vector<std::uint32_t> best = u;
    std::size_t best_d = distance(y, cw, n_ + 1);
    // Odometer over u with the last digit fastest (lexicographic order). A
    // digit wrapping q-1 -> 0 changes its contribution by -(q-1) = +1 row.
    for (;;) {
      std::size_t j = m_;
      while (j > 0) {
        --j;
        add_row(cw, j);
        if (u[j] + 1 < q_) {
          ++u[j];
          break;
        }
        u[j] = 0;
        if (j == 0) return best;
      }
      std::size_t d = distance(y, cw, best_d);
      if (d < best_d) {
        best_d = d;
        best = u;
      }
    }
  }

 private:
  LinearCode(std::uint32_t q, std::size_t m, std::size_t n, std::vector<std::uint32_t> g)
      : q_(q), m_(m), n_(n), g_(std::move(g)) {
    require_odd_prime(q);
    if (m == 0 || n == 0 || m > n) throw std::invalid_argument("LinearCode: need 1 <= m <= n");
    if (g_.size() != m * n) throw std::invalid_argument("LinearCode: generator size mismatch");
    for (auto x : g_) {
      if (x >= q) throw std::invalid_argument("LinearCode: generator entry out of range");
    }
  }

  void add_row(std::vector<std::uint32_t>& cw, std::size_t row) const {
    const std::uint32_t* r = g_.data() + row * n_;
    for (std::size_t j = 0; j < n_; ++j) cw[j] = gf_add(cw[j], r[j], q_);
  }

  static std::size_t distance(std::span<const std::uint32_t> y, const std::vector<std::uint32_t>& cw,
                              std::size_t bail) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < cw.size(); ++j) {
      d += (y[j] != cw[j]);
      if (d >= bail) return d;
    }
    return d;
  }

  static std::size_t rank_of(std::vector<std::uint32_t> a, std::size_t m, std::size_t n, std::uint32_t q) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
      std::size_t pivot = rank;
      while (pivot < m && a[pivot * n + col] == 0) ++pivot;
      if (pivot == m) continue;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[rank * n + j], a[pivot * n + j]);
      const std::uint32_t inv_p = gf_inv(a[rank * n + col], q);
      for (std::size_t i = rank + 1; i < m; ++i) {
        const std::uint32_t f = gf_mul(a[i * n + col], inv_p, q);
        if (f == 0) continue;
        for (std::size_t j = col; j < n; ++j) {
          a[i * n + j] = gf_sub(a[i * n + j], gf_mul(f, a[rank * n + j], q), q);
        }
      }
      ++rank;
    }
    return rank;
  }

  std::uint32_t q_;
  std::size_t m_;
  std::size_t n_;
  std::vector<std::uint32_t> g_;
};

// Recover the linear function u = sum_k h_k w_k from the received block.
// Wrapper that enforces the noise regime where minimum distance is ML.
inline std::vector<std::uint32_t> decode_function(const LinearCode& code, std::span<const std::uint32_t> y,
                                                  double rho) {
  const double limit = double(code.modulus() - 1) / double(code.modulus());
  if (!(rho >= 0.0 && rho < limit)) {
    throw std::invalid_argument("decode_function: need 0 <= rho < (q-1)/q");
  }
  return code.decode_ml(y);
}

}  // namespace eia
