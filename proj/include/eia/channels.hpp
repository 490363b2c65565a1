#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "eia/field_matrix.hpp"
#include "eia/rng.hpp"
#include "json.hpp"

namespace eia {

// Additive noise for the finite-field channel: zero with probability 1 - rho,
// otherwise uniform on {1, ..., q-1}. q = 2 is allowed here (the degenerate
// binary noise model); the channel itself requires an odd prime.
struct FiniteFieldNoiseModel {
  std::uint32_t q;
  double rho;

  FiniteFieldNoiseModel(std::uint32_t q_, double rho_) : q(q_), rho(rho_) {
    if (q < 2) throw std::invalid_argument("noise model: q must be >= 2");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noise model: rho must lie in [0, 1]");
  }
};

// H(Z) = -(1-rho) log2(1-rho) - rho log2(rho/(q-1)), with 0 log 0 := 0.
inline double noise_entropy_bits(const FiniteFieldNoiseModel& m) {
  double h = 0.0;
  if (m.rho < 1.0) h -= (1.0 - m.rho) * std::log2(1.0 - m.rho);
  if (m.rho > 0.0) h -= m.rho * std::log2(m.rho / double(m.q - 1));
  return h;
}

struct GaussianChannelConfig {
  std::uint32_t num_users;
  std::vector<double> snr;  // linear per-user SNR

  GaussianChannelConfig(std::uint32_t k, std::vector<double> s) : num_users(k), snr(std::move(s)) {
    if (num_users < 2) throw std::invalid_argument("gaussian config: need K >= 2 users");
    if (snr.size() != num_users) throw std::invalid_argument("gaussian config: snr list must have K entries");
    for (double v : snr) {
      if (!(v >= 0.0)) throw std::invalid_argument("gaussian config: snr must be >= 0");
    }
  }
};

struct ComplexMatrix {
  std::uint32_t k = 0;
  std::vector<std::complex<double>> v;

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::uint32_t dim) : k(dim), v(std::size_t(dim) * dim) {}

  std::complex<double> at(std::uint32_t i, std::uint32_t j) const { return v[std::size_t(i) * k + j]; }
  std::complex<double>& at(std::uint32_t i, std::uint32_t j) { return v[std::size_t(i) * k + j]; }
};

struct ChannelState {
  std::int64_t t = 0;
  std::variant<FieldMatrix, ComplexMatrix> payload;

  bool is_finite_field() const { return std::holds_alternative<FieldMatrix>(payload); }
  const FieldMatrix& ff() const { return std::get<FieldMatrix>(payload); }
  const ComplexMatrix& gauss() const { return std::get<ComplexMatrix>(payload); }
};

// Entries i.i.d. uniform on F_q \ {0}, row-major draw order.
inline FieldMatrix sample_ff_matrix(Rng& rng, std::uint32_t q, std::uint32_t dim) {
  require_odd_prime(q);
  FieldMatrix m(dim, q);
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      m.set(i, j, 1 + static_cast<std::uint32_t>(rng.below(q - 1)));
    }
  }
  return m;
}

inline ChannelState sample_ff_state(Rng& rng, std::uint32_t q, std::uint32_t dim, std::int64_t t = 0) {
  return ChannelState{t, sample_ff_matrix(rng, q, dim)};
}

inline std::uint32_t sample_ff_noise(Rng& rng, const FiniteFieldNoiseModel& model) {
  if (model.rho <= 0.0) return 0;
  double u = rng.uniform01();
  if (u >= model.rho) return 0;
  return 1 + static_cast<std::uint32_t>(rng.below(model.q - 1));
}

// Entries i.i.d. CN(0, 1), row-major draw order.
inline ComplexMatrix sample_gauss_matrix(Rng& rng, std::uint32_t dim) {
  ComplexMatrix m(dim);
  for (auto& h : m.v) h = rng.complex_normal();
  return m;
}

inline ChannelState sample_gauss_state(Rng& rng, std::uint32_t dim, std::int64_t t = 0) {
  return ChannelState{t, sample_gauss_matrix(rng, dim)};
}

// Run configuration document shared by the CLI and the simulators:
// { model: "ff"|"gauss", q, rho, k, snr: [...], seed, n }.
struct ChannelRunConfig {
  std::string model = "ff";
  std::uint32_t q = 5;
  double rho = 0.0;
  std::uint32_t num_users = 3;
  std::vector<double> snr;
  std::uint64_t seed = 1;
  std::int64_t n = 10000;

  void validate() const {
    if (model != "ff" && model != "gauss") throw std::invalid_argument("config: model must be \"ff\" or \"gauss\"");
    if (model == "ff") require_odd_prime(q);
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("config: rho must lie in [0, 1]");
    if (num_users < 2) throw std::invalid_argument("config: need K >= 2 users");
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (model == "gauss" && !snr.empty() && snr.size() != num_users) {
      throw std::invalid_argument("config: snr list must have K entries");
    }
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"model", model}, {"q", q},       {"rho", rho}, {"k", num_users},
                          {"snr", snr},     {"seed", seed}, {"n", n}};
  }

  static ChannelRunConfig from_json(const nlohmann::json& j) {
    ChannelRunConfig c;
    if (j.contains("model")) c.model = j.at("model").get<std::string>();
    if (j.contains("q")) c.q = j.at("q").get<std::uint32_t>();
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
    if (j.contains("k")) c.num_users = j.at("k").get<std::uint32_t>();
    else if (j.contains("K")) c.num_users = j.at("K").get<std::uint32_t>();
    if (j.contains("snr")) c.snr = j.at("snr").get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n")) c.n = j.at("n").get<std::int64_t>();
    return c;
  }
};

}  // namespace eia
