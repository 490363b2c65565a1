#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eia/channels.hpp"
#include "eia/linear_code.hpp"
#include "eia/pairing.hpp"
#include "json.hpp"

namespace eia {

namespace stream_tag {
inline constexpr std::uint64_t kState = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kMessage = 3;
inline constexpr std::uint64_t kGenerator = 4;
}  // namespace stream_tag

// End-to-end finite-field alignment run. The fading is block-constant: each
// sampled channel matrix holds for block_len consecutive uses, one codeword
// symbol per use, so a matched pair of blocks carries one length-block_len
// computation-code block in each direction. msg_len is the number of message
// symbols per user per pair group.
struct ProtocolConfig {
  std::uint32_t q = 5;
  std::uint32_t num_users = 3;
  double rho = 0.0;
  std::int64_t n = 10000;      // total channel uses
  std::int64_t block_len = 1;  // n': codeword length = fading block length
  std::int64_t msg_len = 1;    // m: message symbols per pair group
  std::uint64_t seed = 1;
  PairingMode mode = PairingMode::CausalFifo;
  bool collect_trace = false;

  // m for a target code rate in bits per fresh channel use.
  static std::int64_t msg_len_for_rate(std::uint32_t q, std::int64_t block_len, double rate_bits) {
    auto m = std::int64_t(std::llround(rate_bits * double(block_len) / std::log2(double(q))));
    if (m < 1) m = 1;
    if (m > block_len) m = block_len;
    return m;
  }

  void validate() const {
    require_odd_prime(q);
    if (num_users < 2) throw std::invalid_argument("protocol: need K >= 2 users");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("protocol: rho must lie in [0, 1]");
    if (rho >= double(q - 1) / double(q)) {
      throw std::invalid_argument("protocol: rho must be below (q-1)/q for ML decoding");
    }
    if (block_len < 1) throw std::invalid_argument("protocol: block length n' must be >= 1");
    if (msg_len < 1 || msg_len > block_len) {
      throw std::invalid_argument("protocol: need 1 <= m <= n'");
    }
    if (n < 2 * block_len) {
      throw std::invalid_argument("protocol: n too small for the chosen m, n' (need n >= 2n')");
    }
    if (std::pow(double(q), double(msg_len)) > 8e6) {
      throw std::invalid_argument("protocol: q^m too large for the exhaustive ML decoder");
    }
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"model", "ff"},
                          {"q", q},
                          {"k", num_users},
                          {"rho", rho},
                          {"n", n},
                          {"nprime", block_len},
                          {"m", msg_len},
                          {"seed", seed},
                          {"mode", mode == PairingMode::CausalFifo ? "fifo" : "offline"}};
  }
};

struct ProtocolTraceRow {
  std::int64_t group;
  std::int64_t fresh_t;
  std::int64_t repeat_t;
  std::uint32_t user;
  bool u_ok;
  bool v_ok;
  bool w_ok;
};

struct ProtocolReport {
  nlohmann::json config;
  std::int64_t blocks = 0;
  std::int64_t matched_pairs = 0;
  double matched_fraction = 0.0;
  std::int64_t messages_per_user = 0;
  std::int64_t u_errors = 0;
  std::int64_t v_errors = 0;
  std::vector<std::int64_t> per_user_errors;
  std::vector<double> per_user_error_rate;
  double all_user_error_rate = 0.0;
  double code_rate_bits = 0.0;           // (m/n') log2 q, per fresh use
  double achieved_rate_per_user = 0.0;   // bits per channel use
  double symmetric_rate_limit = 0.0;     // (log2 q - H(Z)) / 2
  double peak_rate = 0.0;                // log2(q) / 2, all matched and uncoded
  double matching_loss_bits = 0.0;
  double coding_backoff_bits = 0.0;
  std::vector<ProtocolTraceRow> trace;

  nlohmann::json to_json() const {
    return nlohmann::json{{"config", config},
                          {"blocks", blocks},
                          {"matched_pairs", matched_pairs},
                          {"matched_fraction", matched_fraction},
                          {"messages_per_user", messages_per_user},
                          {"u_errors", u_errors},
                          {"v_errors", v_errors},
                          {"per_user_errors", per_user_errors},
                          {"per_user_error_rate", per_user_error_rate},
                          {"all_user_error_rate", all_user_error_rate},
                          {"code_rate_bits", code_rate_bits},
                          {"achieved_rate_per_user", achieved_rate_per_user},
                          {"symmetric_rate_limit", symmetric_rate_limit},
                          {"peak_rate", peak_rate},
                          {"matching_loss_bits", matching_loss_bits},
                          {"coding_backoff_bits", coding_backoff_bits}};
  }

  void write_trace_csv(std::ostream& os) const {
    os << "group,fresh_t,repeat_t,user,u_ok,v_ok,w_ok\n";
    for (const auto& r : trace) {
      os << r.group << "," << r.fresh_t << "," << r.repeat_t << "," << r.user << "," << r.u_ok << ","
         << r.v_ok << "," << r.w_ok << "\n";
    }
  }
};

inline ProtocolReport run_protocol(const ProtocolConfig& cfg) {
  cfg.validate();
  const std::uint32_t q = cfg.q;
  const std::uint32_t K = cfg.num_users;
  const std::size_t nprime = std::size_t(cfg.block_len);
  const std::size_t m = std::size_t(cfg.msg_len);
  const std::int64_t blocks = cfg.n / cfg.block_len;

  Rng root(cfg.seed);
  Rng state_rng = root.substream(stream_tag::kState);

  std::vector<ChannelState> states;
  states.reserve(std::size_t(blocks));
  for (std::int64_t t = 0; t < blocks; ++t) {
    states.push_back(sample_ff_state(state_rng, q, K, t));
  }

  PairingPlan plan = build_pairing(states, cfg.mode);

  const FiniteFieldNoiseModel noise_model(q, cfg.rho);

  ProtocolReport rep;
  rep.config = cfg.to_json();
  rep.blocks = blocks;
  rep.matched_pairs = plan.matched_pairs;
  rep.matched_fraction = plan.matched_fraction();
  rep.messages_per_user = plan.matched_pairs;
  rep.per_user_errors.assign(K, 0);

  Rng gen_root = root.substream(stream_tag::kGenerator);
  Rng msg_root = root.substream(stream_tag::kMessage);
  Rng noise_root = root.substream(stream_tag::kNoise);

  std::int64_t groups_with_error = 0;
  std::int64_t group_index = 0;

  std::vector<std::vector<std::uint32_t>> w(K), x(K);
  std::vector<std::uint32_t> y(nprime), u_true(m), v_true(m), sum(m);

  for (std::int64_t t = 0; t < blocks; ++t) {
    if (plan.slots[std::size_t(t)].role != SlotRole::Fresh) continue;
    const std::int64_t pt = plan.slots[std::size_t(t)].partner;
    const FieldMatrix& hf = states[std::size_t(t)].ff();
    const FieldMatrix& hr = states[std::size_t(pt)].ff();

    Rng gen_rng = gen_root.substream(std::uint64_t(group_index));
    const LinearCode code = LinearCode::random_full_rank(gen_rng, q, m, nprime);

    for (std::uint32_t k = 0; k < K; ++k) {
      Rng msg_rng = msg_root.substream(k).substream(std::uint64_t(group_index));
      w[k].resize(m);
      for (auto& s : w[k]) s = std::uint32_t(msg_rng.below(q));
      x[k] = code.encode(w[k]);
    }

    bool group_error = false;
    for (std::uint32_t k = 0; k < K; ++k) {
      Rng noise_rng = noise_root.substream(k).substream(std::uint64_t(group_index));

      auto received = [&](const FieldMatrix& h) {
        for (std::size_t j = 0; j < nprime; ++j) {
          std::uint64_t acc = sample_ff_noise(noise_rng, noise_model);
          for (std::uint32_t l = 0; l < K; ++l) {
            acc += std::uint64_t(h.at(k, l)) * x[l][j];
          }
          y[j] = std::uint32_t(acc % q);
        }
      };
      auto function_of = [&](const FieldMatrix& h, std::vector<std::uint32_t>& out) {
        for (std::size_t i = 0; i < m; ++i) {
          std::uint64_t acc = 0;
          for (std::uint32_t l = 0; l < K; ++l) acc += std::uint64_t(h.at(k, l)) * w[l][i];
          out[i] = std::uint32_t(acc % q);
        }
      };

      received(hf);
      const std::vector<std::uint32_t> u_hat = code.decode_ml(y);
      function_of(hf, u_true);

      received(hr);
      const std::vector<std::uint32_t> v_hat = code.decode_ml(y);
      function_of(hr, v_true);

      // w_k = (h_kk + sigma(h_kk))^{-1} (u + v); the pairing guarantees the
      // sum of the two diagonal coefficients is 1 or 2.
      const std::uint32_t c = gf_add(hf.at(k, k), hr.at(k, k), q);
      const std::uint32_t c_inv = gf_inv(c, q);
      for (std::size_t i = 0; i < m; ++i) {
        sum[i] = gf_mul(c_inv, gf_add(u_hat[i], v_hat[i], q), q);
      }

      const bool u_ok = (u_hat == u_true);
      const bool v_ok = (v_hat == v_true);
      const bool w_ok = (sum == w[k]);
      rep.u_errors += !u_ok;
      rep.v_errors += !v_ok;
      if (!w_ok) {
        ++rep.per_user_errors[k];
        group_error = true;
      }
      if (cfg.collect_trace) {
        rep.trace.push_back({group_index, t, pt, k, u_ok, v_ok, w_ok});
      }
    }
    groups_with_error += group_error;
    ++group_index;
  }

  const double log2q = std::log2(double(q));
  rep.per_user_error_rate.assign(K, 0.0);
  if (rep.messages_per_user > 0) {
    for (std::uint32_t k = 0; k < K; ++k) {
      rep.per_user_error_rate[k] = double(rep.per_user_errors[k]) / double(rep.messages_per_user);
    }
    rep.all_user_error_rate = double(groups_with_error) / double(rep.messages_per_user);
  }
  rep.code_rate_bits = double(m) / double(nprime) * log2q;
  rep.achieved_rate_per_user = double(rep.matched_pairs) * double(m) * log2q / double(cfg.n);
  rep.symmetric_rate_limit = 0.5 * (log2q - noise_entropy_bits(noise_model));
  rep.peak_rate = 0.5 * log2q;
  const double used_fraction = double(2 * rep.matched_pairs * cfg.block_len) / double(cfg.n);
  rep.matching_loss_bits = rep.peak_rate * (1.0 - used_fraction);
  rep.coding_backoff_bits = rep.peak_rate * used_fraction - rep.achieved_rate_per_user;
  return rep;
}

}  // namespace eia
