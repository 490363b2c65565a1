#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eia/channels.hpp"
#include "eia/quantizer.hpp"
#include "json.hpp"

namespace eia {

enum class SlotRole { Fresh, Repeat, Unmatched, Discarded };

inline const char* to_string(SlotRole r) {
  switch (r) {
    case SlotRole::Fresh: return "fresh";
    case SlotRole::Repeat: return "repeat";
    case SlotRole::Unmatched: return "unmatched";
    case SlotRole::Discarded: return "discarded";
  }
  return "?";
}

enum class PairingMode {
  CausalFifo,    // online greedy matching, realizable with per-step CSI
  OfflineSplit,  // first-half / second-half split over the whole sequence
};

struct PairingPlan {
  struct Slot {
    std::string key;
    std::int64_t partner = -1;
    SlotRole role = SlotRole::Unmatched;
  };

  std::vector<Slot> slots;
  std::int64_t matched_pairs = 0;
  std::int64_t discarded = 0;

  double matched_fraction() const {
    return slots.empty() ? 0.0 : double(2 * matched_pairs) / double(slots.size());
  }
  double discarded_fraction() const {
    return slots.empty() ? 0.0 : double(discarded) / double(slots.size());
  }

  nlohmann::json summary_json() const {
    return nlohmann::json{{"slots", slots.size()},
                          {"matched_pairs", matched_pairs},
                          {"matched_fraction", matched_fraction()},
                          {"discarded_fraction", discarded_fraction()}};
  }

  void write_csv(std::ostream& os) const {
    os << "t,state_key,partner,role\n";
    for (std::size_t t = 0; t < slots.size(); ++t) {
      const Slot& s = slots[t];
      os << t << "," << s.key << ",";
      if (s.partner >= 0) os << s.partner;
      os << "," << to_string(s.role) << "\n";
    }
  }
};

namespace detail {

struct KeyedSlot {
  std::string key;
  std::string complement_key;
  bool discarded = false;
};

inline std::vector<KeyedSlot> key_states(std::span<const ChannelState> states,
                                         const std::optional<Quantizer>& qz) {
  if (states.empty()) throw std::invalid_argument("build_pairing: empty state sequence");
  std::vector<KeyedSlot> out(states.size());
  const bool ff = states.front().is_finite_field();
  for (std::size_t t = 0; t < states.size(); ++t) {
    if (states[t].is_finite_field() != ff) {
      throw std::invalid_argument("build_pairing: mixed state models");
    }
    if (ff) {
      const FieldMatrix& m = states[t].ff();
      out[t].key = m.key();
      out[t].complement_key = complement_matrix(m).key();  // throws on zero entries
    } else {
      if (!qz) throw std::invalid_argument("build_pairing: gaussian states need a quantizer");
      const ComplexMatrix& m = states[t].gauss();
      if (exceeds_truncation(m, qz->tau)) {
        out[t].discarded = true;
        continue;
      }
      QuantizedMatrix qm = quantize_matrix(m, *qz);
      out[t].key = qm.key();
      out[t].complement_key = gauss_complement(qm).key();
    }
  }
  return out;
}

}  // namespace detail

// Greedy causal matching: one FIFO queue of waiting slots per state key. When
// a slot with key k arrives and the queue for complement_key(k) is nonempty,
// its oldest entry becomes the fresh half and the arrival the repeat half;
// otherwise the arrival waits under k. Self-complementary keys pair
// consecutive occurrences through the same path.
inline PairingPlan build_pairing(std::span<const ChannelState> states,
                                 PairingMode mode = PairingMode::CausalFifo,
                                 const std::optional<Quantizer>& quantizer = std::nullopt) {
  auto keyed = detail::key_states(states, quantizer);

  PairingPlan plan;
  plan.slots.resize(keyed.size());
  for (std::size_t t = 0; t < keyed.size(); ++t) {
    plan.slots[t].key = keyed[t].key;
    if (keyed[t].discarded) {
      plan.slots[t].role = SlotRole::Discarded;
      ++plan.discarded;
    }
  }

  auto match = [&plan](std::int64_t fresh, std::int64_t repeat) {
    plan.slots[fresh].partner = repeat;
    plan.slots[fresh].role = SlotRole::Fresh;
    plan.slots[repeat].partner = fresh;
    plan.slots[repeat].role = SlotRole::Repeat;
    ++plan.matched_pairs;
  };

  if (mode == PairingMode::CausalFifo) {
    std::unordered_map<std::string, std::deque<std::int64_t>> waiting;
    for (std::size_t t = 0; t < keyed.size(); ++t) {
      if (keyed[t].discarded) continue;
      auto it = waiting.find(keyed[t].complement_key);
      if (it != waiting.end() && !it->second.empty()) {
        std::int64_t fresh = it->second.front();
        it->second.pop_front();
        match(fresh, std::int64_t(t));
      } else {
        waiting[keyed[t].key].push_back(std::int64_t(t));
      }
    }
  } else {
    // Offline replication of the first-half / second-half split: for each key
    // pair {k, g(k)}, the first half of the occurrences of one side is paired
    // with the second half of the other. Counts are truncated to the largest
    // even number of usable occurrences; the fresh role goes to the earlier
    // slot of each pair.
    std::map<std::string, std::vector<std::int64_t>> occ;
    std::map<std::string, std::string> comp;
    for (std::size_t t = 0; t < keyed.size(); ++t) {
      if (keyed[t].discarded) continue;
      occ[keyed[t].key].push_back(std::int64_t(t));
      comp.emplace(keyed[t].key, keyed[t].complement_key);
    }
    for (const auto& [key, times] : occ) {
      const std::string& ckey = comp.at(key);
      if (ckey == key) {
        for (std::size_t i = 0; i + 1 < times.size(); i += 2) match(times[i], times[i + 1]);
        continue;
      }
      if (ckey < key) continue;  // handled from the other side
      auto other = occ.find(ckey);
      if (other == occ.end()) continue;
      const auto& ctimes = other->second;
      const std::size_t p = std::min(times.size(), ctimes.size());
      const std::size_t h = p / 2;
      for (std::size_t i = 0; i < h; ++i) {
        auto orient = [&](std::int64_t a, std::int64_t b) {
          if (a < b) match(a, b);
          else match(b, a);
        };
        orient(times[i], ctimes[p - h + i]);
        orient(ctimes[i], times[p - h + i]);
      }
    }
  }

  for (auto& s : plan.slots) {
    if (s.role != SlotRole::Fresh && s.role != SlotRole::Repeat && s.role != SlotRole::Discarded) {
      s.role = SlotRole::Unmatched;
    }
  }
  return plan;
}

// Exact post-combining SNR of a matched pair for a given user: the two
// transmissions add coherently on the direct link, the two unit-variance
// noises add, and whatever interference the quantized complement failed to
// cancel stays in the denominator.
inline double effective_snr(const ComplexMatrix& fresh, const ComplexMatrix& repeat, std::uint32_t user,
                            std::span<const double> snr) {
  if (fresh.k != repeat.k || user >= fresh.k || snr.size() != fresh.k) {
    throw std::invalid_argument("effective_snr: shape mismatch");
  }
  const std::complex<double> direct = fresh.at(user, user) + repeat.at(user, user);
  double num = std::norm(direct) * snr[user];
  double den = 2.0;
  for (std::uint32_t l = 0; l < fresh.k; ++l) {
    if (l == user) continue;
    den += std::norm(fresh.at(user, l) + repeat.at(user, l)) * snr[l];
  }
  return num / den;
}

// Draws one matched pair of Gaussian states under the asymptotic matching law
// (the n -> infinity limit where every usable block finds a partner): the
// fresh state is CN(0,1)^{KxK} conditioned on all magnitudes <= tau, and each
// repeat entry is CN(0,1) conditioned on the complement cell and the same
// truncation. Finite-n FIFO matching over-represents high-density cells; this
// sampler is the reference law the gamma -> 0 rate limit is stated for.
inline std::pair<ComplexMatrix, ComplexMatrix> sample_matched_state_pair(Rng& rng, std::uint32_t dim,
                                                                         const Quantizer& qz) {
  auto sample_truncated = [&](ComplexMatrix& m) {
    for (;;) {
      m = sample_gauss_matrix(rng, dim);
      if (!exceeds_truncation(m, qz.tau)) return;
    }
  };

  // CN(0,1) restricted to the cell of grid point c intersected with |h| <= tau.
  auto sample_in_cell = [&](GridPoint c, std::complex<double>& out) -> bool {
    const double g = qz.gamma;
    const double xlo = double(c.re) * g - g / 2, xhi = double(c.re) * g + g / 2;
    const double ylo = double(c.im) * g - g / 2, yhi = double(c.im) * g + g / 2;
    auto axis_min_sq = [](double lo, double hi) {
      if (lo <= 0.0 && 0.0 <= hi) return 0.0;
      double m = std::min(std::abs(lo), std::abs(hi));
      return m * m;
    };
    const double dmin_sq = axis_min_sq(xlo, xhi) + axis_min_sq(ylo, yhi);
    for (int attempt = 0; attempt < 200000; ++attempt) {
      double x = xlo + (xhi - xlo) * rng.uniform01();
      double y = ylo + (yhi - ylo) * rng.uniform01();
      double r_sq = x * x + y * y;
      if (r_sq > qz.tau * qz.tau) continue;
      if (rng.uniform01() <= std::exp(dmin_sq - r_sq)) {
        out = {x, y};
        return true;
      }
    }
    return false;  // cell barely intersects the truncation disk
  };

  ComplexMatrix fresh(dim), repeat(dim);
  for (;;) {
    sample_truncated(fresh);
    QuantizedMatrix target = gauss_complement(quantize_matrix(fresh, qz));
    bool ok = true;
    for (std::uint32_t i = 0; i < dim && ok; ++i) {
      for (std::uint32_t j = 0; j < dim && ok; ++j) {
        ok = sample_in_cell(target.at(i, j), repeat.at(i, j));
      }
    }
    if (ok) return {fresh, repeat};
  }
}

}  // namespace eia
