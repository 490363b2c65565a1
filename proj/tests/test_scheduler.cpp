#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "eia/channels.hpp"
#include "eia/pairing.hpp"
#include "eia/quantizer.hpp"
#include "support/quadrature_oracle.hpp"

using namespace eia;

TEST_CASE("quantizer nearest-point and tie rules", "[scheduler]") {
  CHECK(quantize({0.3, 0.7}, 0.5) == GridPoint{1, 1});
  CHECK(quantize({-0.3, -0.7}, 0.5) == GridPoint{-1, -1});
  CHECK(quantize({0.5, 0.0}, 1.0) == GridPoint{1, 0});   // tie away from zero
  CHECK(quantize({-0.5, 0.0}, 1.0) == GridPoint{-1, 0});
  CHECK(quantize({0.3, 0.7}, 0.5).value(0.5) == std::complex<double>{0.5, 0.5});

  Rng rng(4);
  for (int i = 0; i < 5000; ++i) {
    std::complex<double> h = rng.complex_normal() * 3.0;
    const double gamma = 0.1 + rng.uniform01();
    GridPoint p = quantize(h, gamma);
    GridPoint n = quantize(-h, gamma);
    CHECK(n == GridPoint{-p.re, -p.im});  // sign symmetry
    CHECK(std::abs(h.real() - double(p.re) * gamma) <= gamma / 2 + 1e-12);
    CHECK(std::abs(h.imag() - double(p.im) * gamma) <= gamma / 2 + 1e-12);
  }
  // ties exactly on half-grid values
  for (int k = -4; k <= 4; ++k) {
    const double x = (k + 0.5) * 0.25;
    GridPoint p = quantize({x, -x}, 0.25);
    GridPoint n = quantize({-x, x}, 0.25);
    CHECK(n == GridPoint{-p.re, -p.im});
  }
  CHECK_THROWS_AS(Quantizer(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Quantizer(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian complement map", "[scheduler]") {
  Quantizer qz(0.5, 10.0);
  ComplexMatrix m(2);
  m.at(0, 0) = {0.5, 0.5};
  m.at(0, 1) = {0.0, 1.0};
  m.at(1, 0) = {-0.5, 0.0};
  m.at(1, 1) = {1.5, 0.0};
  QuantizedMatrix q1 = quantize_matrix(m, qz);
  QuantizedMatrix g = gauss_complement(q1);
  CHECK(g.at(0, 0) == q1.at(0, 0));
  CHECK(g.at(1, 1) == q1.at(1, 1));
  CHECK(g.at(0, 1) == GridPoint{0, -2});
  CHECK(g.at(1, 0) == GridPoint{1, 0});

  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    QuantizedMatrix r = quantize_matrix(sample_gauss_matrix(rng, 3), qz);
    CHECK(gauss_complement(gauss_complement(r)) == r);  // involution
  }
  // all off-diagonals zero -> self-paired state
  ComplexMatrix d(2);
  d.at(0, 0) = {1.0, 0.0};
  d.at(1, 1) = {0.6, -0.9};
  QuantizedMatrix qd = quantize_matrix(d, qz);
  CHECK(gauss_complement(qd) == qd);
}

namespace {

std::vector<ChannelState> ff_states(const std::vector<FieldMatrix>& ms) {
  std::vector<ChannelState> out;
  for (std::size_t i = 0; i < ms.size(); ++i) out.push_back({std::int64_t(i), ms[i]});
  return out;
}

}  // namespace

TEST_CASE("fifo pairing on hand-built sequences", "[scheduler]") {
  const auto a = FieldMatrix::from_rows({{2, 3}, {4, 1}}, 5);
  const auto ga = complement_matrix(a);

  SECTION("alternating arrivals pair in order") {
    auto plan = build_pairing(ff_states({a, ga, a, ga}));
    CHECK(plan.matched_pairs == 2);
    CHECK(plan.matched_fraction() == 1.0);
    CHECK(plan.slots[0].role == SlotRole::Fresh);
    CHECK(plan.slots[0].partner == 1);
    CHECK(plan.slots[1].role == SlotRole::Repeat);
    CHECK(plan.slots[2].partner == 3);
  }
  SECTION("FIFO takes the oldest waiting slot") {
    auto plan = build_pairing(ff_states({a, a, ga}));
    CHECK(plan.matched_pairs == 1);
    CHECK(plan.slots[0].partner == 2);
    CHECK(plan.slots[1].role == SlotRole::Unmatched);
    CHECK(plan.slots[1].partner == -1);
  }
  SECTION("fresh role goes to the earlier slot regardless of which side arrives first") {
    auto plan = build_pairing(ff_states({ga, a}));
    CHECK(plan.slots[0].role == SlotRole::Fresh);
    CHECK(plan.slots[1].role == SlotRole::Repeat);
  }
  SECTION("empty input is an error") {
    CHECK_THROWS_AS(build_pairing(std::vector<ChannelState>{}), std::invalid_argument);
  }
  SECTION("invalid ff state is an error") {
    auto z = FieldMatrix::from_rows({{0, 3}, {4, 1}}, 5);
    CHECK_THROWS_AS(build_pairing(ff_states({z})), std::invalid_argument);
  }
}

TEST_CASE("offline split replicates the half-and-half pairing", "[scheduler]") {
  const auto a = FieldMatrix::from_rows({{2, 3}, {4, 1}}, 5);
  const auto ga = complement_matrix(a);
  auto plan = build_pairing(ff_states({a, a, ga, ga}), PairingMode::OfflineSplit);
  CHECK(plan.matched_pairs == 2);
  CHECK(plan.slots[0].partner == 3);
  CHECK(plan.slots[1].partner == 2);
  CHECK(plan.slots[0].role == SlotRole::Fresh);
  CHECK(plan.slots[3].role == SlotRole::Repeat);

  // odd counts truncate to the largest even usable number
  auto plan2 = build_pairing(ff_states({a, a, a, ga, ga, ga}), PairingMode::OfflineSplit);
  CHECK(plan2.matched_pairs == 2);
}

TEST_CASE("pairing plan invariants on sampled sequences", "[scheduler]") {
  Rng rng(31);
  std::vector<ChannelState> states;
  for (int t = 0; t < 4000; ++t) states.push_back(sample_ff_state(rng, 3, 2, t));
  for (PairingMode mode : {PairingMode::CausalFifo, PairingMode::OfflineSplit}) {
    auto plan = build_pairing(states, mode);
    CHECK(plan.matched_pairs > 0);
    std::int64_t fresh = 0, repeat = 0;
    for (std::size_t t = 0; t < plan.slots.size(); ++t) {
      const auto& s = plan.slots[t];
      if (s.role == SlotRole::Unmatched) {
        CHECK(s.partner == -1);
        continue;
      }
      const auto& p = plan.slots[std::size_t(s.partner)];
      CHECK(p.partner == std::int64_t(t));  // involution
      if (s.role == SlotRole::Fresh) {
        ++fresh;
        CHECK(s.partner > std::int64_t(t));  // fresh precedes repeat
        CHECK(p.role == SlotRole::Repeat);
        // matched keys are exact complements, and never self-paired for ff
        CHECK(p.key == complement_matrix(states[t].ff()).key());
        CHECK(p.key != s.key);
      } else {
        ++repeat;
      }
    }
    CHECK(fresh == plan.matched_pairs);
    CHECK(repeat == plan.matched_pairs);
  }
}

TEST_CASE("unmatched fraction decays with n", "[scheduler]") {
  Rng root(67);
  double prev = 1.0;
  for (int n : {1000, 10000, 100000}) {
    Rng rng = root.substream(std::uint64_t(n));
    std::vector<ChannelState> states;
    for (int t = 0; t < n; ++t) states.push_back(sample_ff_state(rng, 3, 2, t));
    auto plan = build_pairing(states);
    const double unmatched = 1.0 - plan.matched_fraction();
    CHECK(unmatched < prev);
    prev = unmatched;
  }
  CHECK(prev < 0.02);

  // same trend for the quantized gaussian model at a coarse pitch
  Quantizer qz(1.0, 1.5);
  prev = 1.0;
  for (int n : {1000, 10000, 100000}) {
    Rng rng = root.substream(std::uint64_t(n) + 7);
    std::vector<ChannelState> states;
    for (int t = 0; t < n; ++t) states.push_back(sample_gauss_state(rng, 2, t));
    auto plan = build_pairing(states, PairingMode::CausalFifo, qz);
    const double unmatched =
        1.0 - plan.matched_fraction() - plan.discarded_fraction();
    CHECK(unmatched < prev);
    prev = unmatched;
  }
  CHECK(prev < 0.25);
}

TEST_CASE("gaussian pairing: truncation, self pairs, residual bound", "[scheduler]") {
  Quantizer qz(0.5, 2.0);
  Rng rng(91);

  SECTION("oversized coefficients are discarded but the run proceeds") {
    std::vector<ChannelState> states;
    ComplexMatrix big(2);
    big.at(0, 0) = {5.0, 0.0};
    states.push_back({0, big});
    states.push_back({1, sample_gauss_matrix(rng, 2)});
    auto plan = build_pairing(states, PairingMode::CausalFifo, qz);
    CHECK(plan.slots[0].role == SlotRole::Discarded);
    CHECK(plan.discarded_fraction() == 0.5);
    auto j = plan.summary_json();
    CHECK(j["slots"] == 2);
    CHECK(j["matched_pairs"] == 0);
    CHECK(j["discarded_fraction"] == 0.5);
  }

  SECTION("gaussian states without a quantizer are an error") {
    std::vector<ChannelState> states{{0, sample_gauss_matrix(rng, 2)}};
    CHECK_THROWS_AS(build_pairing(states), std::invalid_argument);
  }

  SECTION("diagonal-only states self-pair on consecutive occurrences") {
    ComplexMatrix d(2);
    d.at(0, 0) = {1.0, 0.0};
    d.at(1, 1) = {1.0, 0.0};
    d.at(0, 1) = {0.1, -0.1};  // quantizes to 0 at gamma = 0.5
    std::vector<ChannelState> states{{0, d}, {1, d}, {2, d}};
    auto plan = build_pairing(states, PairingMode::CausalFifo, qz);
    CHECK(plan.matched_pairs == 1);
    CHECK(plan.slots[0].partner == 1);
    CHECK(plan.slots[2].role == SlotRole::Unmatched);
  }

  SECTION("every matched pair cancels interference to within gamma*sqrt(2)") {
    std::vector<ChannelState> states;
    for (int t = 0; t < 60000; ++t) states.push_back(sample_gauss_state(rng, 2, t));
    auto plan = build_pairing(states, PairingMode::CausalFifo, qz);
    REQUIRE(plan.matched_pairs > 50);
    const double limit = qz.gamma * std::sqrt(2.0) + 1e-9;
    for (std::size_t t = 0; t < plan.slots.size(); ++t) {
      if (plan.slots[t].role != SlotRole::Fresh) continue;
      const auto& h1 = states[t].gauss();
      const auto& h2 = states[std::size_t(plan.slots[t].partner)].gauss();
      for (std::uint32_t i = 0; i < 2; ++i) {
        for (std::uint32_t j = 0; j < 2; ++j) {
          if (i == j) continue;
          CHECK(std::abs(h1.at(i, j) + h2.at(i, j)) <= limit);
        }
      }
    }
  }
}

TEST_CASE("effective snr of an exactly complementary pair", "[scheduler]") {
  Rng rng(14);
  const std::vector<double> snr{4.0, 2.5, 7.0};
  for (int rep = 0; rep < 50; ++rep) {
    ComplexMatrix h1 = sample_gauss_matrix(rng, 3);
    ComplexMatrix h2 = h1;
    for (std::uint32_t i = 0; i < 3; ++i) {
      for (std::uint32_t j = 0; j < 3; ++j) {
        if (i != j) h2.at(i, j) = -h1.at(i, j);
      }
    }
    for (std::uint32_t k = 0; k < 3; ++k) {
      const double expect = 2.0 * std::norm(h1.at(k, k)) * snr[k];
      CHECK(effective_snr(h1, h2, k, snr) == Catch::Approx(expect).epsilon(1e-12));
    }
  }
  ComplexMatrix h = sample_gauss_matrix(rng, 3);
  CHECK_THROWS_AS(effective_snr(h, h, 5, snr), std::invalid_argument);
}

TEST_CASE("matched-pair sampler honors cells and truncation", "[scheduler]") {
  Quantizer qz(0.4, 2.0);
  Rng rng(211);
  for (int rep = 0; rep < 300; ++rep) {
    auto [fresh, repeat] = sample_matched_state_pair(rng, 2, qz);
    CHECK_FALSE(exceeds_truncation(fresh, qz.tau));
    CHECK_FALSE(exceeds_truncation(repeat, qz.tau));
    CHECK(quantize_matrix(repeat, qz) == gauss_complement(quantize_matrix(fresh, qz)));
  }
}

TEST_CASE("pair rate approaches the ergodic value as gamma shrinks", "[scheduler][slow]") {
  const double snr = 100.0;
  const std::vector<double> snr_vec{snr, snr};
  const double oracle = eia_test::achievable_rate_closed_form(snr);
  Rng root(1009);
  double prev = -1.0;
  double last = 0.0;
  for (double gamma : {0.5, 0.1}) {
    Quantizer qz(gamma, 2.5);
    Rng rng = root.substream(std::uint64_t(gamma * 1000));
    double sum = 0.0;
    const int pairs = 5000;
    for (int i = 0; i < pairs; ++i) {
      auto [fresh, repeat] = sample_matched_state_pair(rng, 2, qz);
      for (std::uint32_t k = 0; k < 2; ++k) {
        sum += 0.5 * std::log2(1.0 + effective_snr(fresh, repeat, k, snr_vec));
      }
    }
    const double mean = sum / (2.0 * pairs);
    CHECK(mean > prev);
    prev = mean;
    last = mean;
  }
  CHECK(std::abs(last - oracle) < 0.3);
}
