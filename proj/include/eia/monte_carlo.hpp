#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "eia/rng.hpp"

namespace eia {

struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::int64_t samples = 0;
};

namespace detail {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

inline constexpr std::int64_t kMcChunk = 16384;

}  // namespace detail

// Deterministic chunked Monte Carlo: chunk c draws from the substream
// (seed, stream_tag, c) and chunk sums are merged in index order, so the
// result is byte-identical for any worker count. F maps an Rng to an array
// of N jointly sampled values.
template <std::size_t N, typename F>
std::array<McEstimate, N> mc_estimate_vec(std::int64_t samples, std::uint64_t seed, std::uint64_t stream_tag,
                                          int threads, F&& sample_fn) {
  if (samples < 1) throw std::invalid_argument("mc_estimate: need samples >= 1");
  if (threads < 1) threads = 1;

  const std::int64_t chunks = (samples + detail::kMcChunk - 1) / detail::kMcChunk;
  struct ChunkSums {
    std::array<detail::KahanSum, N> sum;
    std::array<detail::KahanSum, N> sum_sq;
  };
  std::vector<ChunkSums> per_chunk(static_cast<std::size_t>(chunks));

  const Rng root = Rng(seed).substream(stream_tag);
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      Rng rng = root.substream(std::uint64_t(c));
      const std::int64_t lo = c * detail::kMcChunk;
      const std::int64_t hi = std::min(samples, lo + detail::kMcChunk);
      ChunkSums& out = per_chunk[std::size_t(c)];
      for (std::int64_t i = lo; i < hi; ++i) {
        std::array<double, N> v = sample_fn(rng);
        for (std::size_t j = 0; j < N; ++j) {
          out.sum[j].add(v[j]);
          out.sum_sq[j].add(v[j] * v[j]);
        }
      }
    }
  };

  if (threads == 1 || chunks == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int nw = std::min<std::int64_t>(threads, chunks);
    pool.reserve(std::size_t(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::array<McEstimate, N> est;
  for (std::size_t j = 0; j < N; ++j) {
    detail::KahanSum s, ss;
    for (const auto& c : per_chunk) {
      s.add(c.sum[j].s);
      ss.add(c.sum_sq[j].s);
    }
    const double n = double(samples);
    const double mean = s.s / n;
    double var = 0.0;
    if (samples > 1) var = std::max(0.0, (ss.s - n * mean * mean) / (n - 1.0));
    est[j] = {mean, std::sqrt(var / n), samples};
  }
  return est;
}

template <typename F>
McEstimate mc_estimate(std::int64_t samples, std::uint64_t seed, std::uint64_t stream_tag, int threads,
                       F&& sample_fn) {
  auto one = mc_estimate_vec<1>(samples, seed, stream_tag, threads,
                                [&](Rng& rng) { return std::array<double, 1>{sample_fn(rng)}; });
  return one[0];
}

}  // namespace eia
