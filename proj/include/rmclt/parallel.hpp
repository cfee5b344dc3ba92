#ifndef RMCLT_PARALLEL_HPP_
#define RMCLT_PARALLEL_HPP_

// Seeded, worker-count-independent Monte Carlo plumbing.
//
// Sample index i belongs to chunk i / kChunk, and every chunk owns a
// generator seeded from (master seed, chunk index) through splitmix64. Results
// are written by sample index and reduced in a fixed pairwise order, so the
// output is bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace rmclt {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(stream_seed(master, stream)),
                    static_cast<std::uint32_t>(stream_seed(master, stream) >> 32)};
  return Rng(seq);
}

// 0 means "use hardware concurrency".
inline unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline constexpr std::size_t kChunk = 64;

/// Runs `fn(rng, index)` for index in [0, count) and returns the results in
/// index order.
template <typename T, typename Fn>
std::vector<T> mc_map(std::size_t count, std::uint64_t seed, unsigned workers, Fn&& fn) {
  std::vector<T> out(count);
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Rng rng = make_rng(seed, c);
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) out[i] = fn(rng, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const unsigned nw = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(chunks, 1));
  if (nw <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) pool.emplace_back(run);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace rmclt

#endif  // RMCLT_PARALLEL_HPP_
