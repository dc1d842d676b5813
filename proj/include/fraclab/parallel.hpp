#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fraclab {

/// Worker pool size: FRACLAB_THREADS if set and positive, else the
/// hardware concurrency. Affects speed only.
int worker_count();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Calls `body(i)` for every i in [0, n) on up to worker_count() threads.
/// Nested calls run serially on the calling worker. The first exception
/// thrown by any call is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      detail::in_parallel_region ? 1 : std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    detail::in_parallel_region = true;
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
    detail::in_parallel_region = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Running sums of per-sample weights.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double w) {
    sum += w;
    sum_sq += w * w;
    ++count;
  }
  void merge(const MeanAccumulator& other) {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Standard error of the mean.
  double standard_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

inline constexpr std::uint64_t kSampleBlock = 4096;

/// Splits [0, samples) into fixed blocks, evaluates `block(begin, end)` (which
/// returns an accumulator) in parallel, and merges the block results in index
/// order, so the outcome is independent of the worker count.
template <class Acc, class BlockFn>
Acc accumulate_blocks(std::uint64_t samples, BlockFn&& block) {
  const std::uint64_t nblocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<Acc> parts(nblocks);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::uint64_t begin = b * kSampleBlock;
    const std::uint64_t end = std::min(samples, begin + kSampleBlock);
    parts[b] = block(begin, end);
  });
  Acc total{};
  for (const Acc& part : parts) total.merge(part);
  return total;
}

/// Mean of `weight(i)` over i in [0, samples).
template <class WeightFn>
MeanAccumulator sample_mean(std::uint64_t samples, WeightFn&& weight) {
  return accumulate_blocks<MeanAccumulator>(samples, [&](std::uint64_t begin, std::uint64_t end) {
    MeanAccumulator acc;
    for (std::uint64_t i = begin; i < end; ++i) acc.add(weight(i));
    return acc;
  });
}

}  // namespace fraclab
