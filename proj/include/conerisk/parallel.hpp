#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace conerisk {

/// Replicates are processed in chunks of this size. Chunk boundaries do not
/// depend on the worker count, which is what makes reductions reproducible.
inline constexpr std::size_t kChunkSize = 1024;

/// Resolves a requested worker count: values > 0 are used as given,
/// otherwise CONERISK_WORKERS is consulted, then hardware concurrency.
int resolve_workers(int requested);

/// Calls body(chunk, begin, end) once for every chunk of [0, count), using up
/// to `workers` threads. The first exception thrown by any chunk is rethrown
/// after all threads have joined.
void for_each_chunk(std::size_t count, int workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count) {
  return (count + kChunkSize - 1) / kChunkSize;
}

/// Welford mean/variance accumulator with an order-sensitive merge.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other);

  double variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double std_error() const;
};

/// Merges chunk accumulators left to right.
RunningStats merge_in_order(const std::vector<RunningStats>& parts);

}  // namespace conerisk
