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

namespace mvph {

/// Number of worker threads to use when the caller passes 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs fn(chunk) for chunk in [0, chunks) on up to `workers` threads and
/// returns the results indexed by chunk. Callers reduce in index order, which
/// makes the result independent of the worker count.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::size_t chunks, unsigned workers, Fn fn) {
  std::vector<Result> out(chunks);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          out[c] = fn(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Streaming mean/variance with Chan's pairwise merge.
struct RunningStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double n = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * (o.count / n);
    m2 += o.m2 + delta * delta * (count * o.count / n);
    count = n;
  }

  double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
  double standard_error() const {
    return count > 1.0 ? std::max(0.0, std::sqrt(variance() / count)) : 0.0;
  }
};

/// Monte Carlo estimate with its audit trail.
struct Estimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline Estimate to_estimate(const RunningStats& s, std::uint64_t seed) {
  return {s.mean, s.standard_error(), static_cast<std::size_t>(s.count), seed};
}

/// Samples are processed in fixed-size chunks, chunk c drawing from
/// Rng::substream(seed, c).
inline constexpr std::size_t kChunkSize = 8192;

inline std::size_t chunk_count(std::size_t samples) {
  return (samples + kChunkSize - 1) / kChunkSize;
}

}  // namespace mvph
