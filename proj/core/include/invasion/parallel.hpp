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

namespace invasion {

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double nt = na + nb;
    mean += d * nb / nt;
    m2 += o.m2 + d * d * na * nb / nt;
    n += o.n;
  }

  double variance() const noexcept {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
  double std_error() const noexcept {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

/// Number of worker threads to use when the caller passes 0.
inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

/// Evaluates fn(i) for i in [0, n_tasks) on up to `workers` threads and
/// returns the results in index order. The result never depends on the
/// worker count. The first exception thrown by any task is rethrown.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n_tasks, unsigned workers, Fn&& fn) {
  std::vector<R> out(n_tasks);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_tasks, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n_tasks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

inline constexpr std::size_t kPathChunk = 4096;

/// Monte Carlo reduction over n_paths. `per_path(path_index)` returns the
/// sample value; samples are accumulated in fixed chunks of kPathChunk paths
/// and the chunks merged in order, so the estimate is bitwise identical for
/// every worker count.
template <class PathFn>
RunningStats reduce_paths(std::uint64_t n_paths, unsigned workers, PathFn&& per_path) {
  const std::size_t n_chunks = static_cast<std::size_t>((n_paths + kPathChunk - 1) / kPathChunk);
  auto chunks = parallel_map<RunningStats>(n_chunks, workers, [&](std::size_t c) {
    RunningStats st;
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kPathChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(n_paths, lo + kPathChunk);
    for (std::uint64_t p = lo; p < hi; ++p) st.add(per_path(p));
    return st;
  });
  RunningStats total;
  for (const auto& c : chunks) total.merge(c);
  return total;
}

}  // namespace invasion
