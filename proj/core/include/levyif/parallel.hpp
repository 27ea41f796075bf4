#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace levyif {

/// Runs fn(r) for r in [0, count) across hardware threads. Work is assigned
/// by index stride and any aggregation happens outside, over an index-ordered
/// result vector, so the outcome never depends on scheduling.
template <typename Fn>
void parallel_replicas(std::uint64_t count, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      unsigned(std::min<std::uint64_t>(hw, count ? count : 1));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t r = w; r < count; r += workers) fn(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace levyif
