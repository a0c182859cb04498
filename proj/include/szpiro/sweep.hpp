#pragma once

// Deterministic parallel loops: work is handed out dynamically but every
// result lands in its own slot, so output order never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace szpiro {

/// SZPIRO_JOBS if set to a positive integer, otherwise the hardware thread count (at least 1).
unsigned default_jobs();

/// Calls body(i) for i in [0, n) on up to `jobs` threads. If any call throws,
/// the exception from the lowest index is rethrown after all threads finish.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// out[i] = f(i), computed with parallel_for.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F&& f) {
  std::vector<R> out(n);
  parallel_for(n, jobs, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace szpiro
