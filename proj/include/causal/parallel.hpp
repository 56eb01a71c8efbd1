#pragma once

// Index-parallel loop over a fixed pool of std::threads. Each worker owns a
// state object (e.g. an FFT workspace) built by a factory.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace causal {

inline constexpr const char* kWorkerEnv = "CAUSAL_MAX_WORKERS";

/// Workers to use for `requested` (0 = hardware concurrency), capped by the
/// CAUSAL_MAX_WORKERS environment variable when set to a positive integer.
inline std::size_t worker_count(std::size_t requested = 0) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv(kWorkerEnv)) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(n, 1);
}

/// Calls body(state, i) for i in [0, count), where each worker thread holds
/// one `make_state()` result. The first exception thrown is rethrown.
template <class MakeState, class Body>
void parallel_for(std::size_t count, std::size_t workers, MakeState&& make_state, Body&& body) {
  workers = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto run = [&] {
    try {
      auto state = make_state();
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        body(state, i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace causal
