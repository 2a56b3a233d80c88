#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyperfact::detail {

// Runs task(i) for i in [0, count) on up to `workers` threads.  A task
// returns true to report a hit.  Every task below the earliest hit runs;
// later ones may be skipped.  Returns the earliest hit, or count.
template <class Task>
std::size_t find_first(std::size_t count, unsigned workers, Task&& task) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      if (task(i)) return i;
    }
    return count;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_hit{count};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || i > first_hit.load()) return;
      try {
        if (task(i)) {
          std::size_t seen = first_hit.load();
          while (i < seen && !first_hit.compare_exchange_weak(seen, i)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        first_hit.store(0);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return first_hit.load();
}

}  // namespace hyperfact::detail
