#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace consortia::detail {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(task) for task in [0, tasks) on up to `workers` threads. Tasks are
// handed out dynamically; callers write results into per-task slots so the
// outcome never depends on scheduling. The first exception thrown (lowest
// task index) is rethrown on the calling thread.
template <class Fn>
void parallel_tasks(std::size_t tasks, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(tasks, 1)));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::size_t failed_task = tasks;
  std::exception_ptr failure;
  auto body = [&] {
    for (;;) {
      std::size_t task;
      {
        std::lock_guard lock(mu);
        if (next >= tasks) return;
        task = next++;
      }
      try {
        fn(task);
      } catch (...) {
        std::lock_guard lock(mu);
        if (task < failed_task) {
          failed_task = task;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace consortia::detail
