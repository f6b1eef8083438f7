#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace decomp {

inline unsigned
default_jobs()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

//! Runs task(0..count-1) on up to `jobs` threads. Results land in their
//! index slot, so the output does not depend on scheduling. The first
//! exception thrown by any task is rethrown after all workers stop.
template <class Task>
auto
run_replicates(std::size_t count, unsigned jobs, Task&& task)
  -> std::vector<std::invoke_result_t<Task&, std::size_t>>
{
  using Result = std::invoke_result_t<Task&, std::size_t>;
  std::vector<Result> results(count);
  const unsigned workers =
    static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      results[i] = task(i);
    return results;
  }

  std::atomic<std::size_t> next{ 0 };
  std::atomic<bool> failed{ false };
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load())
        return;
      try {
        results[i] = task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
  return results;
}

} // namespace decomp
