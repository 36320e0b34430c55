#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sic {

// Number of worker threads: hardware concurrency capped by the SIC_THREADS
// environment variable (0 or unset means no cap).
inline unsigned thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SIC_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

// Runs fn(i) for i in [0, total). Work items must be independent and write
// only to their own index; the chunked schedule is deterministic but results
// must not depend on execution order. The lowest-index worker exception is
// rethrown after all workers drain.
inline void parallel_for(std::size_t total, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = thread_budget();
  if (workers <= 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([=, &fn, &errors]() {
      try {
        for (std::size_t i = w; i < total; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace sic
