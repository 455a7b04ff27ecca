#ifndef PSICM_PARALLEL_HPP
#define PSICM_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace psicm::detail {

/// Worker count from PSICM_THREADS, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("PSICM_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) {
        return static_cast<unsigned>(n);
      }
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(j) for j in [0, n). Each index is handled by exactly one worker;
/// the first exception in index order is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t start) {
    for (std::size_t j = start; j < n; j += workers) {
      try {
        body(j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(run, w);
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace psicm::detail

#endif
