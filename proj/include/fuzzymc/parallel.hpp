#pragma once

#include "fuzzymc/types.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fuzzymc {

// Runs body(k) for k in [0, n). Each k must write only to its own slot so that
// results do not depend on the thread count.
template <typename Body>
void parallel_for(Index n, unsigned threads, Body&& body) {
  if (threads <= 1 || n <= 1) {
    for (Index k = 0; k < n; ++k) body(k);
    return;
  }
  const Index workers = std::min<Index>(static_cast<Index>(threads), n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index k = w; k < n; k += workers) body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fuzzymc
