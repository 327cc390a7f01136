#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fpg {

/// Worker count from FPG_THREADS; unset or unparsable means 1.
inline unsigned worker_count() {
  const char* env = std::getenv("FPG_THREADS");
  if (env == nullptr) return 1;
  try {
    const long n = std::stol(std::string(env));
    return n > 1 ? static_cast<unsigned>(std::min<long>(n, 256)) : 1U;
  } catch (...) {
    return 1;
  }
}

/// Calls body(i) for i in [0, n). Work is split into contiguous chunks; body must only
/// write to slot i of its outputs so the result is independent of the worker count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = worker_count();
  if (workers <= 1 || n < 2048) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fpg
