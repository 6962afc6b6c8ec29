#pragma once

// Deterministic index-parallel map. WEAKFAN_THREADS caps the worker count;
// results are collected by input index, so output never depends on the
// thread count.

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace weakfan {

inline std::size_t thread_count() {
  if (const char* env = std::getenv("WEAKFAN_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <typename R, typename F>
std::vector<R> parallel_map(std::size_t count, F&& fn) {
  std::vector<R> out(count);
  const std::size_t workers = std::min(thread_count(), count ? count : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace weakfan
