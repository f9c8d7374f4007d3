#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace factorstab {

/// Calls fn(i) for i in [0, count) on up to `width` threads. Work is pulled
/// from a shared counter, so callers must write results by index to stay
/// deterministic. The exception of the lowest failing index is rethrown
/// after all workers finish.
template <class Fn>
void parallel_for(std::size_t count, unsigned width, Fn&& fn) {
  if (count == 0) return;
  width = std::clamp<unsigned>(width, 1u, static_cast<unsigned>(std::min<std::size_t>(count, 1024)));
  if (width == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(width);
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace factorstab
