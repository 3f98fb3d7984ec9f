#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace loewner {

/// Worker count: hardware concurrency capped by LOEWNER_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Work is
/// split into contiguous blocks so results written by index are independent
/// of the thread count. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace loewner
