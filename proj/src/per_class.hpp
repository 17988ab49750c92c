#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace osr::detail {

// Runs fn(j) for j in [0, count) across OpenMP threads. Exceptions are
// captured per index and the lowest-index one is rethrown, so failures match
// a sequential loop.
template <typename Fn>
void parallel_for_each_index(std::size_t count, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      fn(static_cast<std::size_t>(j));
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace osr::detail
