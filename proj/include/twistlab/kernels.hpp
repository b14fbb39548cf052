#pragma once

// Data-parallel scans over family members. Every kernel writes its result into the slot of
// its input index, so the output never depends on the thread count or on completion order;
// reductions happen afterwards, serially, in index order. Each parallel kernel has a serial
// twin with the same per-element code path, used by tests and by the benchmark.

#include <exception>
#include <span>
#include <type_traits>
#include <vector>

#include "twistlab/lfunc.hpp"

namespace twistlab {

/// Sets the OpenMP team size for subsequent kernels (n >= 1).
void set_thread_count(int n);
int thread_count();

template <class F>
auto parallel_map(std::size_t n, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  std::vector<std::invoke_result_t<F&, std::size_t>> out(n);
  std::exception_ptr failure;
  std::size_t failed_at = n;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(twistlab_parallel_map)
      if (static_cast<std::size_t>(i) < failed_at) {
        failed_at = static_cast<std::size_t>(i);
        failure = std::current_exception();
      }
    }
  }
  // the lowest failing index wins, so the reported error is deterministic too
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class F>
auto serial_map(std::size_t n, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  std::vector<std::invoke_result_t<F&, std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

std::vector<LValue> central_values(const HeckeForm& form, std::span<const Discriminant> ds, const AfeParams& params);
std::vector<LValue> central_values_serial(const HeckeForm& form, std::span<const Discriminant> ds,
                                          const AfeParams& params);

}  // namespace twistlab
