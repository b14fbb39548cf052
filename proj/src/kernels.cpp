#include "twistlab/kernels.hpp"

#include <omp.h>

#include "twistlab/error.hpp"

namespace twistlab {

void set_thread_count(int n) {
  if (n < 1) throw ConfigError("thread count must be >= 1");
  omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

std::vector<LValue> central_values(const HeckeForm& form, std::span<const Discriminant> ds, const AfeParams& params) {
  return parallel_map(ds.size(), [&](std::size_t i) { return central_value(form, ds[i], params); });
}

std::vector<LValue> central_values_serial(const HeckeForm& form, std::span<const Discriminant> ds,
                                          const AfeParams& params) {
  return serial_map(ds.size(), [&](std::size_t i) { return central_value(form, ds[i], params); });
}

}  // namespace twistlab
