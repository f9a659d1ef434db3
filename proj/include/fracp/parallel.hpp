#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fracp {

/// Worker count used by the data-parallel loops. Results never depend on it.
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, count), statically partitioned over the worker threads
/// when count >= min_parallel, serially otherwise.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel = 2);

/// Sum of parts in a fixed pairwise-tree order.
double tree_sum(std::span<const double> parts);

}  // namespace fracp
