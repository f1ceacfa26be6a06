#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bianchi {

// Worker count for parallel maps; 0 selects hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n) across the worker pool. fn must write only to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Pairwise (tree) summation; the result depends only on the order of values.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace bianchi
