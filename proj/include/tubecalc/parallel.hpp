#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tubecalc {

// Worker count: hardware concurrency capped by TUBECALC_THREADS when set.
int thread_count();

// Calls f(k) for k in [0, n) and stores results by index, so the caller can
// reduce in a fixed order regardless of scheduling.
std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& f);

// Pairwise (tree) summation; deterministic for a fixed input order.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace tubecalc
