#ifndef MMW_PARALLEL_HPP
#define MMW_PARALLEL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP glue. Reductions are blocked so the summation order is fixed by the
// block layout, not the thread count: partial sums per block, then a serial
// sum over blocks in index order. Results are bit-identical for any number of
// threads, including one.

namespace mmw {

inline constexpr std::size_t kReduceBlock = 2048;

// sum_{i in [0,n)} f(i), f returning complex<double>.
template <class F>
std::complex<double> blocked_sum(std::size_t n, F&& f) {
  if (n == 0) return {};
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<std::complex<double>> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (nblocks > 4 && !omp_in_parallel())
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = std::min(lo + kReduceBlock, n);
    std::complex<double> acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  std::complex<double> total{};
  for (const auto& p : partial) total += p;
  return total;
}

// Parallel loop over independent slots; each iteration writes its own result.
template <class F>
void parallel_index_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (n > 1 && !omp_in_parallel())
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    f(static_cast<std::size_t>(i));
  }
}

}  // namespace mmw

#endif  // MMW_PARALLEL_HPP
