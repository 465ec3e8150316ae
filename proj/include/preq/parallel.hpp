#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace preq {

enum class ExecMode { serial, parallel };

/// parallel when the library was built with OpenMP, serial otherwise.
inline ExecMode default_exec() {
#ifdef _OPENMP
  return ExecMode::parallel;
#else
  return ExecMode::serial;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Terms are reduced per fixed 1024-wide block and blocks are combined in
// index order, so the result is independent of thread count and bit-identical
// between serial and parallel execution.
inline constexpr std::size_t kReduceChunk = 1024;

namespace detail {

template <class Block>
void run_chunks(std::size_t nchunks, Block&& block, ExecMode mode) {
  std::exception_ptr err = nullptr;
#ifdef _OPENMP
  if (mode == ExecMode::parallel && nchunks > 1) {
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
      try {
        block(static_cast<std::size_t>(c));
      } catch (...) {
#pragma omp critical(preq_parallel_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  (void)mode;
  for (std::size_t c = 0; c < nchunks; ++c) block(c);
}

}  // namespace detail

/// Sum of term(i) for i in [0, n). T must be value-initializable to zero
/// (double, std::complex<double>, ...).
template <class T, class F>
T chunked_sum(std::size_t n, F&& term, ExecMode mode) {
  if (n == 0) return T{};
  const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<T> partial(nchunks, T{});
  detail::run_chunks(
      nchunks,
      [&](std::size_t c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[c] = acc;
      },
      mode);
  T total{};
  for (std::size_t c = 0; c < nchunks; ++c) total += partial[c];
  return total;
}

/// Max of term(i) for i in [0, n); 0 when n == 0.
template <class F>
double chunked_max(std::size_t n, F&& term, ExecMode mode) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(nchunks, 0.0);
  detail::run_chunks(
      nchunks,
      [&](std::size_t c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        double acc = term(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) acc = std::max(acc, term(i));
        partial[c] = acc;
      },
      mode);
  double total = partial[0];
  for (std::size_t c = 1; c < nchunks; ++c) total = std::max(total, partial[c]);
  return total;
}

/// Independent iterations, one per index. Body must not touch shared state.
template <class F>
void parallel_for(std::size_t n, F&& body, ExecMode mode) {
  detail::run_chunks(n, body, mode);
}

}  // namespace preq
