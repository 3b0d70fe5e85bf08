#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eightv {

enum class Exec { Serial, Parallel };

inline constexpr int kDefaultBatches = 64;

// Splits chains [0, n) into `batches` contiguous blocks. Each block is run
// sequentially into its own accumulator, so the result is the same for any
// thread count and for Exec::Serial.
template <class Acc, class Body>
std::vector<Acc> run_batches(std::uint64_t n, int batches, Exec exec, const Acc& zero, Body body) {
  std::vector<Acc> acc(static_cast<std::size_t>(batches), zero);
  auto block = [&](int b) {
    std::uint64_t lo = n * static_cast<std::uint64_t>(b) / static_cast<std::uint64_t>(batches);
    std::uint64_t hi = n * static_cast<std::uint64_t>(b + 1) / static_cast<std::uint64_t>(batches);
    for (std::uint64_t c = lo; c < hi; ++c) body(acc[static_cast<std::size_t>(b)], c);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int b = 0; b < batches; ++b) block(b);
  } else {
    for (int b = 0; b < batches; ++b) block(b);
  }
  return acc;
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace eightv
