#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace spinforge {

using Complex = std::complex<double>;

// Thread-count control. Values <= 0 reset to the hardware default.
void set_thread_count(int n);
int thread_count();

// SPINFORGE_THREADS environment override; 0 when unset or unparsable.
int env_thread_override();

// Resolution order: environment variable, then explicit request, then hardware.
int resolve_thread_count(int requested);

// Reductions are summed in fixed-size blocks: each block is accumulated
// sequentially and block results are combined in index order, so the result
// is bitwise identical for any thread count.
inline constexpr std::int64_t kReductionBlock = 4096;

template <typename F>
Complex deterministic_sum(std::int64_t n, F&& f) {
  const std::int64_t nb = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Complex> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::int64_t lo = b * kReductionBlock;
    const std::int64_t hi = std::min(n, lo + kReductionBlock);
    Complex s{0.0, 0.0};
    for (std::int64_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  Complex total{0.0, 0.0};
  for (const Complex& s : partial) total += s;
  return total;
}

template <typename F>
double deterministic_sum_real(std::int64_t n, F&& f) {
  const std::int64_t nb = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::int64_t lo = b * kReductionBlock;
    const std::int64_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace spinforge
