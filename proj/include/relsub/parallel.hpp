#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relsub {

/// Thread cap: min(RELSUB_THREADS, hardware) when the variable is set,
/// otherwise the OpenMP default. 1 disables parallel kernels.
int max_threads();

/// True when parallel kernels should fan out (max_threads() > 1 and OpenMP
/// was compiled in).
bool parallel_enabled();

/// Force the thread cap from code (CLI flag / tests); 0 restores the
/// environment-derived default.
void set_thread_cap(int n);

/// Fill out[i] = f(i) for i in [0, n). Per-index results are written into a
/// dense buffer so any later fold runs serially in index order; parallel and
/// serial execution are therefore bitwise identical.
template <typename T, typename F>
std::vector<T> indexed_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
#ifdef _OPENMP
    if (parallel_enabled() && n > 256) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        return out;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
}

/// Serial reference for indexed_map, kept for the kernel-equivalence tests
/// and the benchmark baseline.
template <typename T, typename F>
std::vector<T> indexed_map_serial(std::size_t n, F&& f) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
}

} // namespace relsub
