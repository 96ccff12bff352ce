#pragma once

#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fblnoma {

/// Selects the serial reference loop or the OpenMP loop for the data-parallel
/// kernels (P2 scan, N2 search, Monte Carlo, grid oracle). Both produce
/// bit-identical results: every element is computed independently and
/// reductions run afterwards in index order.
enum class Execution { serial, parallel };

/// out[i] = fn(i) for i in [0, count).
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Execution exec, Fn&& fn) {
    std::vector<T> out(count);
    const auto n = static_cast<long long>(count);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        }
    } else {
        for (long long i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        }
    }
    return out;
}

/// Index of the first maximum; ties go to the lowest index.
template <typename T, typename Key>
std::size_t first_argmax(std::span<const T> values, Key&& key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (key(values[i]) > key(values[best])) best = i;
    }
    return best;
}

/// Pairwise summation in fixed index order.
double pairwise_sum(std::span<const double> values);

/// Worker count used by Execution::parallel. Reads FBLNOMA_THREADS when set.
int configure_threads_from_env();

}  // namespace fblnoma
