#include "fblnoma/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>

namespace fblnoma {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int configure_threads_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("FBLNOMA_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) omp_set_num_threads(n);
        } catch (const std::exception&) {
            // unparsable value: keep the OpenMP default
        }
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace fblnoma
