#pragma once

#include <cstddef>

#ifdef QK_HAVE_OPENMP
#include <omp.h>
#endif

namespace qk {

/// Runtime switch between the OpenMP kernels and the serial reference path.
/// Loop bodies write disjoint elements only, so both paths produce identical
/// bytes; tests and the benchmark compare them.
inline bool& parallel_enabled() {
    static bool enabled = true;
    return enabled;
}

template <typename F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef QK_HAVE_OPENMP
    if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

} // namespace qk
