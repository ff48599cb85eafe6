#pragma once

#include <cstddef>

namespace m2hs {

// Per-grid-point kernels are embarrassingly parallel: each index writes its
// own slot and there are no cross-point reductions, so the OpenMP and serial
// drivers produce bit-identical output.  Reductions (quadrature, cumulative
// integrals) never go through this helper; they stay strictly serial.
enum class Exec { Serial, OpenMP };

template <typename F>
inline void run_indexed(Exec exec, std::ptrdiff_t count, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
}

}  // namespace m2hs
