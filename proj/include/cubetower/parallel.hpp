#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef CUBETOWER_HAVE_OPENMP
#include <omp.h>
#endif

namespace cubetower {

// Every parallel kernel in this project is a data-parallel loop writing to
// disjoint slots (or folding with an order-independent reduction such as max),
// so results are bit-identical between the serial and OpenMP paths. Tests run
// both; bench/bench_kernels.cpp compares their throughput.

enum class Exec { Serial, Parallel };

inline Exec default_exec() {
    const char* v = std::getenv("CUBETOWER_SERIAL");
    return (v && v[0] == '1') ? Exec::Serial : Exec::Parallel;
}

template <class Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& fn) {
#ifdef CUBETOWER_HAVE_OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    parallel_for(n, default_exec(), fn);
}

}  // namespace cubetower
