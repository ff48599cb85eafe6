// Timings of the per-point kernels: serial loop vs the OpenMP driver.
// The two paths share each kernel body, so outputs must match bit for bit;
// the benchmark verifies that while it measures.
//
//   m2hs_bench [n] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "m2hs/core.hpp"
#include "m2hs/eulerian.hpp"
#include "m2hs/lagrangian.hpp"
#include "m2hs/oracle.hpp"
#include "m2hs/weakflow.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace m2hs;

namespace {

template <typename F>
double best_of(int reps, F&& fn) {
    double best = std::numeric_limits<double>::max();
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void print_row(const char* kernel, double serial_ms, double omp_ms, bool match) {
    std::printf("%-22s %10.3f ms %10.3f ms %8.2fx   %s\n", kernel, serial_ms, omp_ms,
                serial_ms / omp_ms, match ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : (1 << 16);
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

    const Grid grid(n);
    const std::vector<Mode> um = {{1, 0.9, -0.3}, {2, 0.25, 0.1}, {3, -0.1, 0.05}};
    const std::vector<Mode> rm = {{1, 0.3, 0.2}, {2, -0.15, 0.1}};
    const InitialData data = normalize(fourier_synthesize(um, rm, 0.8, grid)).first;
    const SimParams params = make_params(1.0, data);
    const double t = 0.4;

#ifdef _OPENMP
    std::printf("n = %d, reps = %d, omp threads = %d\n\n", n, reps, omp_get_max_threads());
#else
    std::printf("n = %d, reps = %d, OpenMP disabled at build time\n\n", n, reps);
#endif
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        weakflow::GammaField a, b;
        const double ts = best_of(reps, [&] { a = weakflow::gamma_closed_form(data, params, t, Exec::Serial); });
        const double tp = best_of(reps, [&] { b = weakflow::gamma_closed_form(data, params, t, Exec::OpenMP); });
        const bool ok = std::memcmp(a.gamma.data(), b.gamma.data(), n * sizeof(cplx)) == 0 &&
                        std::memcmp(a.gamma_dot.data(), b.gamma_dot.data(), n * sizeof(cplx)) == 0;
        print_row("gamma_closed_form", ts, tp, ok);
    }
    {
        lagrangian::RiccatiField a, b;
        const double ts = best_of(reps, [&] { a = lagrangian::riccati_explicit(data, params, t, Exec::Serial); });
        const double tp = best_of(reps, [&] { b = lagrangian::riccati_explicit(data, params, t, Exec::OpenMP); });
        const bool ok = std::memcmp(a.z.data(), b.z.data(), n * sizeof(cplx)) == 0;
        print_row("riccati_explicit", ts, tp, ok);
    }
    {
        oracle::OdeRunConfig rc;
        rc.dt = 1e-3;
        rc.t_end = 0.5;
        rc.stride = 1 << 30;
        oracle::UpTrajectory a, b;
        const double ts = best_of(reps, [&] { a = oracle::rk4_up(data, params, rc, Exec::Serial); });
        const double tp = best_of(reps, [&] { b = oracle::rk4_up(data, params, rc, Exec::OpenMP); });
        const bool ok = std::memcmp(a.u.back().data(), b.u.back().data(), n * sizeof(double)) == 0 &&
                        std::memcmp(a.p.back().data(), b.p.back().data(), n * sizeof(double)) == 0;
        print_row("rk4_up", ts, tp, ok);
    }
    {
        auto st = weakflow::build_phi(weakflow::gamma_closed_form(data, params, t), params);
        st.tau_t = weakflow::tau_rate(data, params, t, TauVariant::OdeConsistent);
        eulerian::EulerianState a, b;
        const double ts = best_of(reps, [&] { a = eulerian::reconstruct(st, params, Exec::Serial); });
        const double tp = best_of(reps, [&] { b = eulerian::reconstruct(st, params, Exec::OpenMP); });
        const bool ok = std::memcmp(a.u.data(), b.u.data(), n * sizeof(double)) == 0 &&
                        std::memcmp(a.u_x.data(), b.u_x.data(), n * sizeof(double)) == 0 &&
                        std::memcmp(a.rho.data(), b.rho.data(), n * sizeof(double)) == 0;
        print_row("reconstruct", ts, tp, ok);
    }
    return 0;
}
