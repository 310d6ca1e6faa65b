// Timing comparison of the serial reference kernels against the OpenMP paths.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wavetank/greens.hpp"
#include "wavetank/unified_transform.hpp"

using namespace wavetank;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

}  // namespace

int main() {
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads: %d\n\n", threads);

    // Green's kernel application: prefix-integral serial reference vs the
    // per-point OpenMP quadrature.
    for (int m : {801, 3201, 12801}) {
        greens::GreensKernel kn(greens::Kind::Neumann, 0.375, 2.0);
        std::vector<double> f(m);
        for (int i = 0; i < m; ++i) {
            const double x = -2.0 + 4.0 * i / (m - 1);
            f[i] = std::sin(1.7 * x) * std::exp(-x * x);
        }
        const double ts = time_of([&] { greens::apply_serial(kn, f); }, 5);
        const double tp = time_of([&] { greens::apply_omp(kn, f); }, 5);
        auto a = greens::apply_serial(kn, f);
        auto b = greens::apply_omp(kn, f);
        double diff = 0.0;
        for (int i = 0; i < m; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        std::printf("greens m=%6d  serial(prefix) %8.3f ms   omp(direct) %8.3f ms   max|diff| %.2e\n",
                    m, ts * 1e3, tp * 1e3, diff);
    }
    std::printf("\n");

    // Unified-transform batch evaluation: 1 thread vs full pool.
    {
        ut::DispersionSpec spec(5.0 / 12.0, 0.375, 0.375, 2.0);
        ut::LinearData data;
        data.eta0 = [](double x) { return 0.1 * std::exp(-10.0 * x * x); };
        data.u0 = [](double) { return 0.0; };
        ut::ContourSpec contour = ut::default_contour(2.0);
        contour.k_max = 30.0;
        ut::Evaluator ev(spec, data, contour);
        std::vector<double> xs(64);
        for (size_t i = 0; i < xs.size(); ++i) xs[i] = -1.8 + 3.6 * i / (xs.size() - 1);
        std::vector<ut::Evaluator::Value> ve(xs.size()), vu(xs.size());
#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        const double t1 = time_of([&] { ev.batch(xs, 0.5, ve, vu); }, 3);
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
        const double tp = time_of([&] { ev.batch(xs, 0.5, ve, vu); }, 3);
        std::printf("ut batch 64 pts  1 thread %8.3f ms   %d threads %8.3f ms\n", t1 * 1e3,
                    threads, tp * 1e3);
    }
    return 0;
}
