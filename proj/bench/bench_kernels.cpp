// Benchmark: production OpenMP kernels against the serial reference paths.
// The reference implementations compute the same per-entry sums in the same
// order, so the max|diff| column should read 0.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcbwave/dwt.hpp"
#include "pcbwave/dwt_reference.hpp"
#include "pcbwave/rng.hpp"
#include "pcbwave/svm.hpp"

using namespace pcbwave;

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        fn();
        const auto stop = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

double grid_diff(const Grid& a, const Grid& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

// Plain serial gram-matrix loop, the baseline side.
std::vector<double> gram_reference(const std::vector<std::vector<double>>& xs, double sigma) {
    const std::size_t n = xs.size();
    std::vector<double> gram(n * n);
    const double inv = 1.0 / (sigma * sigma);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < xs[i].size(); ++k) {
                const double d = xs[i][k] - xs[j][k];
                d2 += d * d;
            }
            gram[i * n + j] = std::exp(-d2 * inv);
        }
    return gram;
}

void bench_dwt(int size, int reps) {
    Rng rng(1234);
    Image img(size, size);
    for (double& v : img.values()) v = rng.uniform(0.0, 255.0);

    for (FilterFamily family : {FilterFamily::Haar, FilterFamily::Daubechies4}) {
        const FilterPair filter = filter_coefficients(family);
        LevelBands fast, slow;
        const double t_fast = time_best_of(reps, [&] { fast = decompose_level(img, filter); });
        const double t_slow =
            time_best_of(reps, [&] { slow = decompose_level_reference(img, filter); });
        const double diff = std::max(std::max(grid_diff(fast.ll, slow.ll),
                                              grid_diff(fast.lh, slow.lh)),
                                     std::max(grid_diff(fast.hl, slow.hl),
                                              grid_diff(fast.hh, slow.hh)));
        std::printf("dwt level  %-5s %5dx%-5d %10.2f ms %10.2f ms %7.2fx %10.3g\n",
                    filter_family_name(family).c_str(), size, size, t_slow, t_fast,
                    t_slow / t_fast, diff);
    }
}

void bench_gram(int n, int dim, int reps) {
    Rng rng(99);
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < n; ++i) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& v : x) v = rng.uniform(-10.0, 10.0);
        xs.push_back(std::move(x));
    }
    std::vector<double> fast, slow;
    const double t_fast = time_best_of(reps, [&] { fast = gram_matrix(xs, 2.0); });
    const double t_slow = time_best_of(reps, [&] { slow = gram_reference(xs, 2.0); });
    double diff = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i)
        diff = std::max(diff, std::abs(fast[i] - slow[i]));
    std::printf("gram matrix n=%-5d d=%-7d %10.2f ms %10.2f ms %7.2fx %10.3g\n", n, dim, t_slow,
                t_fast, t_slow / t_fast, diff);
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 3;
    if (argc > 1) reps = std::max(1, std::atoi(argv[1]));

#ifdef _OPENMP
    std::printf("threads: %d (set OMP_NUM_THREADS to vary)\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %13s %13s %8s %10s\n", "kernel", "serial", "openmp", "speedup",
                "max|diff|");

    for (int size : {512, 1024, 2048}) bench_dwt(size, reps);
    for (int n : {512, 1024}) bench_gram(n, 14, reps);
    return 0;
}
