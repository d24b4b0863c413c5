// Timing comparison of the serial reference kernels against the OpenMP
// versions, plus end-to-end trial throughput. Also asserts serial and
// parallel outputs agree bit-for-bit before timing them.
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "exaul/harness.hpp"
#include "exaul/kernels.hpp"
#include "exaul/pool.hpp"
#include "exaul/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

volatile double sink;

void bench_kernels(std::size_t n) {
    namespace k = exaul::kernels;
    exaul::Rng rng(42);
    std::vector<double> x(n), out_s(n), out_p(n);
    for (auto& v : x) v = rng.uniform();

    if (k::sum_serial(x) != k::sum_parallel(x)) {
        std::fprintf(stderr, "sum mismatch at n=%zu\n", n);
        std::exit(1);
    }
    k::softmax_serial(x, 0.5, out_s);
    k::softmax_parallel(x, 0.5, out_p);
    if (out_s != out_p) {
        std::fprintf(stderr, "softmax mismatch at n=%zu\n", n);
        std::exit(1);
    }
    k::prefix_sum_serial(x, out_s);
    k::prefix_sum_parallel(x, out_p);
    if (out_s != out_p) {
        std::fprintf(stderr, "prefix mismatch at n=%zu\n", n);
        std::exit(1);
    }

    const int reps = 5;
    const double t_sum_s = time_best_of(reps, [&] { sink = k::sum_serial(x); });
    const double t_sum_p = time_best_of(reps, [&] { sink = k::sum_parallel(x); });
    const double t_soft_s = time_best_of(reps, [&] { k::softmax_serial(x, 0.5, out_s); });
    const double t_soft_p = time_best_of(reps, [&] { k::softmax_parallel(x, 0.5, out_p); });
    const double t_pre_s = time_best_of(reps, [&] { k::prefix_sum_serial(x, out_s); });
    const double t_pre_p = time_best_of(reps, [&] { k::prefix_sum_parallel(x, out_p); });

    std::printf("n=%-10zu sum %.3e/%.3e s (x%.2f)  softmax %.3e/%.3e s (x%.2f)  prefix %.3e/%.3e s (x%.2f)\n",
                n, t_sum_s, t_sum_p, t_sum_s / t_sum_p, t_soft_s, t_soft_p, t_soft_s / t_soft_p,
                t_pre_s, t_pre_p, t_pre_s / t_pre_p);
}

void bench_trial(exaul::Algo algo) {
    exaul::ExperimentConfig config;
    config.algo = algo;
    config.schedule.kind = exaul::ScheduleKind::Stochastic;
    config.schedule.pool1 = exaul::gen_pool(20000, 7, exaul::Calibration::Well, 0.3);
    config.horizon = 30000;
    config.grid_size = 1000;
    config.trials = 1;
    config.log_every = 1000;

    const auto start = Clock::now();
    const auto result = exaul::run_trial(config, 0);
    const double dt = seconds_since(start);
    std::printf("trial %-10s T=%zu |H|=%zu: %.3f s (fdr=%.4f ineff=%.4f regret=%.2f)\n",
                exaul::algo_name(algo).c_str(), config.horizon, config.grid_size, dt, result.fdr,
                result.ineff, result.regret);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled\n");
#endif
    std::printf("serial/parallel kernel times (best of 5), ratio > 1 means parallel is faster\n");
    for (std::size_t n : {100000u, 1000000u, 10000000u}) bench_kernels(n);
    bench_trial(exaul::Algo::Exaul);
    bench_trial(exaul::Algo::Exp3IxCa);
    bench_trial(exaul::Algo::EwCa);
    bench_trial(exaul::Algo::FixedArm);
    return 0;
}
