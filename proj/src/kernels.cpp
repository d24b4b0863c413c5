#include "exaul/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace exaul::kernels {

namespace {

inline std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

inline double fold_block(std::span<const double> x, std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(lo + kBlock, x.size());
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
}

inline bool use_parallel(std::size_t n) {
#ifdef _OPENMP
    return n >= kParallelThreshold && omp_get_max_threads() > 1;
#else
    (void)n;
    return false;
#endif
}

}  // namespace

double sum_serial(std::span<const double> x) {
    const std::size_t nb = block_count(x.size());
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) total += fold_block(x, b);
    return total;
}

double sum_parallel(std::span<const double> x) {
    const std::size_t nb = block_count(x.size());
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b)
        partial[static_cast<std::size_t>(b)] = fold_block(x, static_cast<std::size_t>(b));
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum(std::span<const double> x) {
    return use_parallel(x.size()) ? sum_parallel(x) : sum_serial(x);
}

double min_value_serial(std::span<const double> x) {
    double m = x[0];
    for (double v : x) m = std::min(m, v);
    return m;
}

double min_value_parallel(std::span<const double> x) {
    double m = x[0];
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : m)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i)
        m = std::min(m, x[static_cast<std::size_t>(i)]);
    return m;
}

double min_value(std::span<const double> x) {
    return use_parallel(x.size()) ? min_value_parallel(x) : min_value_serial(x);
}

void softmax_serial(std::span<const double> cum, double eta, std::span<double> out) {
    const double m = min_value_serial(cum);
    for (std::size_t i = 0; i < cum.size(); ++i) out[i] = std::exp(-eta * (cum[i] - m));
    const double s = sum_serial(out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= s;
}

void softmax_parallel(std::span<const double> cum, double eta, std::span<double> out) {
    const double m = min_value_parallel(cum);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cum.size()); ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = std::exp(-eta * (cum[k] - m));
    }
    const double s = sum_parallel(out);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
        out[static_cast<std::size_t>(i)] /= s;
}

void softmax(std::span<const double> cum, double eta, std::span<double> out) {
    if (use_parallel(cum.size()))
        softmax_parallel(cum, eta, out);
    else
        softmax_serial(cum, eta, out);
}

void add_constant_serial(std::span<double> x, double v) {
    for (double& e : x) e += v;
}

void add_constant_parallel(std::span<double> x, double v) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i)
        x[static_cast<std::size_t>(i)] += v;
}

void add_constant(std::span<double> x, double v) {
    if (use_parallel(x.size()))
        add_constant_parallel(x, v);
    else
        add_constant_serial(x, v);
}

namespace {

// Shared two-pass layout: per-block running sums offset by the fold of the
// preceding blocks. Keeping one layout for both versions makes them
// bit-identical.
inline void prefix_fill_block(std::span<const double> x, std::span<double> out, std::size_t b,
                              double offset) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(lo + kBlock, x.size());
    double run = offset;
    for (std::size_t i = lo; i < hi; ++i) {
        run += x[i];
        out[i] = run;
    }
}

}  // namespace

void prefix_sum_serial(std::span<const double> x, std::span<double> out) {
    const std::size_t nb = block_count(x.size());
    double offset = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        prefix_fill_block(x, out, b, offset);
        offset += fold_block(x, b);
    }
}

void prefix_sum_parallel(std::span<const double> x, std::span<double> out) {
    const std::size_t nb = block_count(x.size());
    std::vector<double> offset(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b)
        offset[static_cast<std::size_t>(b)] = fold_block(x, static_cast<std::size_t>(b));
    double run = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const double s = offset[b];
        offset[b] = run;
        run += s;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b)
        prefix_fill_block(x, out, static_cast<std::size_t>(b), offset[static_cast<std::size_t>(b)]);
}

void prefix_sum(std::span<const double> x, std::span<double> out) {
    if (use_parallel(x.size()))
        prefix_sum_parallel(x, out);
    else
        prefix_sum_serial(x, out);
}

}  // namespace exaul::kernels
