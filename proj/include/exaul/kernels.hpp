#pragma once

#include <cstddef>
#include <span>

// Hot per-arm loops, each in a serial reference version and an
// OpenMP version. Reductions use a fixed block association (blocks of
// kBlock summed left-to-right, block results combined left-to-right), so
// serial and parallel results are bit-identical for any thread count.
// The unsuffixed entry points dispatch on size.
namespace exaul::kernels {

inline constexpr std::size_t kBlock = 2048;
inline constexpr std::size_t kParallelThreshold = 1u << 15;

double sum_serial(std::span<const double> x);
double sum_parallel(std::span<const double> x);
double sum(std::span<const double> x);

double min_value_serial(std::span<const double> x);
double min_value_parallel(std::span<const double> x);
double min_value(std::span<const double> x);

// out[i] = exp(-eta * (cum[i] - min(cum))), normalized to sum 1.
void softmax_serial(std::span<const double> cum, double eta, std::span<double> out);
void softmax_parallel(std::span<const double> cum, double eta, std::span<double> out);
void softmax(std::span<const double> cum, double eta, std::span<double> out);

void add_constant_serial(std::span<double> x, double v);
void add_constant_parallel(std::span<double> x, double v);
void add_constant(std::span<double> x, double v);

// Inclusive prefix sum with the same blocked association in both versions.
void prefix_sum_serial(std::span<const double> x, std::span<double> out);
void prefix_sum_parallel(std::span<const double> x, std::span<double> out);
void prefix_sum(std::span<const double> x, std::span<double> out);

}  // namespace exaul::kernels
