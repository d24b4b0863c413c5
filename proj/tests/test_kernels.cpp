#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "exaul/kernels.hpp"
#include "exaul/rng.hpp"

using namespace exaul;
namespace k = exaul::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform() * 2.0 - 0.5;
    return x;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit-for-bit across sizes and thread counts") {
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
#endif
    for (std::size_t n : {1u, 2u, 100u, 2047u, 2048u, 2049u, 10000u, 70000u}) {
        const auto x = random_vector(n, 1000 + n);
        CHECK(k::sum_serial(x) == k::sum_parallel(x));
        CHECK(k::min_value_serial(x) == k::min_value_parallel(x));

        std::vector<double> a(n), b(n);
        k::softmax_serial(x, 0.37, a);
        k::softmax_parallel(x, 0.37, b);
        CHECK(a == b);

        k::prefix_sum_serial(x, a);
        k::prefix_sum_parallel(x, b);
        CHECK(a == b);

        auto c = x, d = x;
        k::add_constant_serial(c, 0.125);
        k::add_constant_parallel(d, 0.125);
        CHECK(c == d);
    }
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
}

TEST_CASE("dispatching entry points match the serial reference") {
    for (std::size_t n : {5u, 1000u, 40000u}) {
        const auto x = random_vector(n, 7 + n);
        CHECK(k::sum(x) == k::sum_serial(x));
        CHECK(k::min_value(x) == k::min_value_serial(x));
        std::vector<double> a(n), b(n);
        k::softmax(x, 1.1, a);
        k::softmax_serial(x, 1.1, b);
        CHECK(a == b);
        k::prefix_sum(x, a);
        k::prefix_sum_serial(x, b);
        CHECK(a == b);
    }
}

TEST_CASE("sum matches a long-double reference") {
    for (std::size_t n : {3u, 999u, 65537u}) {
        const auto x = random_vector(n, 99 + n);
        long double ref = 0.0L;
        for (double v : x) ref += static_cast<long double>(v);
        CHECK(k::sum(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
    }
}

TEST_CASE("min matches std reference") {
    const auto x = random_vector(12345, 5);
    CHECK(k::min_value(x) == *std::min_element(x.begin(), x.end()));
}

TEST_CASE("prefix sum endpoints and totals") {
    const auto x = random_vector(5000, 55);
    std::vector<double> out(x.size());
    k::prefix_sum(x, out);
    CHECK(out[0] == x[0]);
    CHECK(out.back() == doctest::Approx(k::sum(x)).epsilon(1e-13));
    long double run = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        run += x[i];
        CHECK(out[i] == doctest::Approx(static_cast<double>(run)).epsilon(1e-12));
    }
}

TEST_CASE("softmax normalizes, orders by cumulative loss, and is shift-invariant") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(512);
        std::vector<double> cum(n);
        for (auto& v : cum) v = rng.uniform() * 50.0;
        const double eta = 0.01 + rng.uniform();
        std::vector<double> p(n);
        k::softmax(cum, eta, p);
        double total = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
        for (std::size_t i = 1; i < n; ++i)
            if (cum[i - 1] < cum[i]) CHECK(p[i - 1] >= p[i]);

        auto shifted = cum;
        for (auto& v : shifted) v += 123.5;
        std::vector<double> q(n);
        k::softmax(shifted, eta, q);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
}

TEST_CASE("softmax survives extreme cumulative values without overflow") {
    std::vector<double> cum{0.0, 1e9, 2e9, 5e12};
    std::vector<double> p(4);
    k::softmax(cum, 1.0, p);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : p) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}
