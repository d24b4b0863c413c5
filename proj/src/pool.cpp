#include "exaul/pool.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "exaul/csv.hpp"
#include "exaul/grid.hpp"
#include "exaul/rng.hpp"

namespace exaul {

Calibration parse_calibration(const std::string& name) {
    if (name == "well") return Calibration::Well;
    if (name == "over") return Calibration::Over;
    if (name == "under") return Calibration::Under;
    throw std::invalid_argument("unknown calibration: " + name);
}

namespace {

double miscalibration_exponent(Calibration c) {
    switch (c) {
        case Calibration::Well: return 1.0;
        case Calibration::Over: return 0.5;
        case Calibration::Under: return 2.0;
    }
    throw std::invalid_argument("unknown calibration");
}

// Scores follow Beta(kSpread*m, kSpread*(1-m)). kSpread < 1 gives the
// U-shaped density typical of confidence scores (mass near both ends); m
// is solved so the marginal error rate hits the target.
constexpr double kSpread = 0.8;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// E[(1-s)^c] for s ~ Beta(a, b) equals B(a, b+c) / B(a, b); decreasing in m.
double expected_error(double m, double c) {
    const double a = kSpread * m;
    const double b = kSpread * (1.0 - m);
    return std::exp(log_beta(a, b + c) - log_beta(a, b));
}

double solve_mean(double target, double c) {
    double lo = 1e-9, hi = 1.0 - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (expected_error(mid, c) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Johnk's Beta sampler; exact for a, b <= 1 and deterministic in the rng
// stream.
double sample_beta(double a, double b, Rng& rng) {
    while (true) {
        const double x = std::pow(rng.uniform(), 1.0 / a);
        const double y = std::pow(rng.uniform(), 1.0 / b);
        if (x + y > 0.0 && x + y <= 1.0) return x / (x + y);
    }
}

}  // namespace

ExamplePool gen_pool(std::size_t n, std::uint64_t seed, Calibration calibration,
                     double incorrect_rate) {
    if (n < 1) throw std::invalid_argument("pool size must be >= 1");
    if (!(incorrect_rate > 0.0 && incorrect_rate < 1.0))
        throw std::invalid_argument("incorrect rate must lie in (0,1)");

    const double c = miscalibration_exponent(calibration);
    const double m = solve_mean(incorrect_rate, c);
    const double a = kSpread * m;
    const double b = kSpread * (1.0 - m);

    Rng rng(derive_seed(seed, 0));
    ExamplePool pool;
    pool.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double score = clamp_score(sample_beta(a, b, rng));
        const double p_incorrect = std::pow(1.0 - score, c);
        const double correctness = rng.uniform() < p_incorrect ? 0.0 : 1.0;
        pool.entries.push_back(PoolEntry{score, correctness});
    }
    pool.name = "synthetic";
    return pool;
}

ExamplePool load_pool(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool file: " + path.string());

    ExamplePool pool;
    pool.name = path.stem().string();
    std::string line;
    std::size_t line_no = 0;
    bool saw_any = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "score,correct") continue;  // header is optional but expected
        saw_any = true;
        const auto fields = csv::split(line);
        double score = 0.0, correct = 0.0;
        if (fields.size() != 2 || !csv::parse_real(fields[0], score) ||
            !csv::parse_real(fields[1], correct))
            throw std::runtime_error("malformed pool row at line " + std::to_string(line_no) +
                                     ": " + line);
        if (!(correct >= 0.0 && correct <= 1.0))
            throw std::runtime_error("correctness outside [0,1] at line " + std::to_string(line_no));
        pool.entries.push_back(PoolEntry{clamp_score(score), correct});
    }
    if (!saw_any) throw std::runtime_error("pool file has no entries: " + path.string());
    return pool;
}

void save_pool(const ExamplePool& pool, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pool file: " + path.string());
    out << "score,correct\n";
    for (const auto& e : pool.entries)
        out << csv::real17(e.score) << ',' << csv::real17(e.correctness) << '\n';
    if (!out) throw std::runtime_error("failed writing pool file: " + path.string());
}

}  // namespace exaul
