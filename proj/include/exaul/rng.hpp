#pragma once

#include <cstdint>
#include <random>

namespace exaul {

// splitmix64 finalizer. Trial and stream seeds are derived as
//   seed = mix64(base + (index + 1) * 0x9E3779B97F4A7C15)
// which is the splitmix64 sequence evaluated at `index`, so trial seeds
// are reproducible under random access.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base + index * 0x9E3779B97F4A7C15ull);
}

// mt19937_64 with hand-rolled uniform conversions. The standard pins the
// engine's output but not the distributions', so draws are produced
// directly from raw 64-bit words to keep streams identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    // Uniform in {0, ..., n-1} via the multiply-shift range reduction.
    std::size_t uniform_index(std::size_t n) {
        const auto x = next_u64();
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n)) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace exaul
