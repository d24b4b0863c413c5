#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace exaul {

struct PoolEntry {
    double score;        // in [0, 1) after clamping
    double correctness;  // in [0, 1]; 1 = correct
};

struct ExamplePool {
    std::vector<PoolEntry> entries;
    std::string name;
};

enum class Calibration { Well, Over, Under };

Calibration parse_calibration(const std::string& name);  // well | over | under

// Synthetic score/correctness pool. Scores follow Beta(theta, 1) (sampled
// by inverse CDF), correctness is Bernoulli with incorrectness probability
// (1 - score)^c, where c = 1 reads the score at face value (well), c = 1/2
// inflates errors at high scores (over), and c = 2 deflates them (under).
// theta is solved so the marginal incorrect rate equals `incorrect_rate`.
ExamplePool gen_pool(std::size_t n, std::uint64_t seed, Calibration calibration,
                     double incorrect_rate);

// CSV with header `score,correct`; scores clamped into [0,1) on read.
// Parse failures report the 1-based file line.
ExamplePool load_pool(const std::filesystem::path& path);
void save_pool(const ExamplePool& pool, const std::filesystem::path& path);

}  // namespace exaul
