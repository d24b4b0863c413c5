#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace exaul {

// Largest representable score. Scores are clamped below 1 so that the top
// threshold (tau = 1) abstains on every round and acts as a zero-risk
// fallback arm.
inline constexpr double kMaxScore = 1.0 - 0x1p-52;

inline double clamp_score(double s) {
    if (!(s >= 0.0)) return 0.0;
    return s > kMaxScore ? kMaxScore : s;
}

// Uniform threshold grid tau_k = k / (size - 1), one bandit arm per
// threshold. Arm 0 (tau = 0) accepts every score; the top arm (tau = 1)
// abstains on every clamped score.
class HypothesisGrid {
public:
    explicit HypothesisGrid(std::size_t size) : size_(size) {
        if (size_ < 2) throw std::invalid_argument("grid size must be >= 2");
    }

    std::size_t size() const { return size_; }

    // Single division, no accumulation drift; value(size-1) == 1.0 exactly.
    double value(std::size_t k) const {
        if (k >= size_) throw std::out_of_range("grid index out of range");
        return static_cast<double>(k) / static_cast<double>(size_ - 1);
    }

    // Largest k with tau_k <= score. floor(score * (size-1)) plus a
    // one-step correction against the exact grid values, so rounding at
    // grid points cannot put the cut on the wrong side.
    std::size_t cut_index(double score) const {
        const double n = static_cast<double>(size_ - 1);
        auto k = static_cast<std::size_t>(std::floor(score * n));
        if (k > size_ - 2) k = size_ - 2;
        if (k + 1 <= size_ - 2 && value(k + 1) <= score) ++k;
        while (k > 0 && value(k) > score) --k;
        return k;
    }

private:
    std::size_t size_;
};

// Selection rule: answer iff score >= tau (non-strict; ties accept).
inline bool accepts(double tau, double score) { return score >= tau; }

}  // namespace exaul
