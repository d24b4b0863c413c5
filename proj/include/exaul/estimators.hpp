#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "exaul/kernels.hpp"
#include "exaul/loss.hpp"
#include "exaul/unlock.hpp"

namespace exaul {

inline void validate_policy(std::span<const double> policy, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    const double s = kernels::sum(policy);
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("policy must sum to 1 within 1e-12");
}

// Shared increment of the unlocking estimator: loss / (gamma + M) with M
// the policy mass of the unlocked range. Because the unlock sets of all
// members coincide, this equals the double-indicator importance weight for
// every member arm (tested against the literal form).
inline double unlock_increment(const UnlockSet& unlock, double loss_value,
                               std::span<const double> policy, double gamma) {
    const double mass = kernels::sum(policy.subspan(unlock.lo, unlock.count()));
    if (gamma == 0.0 && mass == 0.0)
        throw std::domain_error("estimator denominator is zero; unlock set carries no policy mass");
    return loss_value / (gamma + mass);
}

// Estimated losses over all arms given the feedback unlocked by the chosen
// arm: members share one increment, non-members are zero.
inline std::vector<double> estimate_loss_exaul(const UnlockSet& unlock, const LossTerms& loss_on_set,
                                               std::span<const double> policy, double gamma) {
    validate_policy(policy, gamma);
    std::vector<double> est(policy.size(), 0.0);
    const double inc = unlock_increment(unlock, loss_on_set.combined, policy, gamma);
    for (std::size_t k = unlock.lo; k <= unlock.hi; ++k) est[k] = inc;
    return est;
}

// Importance-weighted estimator with only the chosen arm's loss observed:
// the singleton-unlock special case of the above.
inline std::vector<double> estimate_loss_ix(std::size_t chosen_index, double loss_value,
                                            std::span<const double> policy, double gamma) {
    validate_policy(policy, gamma);
    if (chosen_index >= policy.size()) throw std::out_of_range("chosen index out of range");
    if (gamma == 0.0 && policy[chosen_index] == 0.0)
        throw std::domain_error("estimator denominator is zero; chosen arm carries no policy mass");
    std::vector<double> est(policy.size(), 0.0);
    est[chosen_index] = loss_value / (gamma + policy[chosen_index]);
    return est;
}

}  // namespace exaul
