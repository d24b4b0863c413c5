#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exaul/grid.hpp"
#include "exaul/loss.hpp"
#include "exaul/rng.hpp"
#include "exaul/round.hpp"

namespace exaul {

enum class Algo { EwCa, Exp3IxCa, Exaul, FixedArm };

Algo parse_algo(const std::string& name);      // ew-ca | exp3ix-ca | exaul | no-ca
std::string algo_name(Algo algo);

struct RateSchedule {
    double eta = 0.0;
    double gamma = 0.0;
};

// Horizon-tuned rates: eta = sqrt(ln|H|/T) with gamma = eta/2 for the
// unlocking learner, eta = sqrt(2 ln|H| / (T|H|)) with gamma = eta/2 for
// the singleton-feedback learner, eta = sqrt(8 ln|H| / T) with gamma = 0
// under full feedback. Losses are normalized to [0,1].
RateSchedule default_rates(Algo algo, std::size_t horizon, const HypothesisGrid& grid);

// Per-algorithm policy state: cumulative estimated losses per arm, with
// the policy derived on demand as softmax(-eta * cumulative). Weights are
// never materialized.
class Learner {
public:
    Learner(Algo algo, const HypothesisGrid& grid, std::size_t horizon, RateSchedule rates,
            std::size_t fixed_index = 0);

    Algo algo() const { return algo_; }
    std::size_t step() const { return step_; }
    std::size_t horizon() const { return horizon_; }
    const HypothesisGrid& grid() const { return grid_; }
    RateSchedule rates() const { return rates_; }
    std::span<const double> cumulative_estimates() const { return cumulative_; }

    // Anytime variant with eta_t, gamma_t scaled by sqrt(T/t); off by default.
    void set_anytime(bool on) { anytime_ = on; }
    // Test hook: truncate unlock sets to the chosen singleton.
    void set_force_singleton_unlock(bool on) { force_singleton_ = on; }

    // softmax(-eta * cumulative) with min-subtraction; point mass for the
    // fixed-arm learner. Deterministic in the state.
    std::span<const double> current_policy() const;

    // Inverse-CDF draw over the policy in ascending arm order; the last
    // arm absorbs residual rounding mass.
    std::size_t sample_arm(Rng& rng) const;

    // Full-feedback update: every arm is charged its own loss, which
    // collapses to one increment per side of the cut.
    void update_full(const RoundOutcome& round, const LossParams& params);

    // Singleton-feedback update: only the chosen arm's estimate moves.
    void update_bandit(std::size_t chosen_index, const RoundOutcome& round,
                       const LossParams& params);

    // Unlocking update: every arm on the chosen arm's side of the score
    // receives the shared importance-weighted increment.
    void update_unlocked(std::size_t chosen_index, const RoundOutcome& round,
                         const LossParams& params);

    // Dispatch to the algorithm's own update (no-op for fixed-arm).
    void update(std::size_t chosen_index, const RoundOutcome& round, const LossParams& params);

private:
    double effective_eta() const;
    double effective_gamma() const;
    void advance();

    Algo algo_;
    HypothesisGrid grid_;
    std::size_t horizon_;
    RateSchedule rates_;
    std::size_t fixed_index_;
    std::size_t step_ = 1;
    bool anytime_ = false;
    bool force_singleton_ = false;
    std::vector<double> cumulative_;
    mutable std::vector<double> policy_;
    mutable bool policy_fresh_ = false;
};

}  // namespace exaul
