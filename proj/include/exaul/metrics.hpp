#pragma once

#include <cstddef>
#include <vector>

#include "exaul/grid.hpp"
#include "exaul/loss.hpp"
#include "exaul/round.hpp"

namespace exaul {

// Running evaluation state for one trial: empirical FDR and inefficiency
// counters, the cumulative FDR risk, the realized loss, and per-arm
// hindsight loss accumulated through cut-index difference arrays (O(1) per
// round, O(|H|) to reconstruct).
class MetricsLedger {
public:
    MetricsLedger(const HypothesisGrid& grid, const LossParams& params);

    void record(std::size_t t, std::size_t chosen_index, const RoundOutcome& round,
                const LossTerms& loss);

    std::size_t rounds() const { return rounds_; }
    std::size_t answered_count() const { return answered_count_; }
    std::size_t abstain_count() const { return abstain_count_; }
    double error_mass() const { return error_mass_; }

    // error_mass / answered_count; alpha by convention when nothing was
    // answered.
    double fdr() const;
    double ineff() const;
    double fdr_risk() const { return fdr_risk_; }
    double realized_loss() const { return realized_loss_; }

    // Cumulative true loss per arm, reconstructed from the difference
    // accumulators.
    std::vector<double> per_arm_cumulative_loss() const;
    double hindsight_best_loss() const;
    // realized loss minus the best fixed arm's cumulative loss; may be
    // negative on a prefix.
    double hindsight_regret() const;

    const HypothesisGrid& grid() const { return grid_; }
    const LossParams& params() const { return params_; }

private:
    HypothesisGrid grid_;
    LossParams params_;
    std::size_t rounds_ = 0;
    std::size_t answered_count_ = 0;
    std::size_t abstain_count_ = 0;
    double error_mass_ = 0.0;
    double fdr_risk_ = 0.0;
    double realized_loss_ = 0.0;
    std::vector<double> accept_loss_diff_;   // +v on [0..cut]
    std::vector<double> abstain_loss_diff_;  // +v on [cut+1..H-1]
};

}  // namespace exaul
