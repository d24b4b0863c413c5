#include "exaul/metrics.hpp"

#include <cassert>
#include <stdexcept>

#include "exaul/kernels.hpp"

namespace exaul {

MetricsLedger::MetricsLedger(const HypothesisGrid& grid, const LossParams& params)
    : grid_(grid),
      params_(params),
      accept_loss_diff_(grid.size() + 1, 0.0),
      abstain_loss_diff_(grid.size() + 1, 0.0) {
    params_.validate();
}

void MetricsLedger::record(std::size_t t, std::size_t chosen_index, const RoundOutcome& round,
                           const LossTerms& loss) {
    (void)t;
    if (chosen_index >= grid_.size()) throw std::out_of_range("chosen index out of range");
    const bool answered = loss.inefficiency == 0.0;
    assert(answered == accepts(grid_.value(chosen_index), round.score));

    ++rounds_;
    if (answered) {
        ++answered_count_;
        error_mass_ += round.feedback;
        fdr_risk_ += round.feedback - params_.alpha;
    } else {
        ++abstain_count_;
    }
    realized_loss_ += loss.combined;

    // Hindsight per-arm losses take two values per round: the accepting
    // side [0..cut] pays lambda*(1-c)/(1+lambda), the abstaining side pays
    // (1+lambda*alpha)/(1+lambda).
    const std::size_t cut = grid_.cut_index(round.score);
    const double v_accept = compute_loss(true, 1.0 - round.correctness, params_).combined;
    const double v_abstain = compute_loss(false, 1.0, params_).combined;
    accept_loss_diff_[0] += v_accept;
    accept_loss_diff_[cut + 1] -= v_accept;
    abstain_loss_diff_[cut + 1] += v_abstain;
}

double MetricsLedger::fdr() const {
    if (answered_count_ == 0) return params_.alpha;
    return error_mass_ / static_cast<double>(answered_count_);
}

double MetricsLedger::ineff() const {
    if (rounds_ == 0) return 0.0;
    return static_cast<double>(abstain_count_) / static_cast<double>(rounds_);
}

std::vector<double> MetricsLedger::per_arm_cumulative_loss() const {
    const std::size_t n = grid_.size();
    std::vector<double> accept(n), abstain(n), total(n);
    kernels::prefix_sum(std::span<const double>(accept_loss_diff_.data(), n), accept);
    kernels::prefix_sum(std::span<const double>(abstain_loss_diff_.data(), n), abstain);
    for (std::size_t k = 0; k < n; ++k) total[k] = accept[k] + abstain[k];
    return total;
}

double MetricsLedger::hindsight_best_loss() const {
    const auto totals = per_arm_cumulative_loss();
    return kernels::min_value(totals);
}

double MetricsLedger::hindsight_regret() const { return realized_loss_ - hindsight_best_loss(); }

}  // namespace exaul
