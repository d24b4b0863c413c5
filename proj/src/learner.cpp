#include "exaul/learner.hpp"

#include <cmath>
#include <stdexcept>

#include "exaul/estimators.hpp"
#include "exaul/kernels.hpp"
#include "exaul/unlock.hpp"

namespace exaul {

Algo parse_algo(const std::string& name) {
    if (name == "ew-ca") return Algo::EwCa;
    if (name == "exp3ix-ca") return Algo::Exp3IxCa;
    if (name == "exaul") return Algo::Exaul;
    if (name == "no-ca") return Algo::FixedArm;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algo_name(Algo algo) {
    switch (algo) {
        case Algo::EwCa: return "ew-ca";
        case Algo::Exp3IxCa: return "exp3ix-ca";
        case Algo::Exaul: return "exaul";
        case Algo::FixedArm: return "no-ca";
    }
    return "?";
}

RateSchedule default_rates(Algo algo, std::size_t horizon, const HypothesisGrid& grid) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const double t = static_cast<double>(horizon);
    const double log_arms = std::log(static_cast<double>(grid.size()));
    switch (algo) {
        case Algo::Exaul: {
            const double eta = std::sqrt(log_arms / t);
            return RateSchedule{eta, eta / 2.0};
        }
        case Algo::Exp3IxCa: {
            const double eta = std::sqrt(2.0 * log_arms / (t * static_cast<double>(grid.size())));
            return RateSchedule{eta, eta / 2.0};
        }
        case Algo::EwCa:
            return RateSchedule{std::sqrt(8.0 * log_arms / t), 0.0};
        case Algo::FixedArm:
            return RateSchedule{0.0, 0.0};
    }
    throw std::invalid_argument("unknown algorithm");
}

Learner::Learner(Algo algo, const HypothesisGrid& grid, std::size_t horizon, RateSchedule rates,
                 std::size_t fixed_index)
    : algo_(algo),
      grid_(grid),
      horizon_(horizon),
      rates_(rates),
      fixed_index_(fixed_index),
      cumulative_(grid.size(), 0.0),
      policy_(grid.size(), 0.0) {
    if (horizon_ < 1) throw std::invalid_argument("horizon must be >= 1");
    if (algo_ != Algo::FixedArm && !(rates_.eta > 0.0))
        throw std::invalid_argument("eta must be > 0");
    if (!(rates_.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    if (fixed_index_ >= grid_.size()) throw std::out_of_range("fixed arm index out of range");
}

double Learner::effective_eta() const {
    if (!anytime_) return rates_.eta;
    return rates_.eta * std::sqrt(static_cast<double>(horizon_) / static_cast<double>(step_));
}

double Learner::effective_gamma() const {
    if (!anytime_) return rates_.gamma;
    return rates_.gamma * std::sqrt(static_cast<double>(horizon_) / static_cast<double>(step_));
}

std::span<const double> Learner::current_policy() const {
    if (algo_ == Algo::FixedArm) {
        if (!policy_fresh_) {
            std::fill(policy_.begin(), policy_.end(), 0.0);
            policy_[fixed_index_] = 1.0;
            policy_fresh_ = true;
        }
        return policy_;
    }
    if (!policy_fresh_) {
        kernels::softmax(cumulative_, effective_eta(), policy_);
        policy_fresh_ = true;
    }
    return policy_;
}

std::size_t Learner::sample_arm(Rng& rng) const {
    const auto p = current_policy();
    const double u = rng.uniform();
    double c = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        c += p[k];
        if (u < c) return k;
    }
    return p.size() - 1;
}

void Learner::advance() {
    ++step_;
    policy_fresh_ = false;
}

void Learner::update_full(const RoundOutcome& round, const LossParams& params) {
    if (algo_ != Algo::EwCa)
        throw std::logic_error("full-feedback update requires the ew-ca learner");
    const std::size_t cut = grid_.cut_index(round.score);
    const double inc_accept = compute_loss(true, 1.0 - round.correctness, params).combined;
    const double inc_abstain = compute_loss(false, 1.0, params).combined;
    std::span<double> cum(cumulative_);
    kernels::add_constant(cum.subspan(0, cut + 1), inc_accept);
    kernels::add_constant(cum.subspan(cut + 1), inc_abstain);
    advance();
}

void Learner::update_bandit(std::size_t chosen_index, const RoundOutcome& round,
                            const LossParams& params) {
    if (chosen_index >= grid_.size()) throw std::out_of_range("chosen index out of range");
    const auto p = current_policy();
    const bool answered = accepts(grid_.value(chosen_index), round.score);
    const LossTerms loss = compute_loss(answered, round.feedback, params);
    cumulative_[chosen_index] += loss.combined / (effective_gamma() + p[chosen_index]);
    advance();
}

void Learner::update_unlocked(std::size_t chosen_index, const RoundOutcome& round,
                              const LossParams& params) {
    if (chosen_index >= grid_.size()) throw std::out_of_range("chosen index out of range");
    const auto p = current_policy();
    UnlockSet unlock = unlock_set(grid_, chosen_index, round.score);
    if (force_singleton_) unlock.lo = unlock.hi = chosen_index;
    if (!unlock.contains(chosen_index))
        throw std::logic_error("unlock set must contain the chosen arm");
    const LossTerms loss = compute_loss(unlock.answered, round.feedback, params);
    const double inc = unlock_increment(unlock, loss.combined, p, effective_gamma());
    std::span<double> cum(cumulative_);
    kernels::add_constant(cum.subspan(unlock.lo, unlock.count()), inc);
    advance();
}

void Learner::update(std::size_t chosen_index, const RoundOutcome& round,
                     const LossParams& params) {
    switch (algo_) {
        case Algo::EwCa: update_full(round, params); return;
        case Algo::Exp3IxCa: update_bandit(chosen_index, round, params); return;
        case Algo::Exaul: update_unlocked(chosen_index, round, params); return;
        case Algo::FixedArm: advance(); return;
    }
}

}  // namespace exaul
