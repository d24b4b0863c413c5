#include "exaul/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace exaul {

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "stochastic") return ScheduleKind::Stochastic;
    if (name == "shift-single") return ScheduleKind::ShiftSingle;
    if (name == "shift-alternating") return ScheduleKind::ShiftAlternating;
    if (name == "shift-gradual") return ScheduleKind::ShiftGradual;
    if (name == "adversary") return ScheduleKind::Adversary;
    throw std::invalid_argument("unknown environment: " + name);
}

std::string schedule_kind_name(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Stochastic: return "stochastic";
        case ScheduleKind::ShiftSingle: return "shift-single";
        case ScheduleKind::ShiftAlternating: return "shift-alternating";
        case ScheduleKind::ShiftGradual: return "shift-gradual";
        case ScheduleKind::Adversary: return "adversary";
    }
    return "?";
}

void Schedule::validate() const {
    if (pool1.entries.empty()) throw std::invalid_argument("pool 1 is empty");
    if (kind != ScheduleKind::Stochastic && pool2.entries.empty())
        throw std::invalid_argument(schedule_kind_name(kind) + " requires a second pool");
    if (kind == ScheduleKind::ShiftAlternating && chunk < 1)
        throw std::invalid_argument("chunk must be >= 1");
}

namespace {

RoundOutcome from_entry(const PoolEntry& e) { return RoundOutcome{e.score, e.correctness, 0.0}; }

const PoolEntry& uniform_entry(const ExamplePool& pool, Rng& rng) {
    return pool.entries[rng.uniform_index(pool.entries.size())];
}

}  // namespace

RoundOutcome schedule_next(const Schedule& schedule, std::size_t t, std::size_t horizon, Rng& rng) {
    if (t < 1 || t > horizon) throw std::out_of_range("round index outside [1, horizon]");
    switch (schedule.kind) {
        case ScheduleKind::Stochastic:
            return from_entry(uniform_entry(schedule.pool1, rng));
        case ScheduleKind::ShiftSingle: {
            const std::size_t sw = schedule.switch_point > 0 ? schedule.switch_point : horizon / 2;
            return from_entry(uniform_entry(t <= sw ? schedule.pool1 : schedule.pool2, rng));
        }
        case ScheduleKind::ShiftAlternating: {
            const bool second = ((t - 1) / schedule.chunk) % 2 == 1;
            return from_entry(uniform_entry(second ? schedule.pool2 : schedule.pool1, rng));
        }
        case ScheduleKind::ShiftGradual: {
            const double p2 = static_cast<double>(t) / static_cast<double>(horizon);
            const bool second = rng.uniform() < p2;
            return from_entry(uniform_entry(second ? schedule.pool2 : schedule.pool1, rng));
        }
        case ScheduleKind::Adversary:
            throw std::logic_error("adversary rounds are produced by AdversaryState");
    }
    throw std::logic_error("unknown schedule kind");
}

namespace {

bool entry_correct(const PoolEntry& e) { return e.correctness >= 0.5; }

}  // namespace

AdversaryState::AdversaryState(const Schedule& schedule, std::size_t horizon)
    : schedule_(&schedule),
      phase_switch_(schedule.adversary.phase_switch > 0 ? schedule.adversary.phase_switch
                                                        : std::max<std::size_t>(1, horizon / 5)),
      window_(std::max<std::size_t>(1, schedule.adversary.window)),
      mix_(schedule.adversary.initial_mix),
      step_(schedule.adversary.step) {
    schedule.validate();
    entries_ = schedule.pool1.entries;
    entries_.insert(entries_.end(), schedule.pool2.entries.begin(), schedule.pool2.entries.end());

    std::size_t best_incorrect = entries_.size(), best_correct = entries_.size();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const bool correct = entry_correct(entries_[i]);
        const bool high = entries_[i].score >= 0.5;
        if (high && !correct) high_incorrect_.push_back(i);
        if (!high && correct) low_correct_.push_back(i);
        if (!correct && (best_incorrect == entries_.size() ||
                         entries_[i].score > entries_[best_incorrect].score))
            best_incorrect = i;
        if (correct && (best_correct == entries_.size() ||
                        entries_[i].score < entries_[best_correct].score))
            best_correct = i;
    }
    if (best_incorrect == entries_.size() || best_correct == entries_.size())
        throw std::invalid_argument("adversary pools need both correct and incorrect entries");
    fallback_high_incorrect_ = best_incorrect;
    fallback_low_correct_ = best_correct;
}

const PoolEntry& AdversaryState::draw(const std::vector<std::size_t>& quadrant, bool want_correct,
                                      Rng& rng) {
    if (quadrant.empty()) {
        ++fallback_count_;
        return entries_[want_correct ? fallback_low_correct_ : fallback_high_incorrect_];
    }
    return entries_[quadrant[rng.uniform_index(quadrant.size())]];
}

RoundOutcome AdversaryState::next(std::size_t t, Rng& rng) {
    const PoolEntry* served;
    if (t <= phase_switch_) {
        served = &draw(high_incorrect_, false, rng);
    } else if (rng.bernoulli(mix_)) {
        served = &draw(high_incorrect_, false, rng);
    } else {
        served = &draw(low_correct_, true, rng);
    }
    last_round_ = t;
    last_served_correct_ = served->correctness;
    return from_entry(*served);
}

void AdversaryState::observe(bool answered) {
    if (last_round_ <= phase_switch_) return;  // mix only acts in phase 2
    const bool correct = last_served_correct_ >= 0.5;
    const bool hit = (answered && !correct) || (!answered && correct);
    window_hits_ += hit ? 1u : 0u;
    if (++window_count_ == window_) adapt();
}

void AdversaryState::adapt() {
    const double objective =
        static_cast<double>(window_hits_) / static_cast<double>(window_count_);
    if (have_last_objective_ && objective < last_objective_) direction_ = -direction_;
    last_objective_ = objective;
    have_last_objective_ = true;
    mix_ = std::clamp(mix_ + direction_ * step_, schedule_->adversary.mix_lo,
                      schedule_->adversary.mix_hi);
    window_hits_ = 0;
    window_count_ = 0;
}

}  // namespace exaul
