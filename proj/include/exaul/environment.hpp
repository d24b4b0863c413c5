#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "exaul/pool.hpp"
#include "exaul/rng.hpp"
#include "exaul/round.hpp"

namespace exaul {

enum class ScheduleKind {
    Stochastic,
    ShiftSingle,
    ShiftAlternating,
    ShiftGradual,
    Adversary,
};

ScheduleKind parse_schedule_kind(const std::string& name);
std::string schedule_kind_name(ScheduleKind kind);

struct AdversaryConfig {
    std::size_t phase_switch = 0;  // 0 resolves to T/5 at run time
    std::size_t window = 500;
    double initial_mix = 0.5;
    double step = 0.05;
    double mix_lo = 0.1;
    double mix_hi = 0.9;
};

// Immutable description of a round stream. Two pools are required for
// every shift kind and for the adversary.
struct Schedule {
    ScheduleKind kind = ScheduleKind::Stochastic;
    ExamplePool pool1;
    ExamplePool pool2;
    std::size_t chunk = 3000;        // alternating
    std::size_t switch_point = 0;    // single; 0 resolves to T/2 at run time
    AdversaryConfig adversary;

    void validate() const;
};

// Round draw for the non-adaptive kinds. Pure in (schedule, t, horizon,
// rng state); pools are sampled with replacement.
RoundOutcome schedule_next(const Schedule& schedule, std::size_t t, std::size_t horizon, Rng& rng);

// History-conditioned adversary: serves hard-but-overconfident entries
// during phase 1, then mixes them with easy-but-underconfident entries,
// hill-climbing the mix every `window` rounds toward a higher rate of
// (accepted and incorrect) or (abstained and correct) outcomes. Sees only
// the learner's decisions, never its policy.
class AdversaryState {
public:
    AdversaryState(const Schedule& schedule, std::size_t horizon);

    RoundOutcome next(std::size_t t, Rng& rng);
    // Record the learner's decision for the most recently served entry.
    void observe(bool answered);

    double mix_ratio() const { return mix_; }
    std::size_t fallback_count() const { return fallback_count_; }

private:
    const PoolEntry& draw(const std::vector<std::size_t>& quadrant, bool want_correct, Rng& rng);
    void adapt();

    const Schedule* schedule_;
    std::vector<PoolEntry> entries_;              // both pools merged
    std::vector<std::size_t> high_incorrect_;     // score >= 0.5, incorrect
    std::vector<std::size_t> low_correct_;        // score < 0.5, correct
    std::size_t fallback_high_incorrect_ = 0;     // nearest-score stand-ins
    std::size_t fallback_low_correct_ = 0;
    std::size_t phase_switch_;
    std::size_t window_;
    double mix_;
    double step_;
    double direction_ = -1.0;
    double last_objective_ = -1.0;
    bool have_last_objective_ = false;
    std::size_t window_hits_ = 0;
    std::size_t window_count_ = 0;
    std::size_t last_round_ = 0;
    double last_served_correct_ = 0.0;
    std::size_t fallback_count_ = 0;
};

}  // namespace exaul
