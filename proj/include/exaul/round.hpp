#pragma once

namespace exaul {

// One environment step. `score` and `correctness` come from the
// environment; `feedback` is the realized e_t and is filled in by the
// harness once the chosen arm's decision is known (1 - correctness when
// answered, 1 by convention when abstained).
struct RoundOutcome {
    double score = 0.0;        // f_t, in [0,1) after clamping
    double correctness = 0.0;  // latent c_t, in [0,1]; 1 = correct
    double feedback = 0.0;     // e_t, in [0,1]
};

}  // namespace exaul
