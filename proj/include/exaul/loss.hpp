#pragma once

#include <stdexcept>

namespace exaul {

struct LossParams {
    double alpha;   // target FDR level, in (0,1)
    double lambda;  // trade-off weight, >= 0

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must lie in (0,1)");
        if (!(lambda >= 0.0))
            throw std::invalid_argument("lambda must be >= 0");
    }
};

// One round's loss decomposition: the abstention indicator a, the FDR
// margin d, and the normalized combined loss (a + lambda*d) / (1 + lambda).
struct LossTerms {
    double inefficiency;  // a, in {0,1}
    double fdr_margin;    // d, in [0,1]
    double combined;      // in [0,1]
};

// Combined loss for one (decision, feedback) pair:
//   a = 1(abstained)
//   d = 1(answered)*e - alpha*1(answered) + alpha
//   combined = (a + lambda*d) / (1 + lambda)
// The indicator products are grouped so d evaluates exactly to e when
// answered and exactly to alpha when abstained; the combined value then
// agrees bit-for-bit with the two-branch closed form
// (lambda*e/(1+lambda), (1+lambda*alpha)/(1+lambda)).
inline LossTerms compute_loss(bool answered, double feedback_e, const LossParams& params) {
    params.validate();
    if (!(feedback_e >= 0.0 && feedback_e <= 1.0))
        throw std::domain_error("feedback must lie in [0,1]");
    const double ind = answered ? 1.0 : 0.0;
    const double a = 1.0 - ind;
    const double d = ind * feedback_e + params.alpha * (1.0 - ind);
    const double combined = (a + params.lambda * d) / (1.0 + params.lambda);
    return LossTerms{a, d, combined};
}

}  // namespace exaul
