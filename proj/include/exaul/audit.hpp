#pragma once

#include <cstddef>

#include "exaul/learner.hpp"
#include "exaul/metrics.hpp"

namespace exaul {

// Slack allowed on pathwise inequalities to absorb accumulated float
// rounding over up to ~1e7 additions; genuine violations are O(1).
inline constexpr double kPathwiseTol = 1e-6;

struct AuditConfig {
    double delta = 0.01;  // failure probability for the probabilistic bounds
    bool check_lemma1 = true;
    bool check_fdr_bound = true;

    void validate() const;
};

// Right-hand sides of the audited inequalities. These functions are the
// single source for both the run-time audit and the log replay, so the two
// compute bit-identical values.
double lemma1_rhs_value(std::size_t horizon, double ineff, double lambda, double regret);
double fdr_gap_rhs_value(std::size_t horizon, double ineff, double regret);
double fdr_risk_bound_value(std::size_t horizon, std::size_t arms, double ineff, double delta);
double regret_bound_value(std::size_t horizon, std::size_t arms, double delta);

struct AuditReport {
    double fdr = 0.0;
    double ineff = 0.0;
    double regret = 0.0;
    double fdr_risk = 0.0;

    // Pathwise regret-to-FDR conversion: fdr_risk <= lemma1_rhs on every
    // trajectory. A violation indicates a bug, not bad luck.
    double lemma1_rhs = 0.0;
    bool lemma1_ok = true;

    // FDR-gap form of the conversion (requires lambda = sqrt(T); skipped
    // as degenerate when nothing was answered).
    double fdrgap_rhs = 0.0;
    bool fdrgap_ok = true;
    bool fdrgap_degenerate = false;
    bool fdrgap_applicable = false;

    // High-probability FDR-risk and regret bounds at confidence 1-delta
    // for the unlocking learner's rate schedule. Reported for every run;
    // `bounds_applicable` marks whether the schedule precondition held.
    double fdrbound_rhs = 0.0;
    bool fdrbound_ok = true;
    double regbound_rhs = 0.0;
    bool regbound_ok = true;
    bool bounds_applicable = false;
};

AuditReport audit_bounds(const MetricsLedger& ledger, const LossParams& params,
                         std::size_t horizon, const RateSchedule& rates,
                         const AuditConfig& config);

}  // namespace exaul
