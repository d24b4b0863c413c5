#include "exaul/audit.hpp"

#include <cmath>
#include <stdexcept>

namespace exaul {

void AuditConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
}

double lemma1_rhs_value(std::size_t horizon, double ineff, double lambda, double regret) {
    const double t = static_cast<double>(horizon);
    return (t * (1.0 - ineff) + (1.0 + lambda) * regret) / lambda;
}

double fdr_gap_rhs_value(std::size_t horizon, double ineff, double regret) {
    const double t = static_cast<double>(horizon);
    const double rt = std::sqrt(t);
    return 1.0 / rt + (1.0 + rt) * regret / (t * rt * (1.0 - ineff));
}

double fdr_risk_bound_value(std::size_t horizon, std::size_t arms, double ineff, double delta) {
    const double t = static_cast<double>(horizon);
    const double log_arms = std::log(static_cast<double>(arms));
    const double tail =
        4.0 * std::sqrt(log_arms / t) + (1.0 / t + std::sqrt(1.0 / (t * log_arms))) *
                                            std::log(2.0 / delta);
    return (1.0 - ineff) / std::sqrt(t) + (1.0 + 1.0 / std::sqrt(t)) * tail;
}

double regret_bound_value(std::size_t horizon, std::size_t arms, double delta) {
    const double t = static_cast<double>(horizon);
    const double log_arms = std::log(static_cast<double>(arms));
    return 4.0 * std::sqrt(t * log_arms) + (1.0 + std::sqrt(t / log_arms)) * std::log(2.0 / delta);
}

AuditReport audit_bounds(const MetricsLedger& ledger, const LossParams& params,
                         std::size_t horizon, const RateSchedule& rates,
                         const AuditConfig& config) {
    config.validate();
    const std::size_t arms = ledger.grid().size();
    const double t = static_cast<double>(horizon);

    AuditReport report;
    report.fdr = ledger.fdr();
    report.ineff = ledger.ineff();
    report.regret = ledger.hindsight_regret();
    report.fdr_risk = ledger.fdr_risk();

    if (config.check_lemma1) {
        report.lemma1_rhs = lemma1_rhs_value(horizon, report.ineff, params.lambda, report.regret);
        report.lemma1_ok = report.fdr_risk <= report.lemma1_rhs + kPathwiseTol;
    }

    const bool lambda_is_sqrt_t =
        std::abs(params.lambda - std::sqrt(t)) <= 1e-9 * std::max(1.0, std::sqrt(t));
    report.fdrgap_applicable = lambda_is_sqrt_t;
    report.fdrgap_degenerate = ledger.answered_count() == 0;
    if (lambda_is_sqrt_t && !report.fdrgap_degenerate) {
        report.fdrgap_rhs = fdr_gap_rhs_value(horizon, report.ineff, report.regret);
        report.fdrgap_ok = report.fdr - params.alpha <= report.fdrgap_rhs + kPathwiseTol;
    }

    // Schedule precondition of the high-probability bounds:
    // eta = 2*gamma = sqrt(ln|H|/horizon).
    const double bound_eta = std::sqrt(std::log(static_cast<double>(arms)) / t);
    report.bounds_applicable = std::abs(rates.eta - bound_eta) <= 1e-12 &&
                               std::abs(2.0 * rates.gamma - rates.eta) <= 1e-12;

    if (config.check_fdr_bound) {
        report.fdrbound_rhs = fdr_risk_bound_value(horizon, arms, report.ineff, config.delta);
        report.fdrbound_ok = report.fdr_risk / t <= report.fdrbound_rhs + kPathwiseTol;
    }
    report.regbound_rhs = regret_bound_value(horizon, arms, config.delta);
    report.regbound_ok = report.regret <= report.regbound_rhs + kPathwiseTol;

    return report;
}

}  // namespace exaul
