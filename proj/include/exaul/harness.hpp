#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exaul/audit.hpp"
#include "exaul/environment.hpp"
#include "exaul/learner.hpp"
#include "exaul/loss.hpp"

namespace exaul {

// Trade-off weight given either explicitly or as "sqrtT", resolved once
// against the horizon before the run.
struct LambdaSpec {
    bool sqrt_horizon = true;
    double value = 0.0;

    static LambdaSpec parse(const std::string& text);
    double resolve(std::size_t horizon) const;
};

struct ExperimentConfig {
    Algo algo = Algo::Exaul;
    Schedule schedule;
    double alpha = 0.05;
    LambdaSpec lambda;
    std::size_t grid_size = 1000;
    std::size_t horizon = 30000;
    std::size_t trials = 1;
    std::uint64_t base_seed = 1;
    std::size_t log_every = 10;
    double delta = 0.01;
    std::string output_dir;  // empty: keep results in memory only
    bool anytime_rates = false;

    LossParams loss_params() const { return LossParams{alpha, lambda.resolve(horizon)}; }
    void validate() const;
};

struct StepRow {
    std::size_t trial = 0;
    std::size_t t = 0;
    std::size_t arm = 0;
    double tau = 0.0;
    double score = 0.0;
    int accepted = 0;
    double e = 0.0;
    double loss = 0.0;
    double cum_fdr = 0.0;
    double cum_ineff = 0.0;
};

struct TrialResult {
    std::size_t trial = 0;
    double fdr = 0.0;
    double ineff = 0.0;
    double regret = 0.0;
    double fdr_risk = 0.0;
    AuditReport audit;
    std::size_t adversary_fallbacks = 0;
    std::vector<StepRow> steps;  // one row per log_every stride, plus t = T
};

struct SummaryRow {
    std::size_t trial = 0;
    std::size_t horizon = 0;
    double alpha = 0.0;
    double lambda = 0.0;
    double fdr = 0.0;
    double ineff = 0.0;
    double regret = 0.0;
    double fdr_risk = 0.0;
    double lemma1_rhs = 0.0;
    bool lemma1_ok = false;
    bool fdrbound_ok = false;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;
    double p5 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0;
};

MetricAggregate aggregate_metric(std::vector<double> values);

struct ExperimentSummary {
    std::vector<TrialResult> trials;
    MetricAggregate fdr;
    MetricAggregate ineff;
    MetricAggregate regret;
    MetricAggregate fdr_risk;
    double lemma1_pass_rate = 0.0;
    double fdrgap_pass_rate = 0.0;
    double fdrbound_pass_rate = 0.0;
    double regbound_pass_rate = 0.0;
};

// Trial seeds derive from (base_seed, trial_index) through the splitmix64
// mixing in rng.hpp; environment and learner streams are further
// sub-derived, so trials are reproducible independently of each other.
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index);

// Runs all trials (in parallel when OpenMP is enabled; per-trial output is
// independent of the execution order), aggregates, and writes
// summary.csv / steps.csv / report.txt into output_dir when set.
ExperimentSummary run_experiment(const ExperimentConfig& config);

SummaryRow summary_row_from(const TrialResult& result, const ExperimentConfig& config);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);
void write_steps_csv(const std::filesystem::path& path, const std::vector<TrialResult>& trials);
std::vector<StepRow> read_steps_csv(const std::filesystem::path& path);
void write_report(const std::filesystem::path& path, const ExperimentConfig& config,
                  const ExperimentSummary& summary);

// Replays an output directory: recomputes what the step logs allow,
// re-derives every derived summary column through the same formulas, and
// rechecks the pathwise inequality. Probabilistic bound flags are
// consistency-checked but a legitimately failed bound is not an audit
// failure.
struct AuditRunResult {
    bool ok = true;
    std::vector<std::string> issues;
};

AuditRunResult audit_outputs(const std::filesystem::path& dir);

}  // namespace exaul
