#include "exaul/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "exaul/csv.hpp"
#include "exaul/grid.hpp"
#include "exaul/metrics.hpp"

namespace exaul {

LambdaSpec LambdaSpec::parse(const std::string& text) {
    if (text == "sqrtT") return LambdaSpec{true, 0.0};
    double v = 0.0;
    if (!csv::parse_real(text, v) || !(v >= 0.0))
        throw std::invalid_argument("lambda must be a non-negative real or 'sqrtT'");
    return LambdaSpec{false, v};
}

double LambdaSpec::resolve(std::size_t horizon) const {
    return sqrt_horizon ? std::sqrt(static_cast<double>(horizon)) : value;
}

void ExperimentConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (log_every < 1) throw std::invalid_argument("log-every must be >= 1");
    if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
    loss_params().validate();
    AuditConfig{delta}.validate();
    schedule.validate();
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index) {
    config.validate();
    const HypothesisGrid grid(config.grid_size);
    const LossParams params = config.loss_params();
    const RateSchedule rates = default_rates(config.algo, config.horizon, grid);

    const std::uint64_t trial_seed = derive_seed(config.base_seed, trial_index);
    Rng env_rng(derive_seed(trial_seed, 1));
    Rng learner_rng(derive_seed(trial_seed, 2));

    Learner learner(config.algo, grid, config.horizon, rates, /*fixed_index=*/0);
    learner.set_anytime(config.anytime_rates);
    MetricsLedger ledger(grid, params);

    const bool adversarial = config.schedule.kind == ScheduleKind::Adversary;
    std::unique_ptr<AdversaryState> adversary;
    if (adversarial) adversary = std::make_unique<AdversaryState>(config.schedule, config.horizon);

    TrialResult result;
    result.trial = trial_index;
    result.steps.reserve(config.horizon / config.log_every + 2);

    for (std::size_t t = 1; t <= config.horizon; ++t) {
        RoundOutcome round = adversarial
                                 ? adversary->next(t, env_rng)
                                 : schedule_next(config.schedule, t, config.horizon, env_rng);

        const std::size_t chosen = learner.sample_arm(learner_rng);
        const double tau = grid.value(chosen);
        const bool answered = accepts(tau, round.score);
        // The chosen arm's decision is the only thing that is graded;
        // abstentions record e = 1 by convention and it never enters the
        // loss margin.
        round.feedback = answered ? 1.0 - round.correctness : 1.0;

        const LossTerms loss = compute_loss(answered, round.feedback, params);
        ledger.record(t, chosen, round, loss);
        learner.update(chosen, round, params);
        if (adversarial) adversary->observe(answered);

        if (t % config.log_every == 0 || t == config.horizon) {
            result.steps.push_back(StepRow{trial_index, t, chosen, tau, round.score,
                                           answered ? 1 : 0, round.feedback, loss.combined,
                                           ledger.fdr(), ledger.ineff()});
        }
    }

    const AuditConfig audit_config{config.delta};
    result.audit = audit_bounds(ledger, params, config.horizon, rates, audit_config);
    result.fdr = result.audit.fdr;
    result.ineff = result.audit.ineff;
    result.regret = result.audit.regret;
    result.fdr_risk = result.audit.fdr_risk;
    if (adversary) result.adversary_fallbacks = adversary->fallback_count();
    return result;
}

MetricAggregate aggregate_metric(std::vector<double> values) {
    MetricAggregate agg;
    if (values.empty()) return agg;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1.0) : 0.0;

    std::sort(values.begin(), values.end());
    auto percentile = [&](double p) {
        const double pos = p / 100.0 * (n - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - std::floor(pos);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    agg.mean = mean;
    agg.stddev = std::sqrt(var);
    agg.p5 = percentile(5);
    agg.p25 = percentile(25);
    agg.p50 = percentile(50);
    agg.p75 = percentile(75);
    agg.p95 = percentile(95);
    return agg;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentSummary summary;
    summary.trials.resize(config.trials);

    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(config.trials); ++i) {
        try {
            const auto idx = static_cast<std::size_t>(i);
            summary.trials[idx] = run_trial(config, idx);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> fdrs, ineffs, regrets, risks;
    std::size_t lemma1 = 0, fdrgap = 0, fdrgap_total = 0, fdrbound = 0, regbound = 0;
    for (const auto& trial : summary.trials) {
        fdrs.push_back(trial.fdr);
        ineffs.push_back(trial.ineff);
        regrets.push_back(trial.regret);
        risks.push_back(trial.fdr_risk);
        lemma1 += trial.audit.lemma1_ok ? 1 : 0;
        if (trial.audit.fdrgap_applicable && !trial.audit.fdrgap_degenerate) {
            ++fdrgap_total;
            fdrgap += trial.audit.fdrgap_ok ? 1 : 0;
        }
        fdrbound += trial.audit.fdrbound_ok ? 1 : 0;
        regbound += trial.audit.regbound_ok ? 1 : 0;
    }
    const double n = static_cast<double>(config.trials);
    summary.fdr = aggregate_metric(fdrs);
    summary.ineff = aggregate_metric(ineffs);
    summary.regret = aggregate_metric(regrets);
    summary.fdr_risk = aggregate_metric(risks);
    summary.lemma1_pass_rate = static_cast<double>(lemma1) / n;
    summary.fdrgap_pass_rate =
        fdrgap_total == 0 ? 1.0 : static_cast<double>(fdrgap) / static_cast<double>(fdrgap_total);
    summary.fdrbound_pass_rate = static_cast<double>(fdrbound) / n;
    summary.regbound_pass_rate = static_cast<double>(regbound) / n;

    if (!config.output_dir.empty()) {
        const std::filesystem::path dir(config.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        std::vector<SummaryRow> rows;
        rows.reserve(summary.trials.size());
        for (const auto& trial : summary.trials) rows.push_back(summary_row_from(trial, config));
        write_summary_csv(dir / "summary.csv", rows);
        write_steps_csv(dir / "steps.csv", summary.trials);
        write_report(dir / "report.txt", config, summary);
    }
    return summary;
}

SummaryRow summary_row_from(const TrialResult& result, const ExperimentConfig& config) {
    SummaryRow row;
    row.trial = result.trial;
    row.horizon = config.horizon;
    row.alpha = config.alpha;
    row.lambda = config.lambda.resolve(config.horizon);
    row.fdr = result.fdr;
    row.ineff = result.ineff;
    row.regret = result.regret;
    row.fdr_risk = result.fdr_risk;
    row.lemma1_rhs = result.audit.lemma1_rhs;
    row.lemma1_ok = result.audit.lemma1_ok;
    row.fdrbound_ok = result.audit.fdrbound_ok;
    return row;
}

namespace {
constexpr const char* kSummaryHeader =
    "trial,T,alpha,lambda,fdr,ineff,regret,fdr_risk,lemma1_rhs,lemma1_ok,fdrbound_ok";
constexpr const char* kStepsHeader = "trial,t,arm,tau,score,accepted,e,loss,cum_fdr,cum_ineff";
}  // namespace

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        out << r.trial << ',' << r.horizon << ',' << csv::real17(r.alpha) << ','
            << csv::real17(r.lambda) << ',' << csv::real17(r.fdr) << ',' << csv::real17(r.ineff)
            << ',' << csv::real17(r.regret) << ',' << csv::real17(r.fdr_risk) << ','
            << csv::real17(r.lemma1_rhs) << ',' << (r.lemma1_ok ? 1 : 0) << ','
            << (r.fdrbound_ok ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kSummaryHeader)
        throw std::runtime_error("unexpected summary header in " + path.string());
    std::vector<SummaryRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = csv::split(line);
        std::uint64_t trial = 0, horizon = 0, l1 = 0, fb = 0;
        SummaryRow r;
        if (f.size() != 11 || !csv::parse_u64(f[0], trial) || !csv::parse_u64(f[1], horizon) ||
            !csv::parse_real(f[2], r.alpha) || !csv::parse_real(f[3], r.lambda) ||
            !csv::parse_real(f[4], r.fdr) || !csv::parse_real(f[5], r.ineff) ||
            !csv::parse_real(f[6], r.regret) || !csv::parse_real(f[7], r.fdr_risk) ||
            !csv::parse_real(f[8], r.lemma1_rhs) || !csv::parse_u64(f[9], l1) ||
            !csv::parse_u64(f[10], fb))
            throw std::runtime_error("malformed summary row at line " + std::to_string(line_no));
        r.trial = trial;
        r.horizon = horizon;
        r.lemma1_ok = l1 != 0;
        r.fdrbound_ok = fb != 0;
        rows.push_back(r);
    }
    return rows;
}

void write_steps_csv(const std::filesystem::path& path, const std::vector<TrialResult>& trials) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kStepsHeader << '\n';
    for (const auto& trial : trials) {
        for (const auto& s : trial.steps) {
            out << s.trial << ',' << s.t << ',' << s.arm << ',' << csv::real17(s.tau) << ','
                << csv::real17(s.score) << ',' << s.accepted << ',' << csv::real17(s.e) << ','
                << csv::real17(s.loss) << ',' << csv::real17(s.cum_fdr) << ','
                << csv::real17(s.cum_ineff) << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<StepRow> read_steps_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kStepsHeader)
        throw std::runtime_error("unexpected steps header in " + path.string());
    std::vector<StepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = csv::split(line);
        std::uint64_t trial = 0, t = 0, arm = 0, accepted = 0;
        StepRow r;
        if (f.size() != 10 || !csv::parse_u64(f[0], trial) || !csv::parse_u64(f[1], t) ||
            !csv::parse_u64(f[2], arm) || !csv::parse_real(f[3], r.tau) ||
            !csv::parse_real(f[4], r.score) || !csv::parse_u64(f[5], accepted) ||
            !csv::parse_real(f[6], r.e) || !csv::parse_real(f[7], r.loss) ||
            !csv::parse_real(f[8], r.cum_fdr) || !csv::parse_real(f[9], r.cum_ineff))
            throw std::runtime_error("malformed step row at line " + std::to_string(line_no));
        r.trial = trial;
        r.t = t;
        r.arm = arm;
        r.accepted = static_cast<int>(accepted);
        rows.push_back(r);
    }
    return rows;
}

void write_report(const std::filesystem::path& path, const ExperimentConfig& config,
                  const ExperimentSummary& summary) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto metric = [&](const char* name, const MetricAggregate& m) {
        out << name << "_mean=" << csv::real17(m.mean) << '\n'
            << name << "_std=" << csv::real17(m.stddev) << '\n'
            << name << "_p5=" << csv::real17(m.p5) << '\n'
            << name << "_p25=" << csv::real17(m.p25) << '\n'
            << name << "_p50=" << csv::real17(m.p50) << '\n'
            << name << "_p75=" << csv::real17(m.p75) << '\n'
            << name << "_p95=" << csv::real17(m.p95) << '\n';
    };
    std::size_t fallbacks = 0;
    for (const auto& t : summary.trials) fallbacks += t.adversary_fallbacks;

    out << "algo=" << algo_name(config.algo) << '\n';
    out << "env=" << schedule_kind_name(config.schedule.kind) << '\n';
    out << "T=" << config.horizon << '\n';
    out << "alpha=" << csv::real17(config.alpha) << '\n';
    out << "lambda=" << csv::real17(config.lambda.resolve(config.horizon)) << '\n';
    out << "grid_size=" << config.grid_size << '\n';
    out << "trials=" << config.trials << '\n';
    out << "base_seed=" << config.base_seed << '\n';
    out << "log_every=" << config.log_every << '\n';
    out << "delta=" << csv::real17(config.delta) << '\n';
    metric("fdr", summary.fdr);
    metric("ineff", summary.ineff);
    metric("regret", summary.regret);
    metric("fdr_risk", summary.fdr_risk);
    out << "lemma1_pass_rate=" << csv::real17(summary.lemma1_pass_rate) << '\n';
    out << "fdrgap_pass_rate=" << csv::real17(summary.fdrgap_pass_rate) << '\n';
    out << "fdrbound_pass_rate=" << csv::real17(summary.fdrbound_pass_rate) << '\n';
    out << "regbound_pass_rate=" << csv::real17(summary.regbound_pass_rate) << '\n';
    out << "adversary_fallbacks=" << fallbacks << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::map<std::string, std::string> read_report_keys(const std::filesystem::path& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) return kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find('=');
        if (pos == std::string::npos) continue;
        kv[line.substr(0, pos)] = line.substr(pos + 1);
    }
    return kv;
}

}  // namespace

AuditRunResult audit_outputs(const std::filesystem::path& dir) {
    AuditRunResult result;
    const auto complain = [&](const std::string& what) {
        result.ok = false;
        result.issues.push_back(what);
    };

    std::vector<SummaryRow> rows;
    try {
        rows = read_summary_csv(dir / "summary.csv");
    } catch (const std::exception& e) {
        complain(e.what());
        return result;
    }
    std::vector<StepRow> steps;
    try {
        steps = read_steps_csv(dir / "steps.csv");
    } catch (const std::exception& e) {
        complain(e.what());
        return result;
    }
    const auto report_kv = read_report_keys(dir / "report.txt");

    // Derived-column and inequality checks. The right-hand sides are
    // recomputed through the same functions the run used, so agreement is
    // exact.
    for (const auto& r : rows) {
        const double rhs = lemma1_rhs_value(r.horizon, r.ineff, r.lambda, r.regret);
        if (rhs != r.lemma1_rhs)
            complain("trial " + std::to_string(r.trial) + ": lemma1_rhs column " +
                     csv::real17(r.lemma1_rhs) + " != recomputed " + csv::real17(rhs));
        const bool ok = r.fdr_risk <= rhs + kPathwiseTol;
        if (ok != r.lemma1_ok)
            complain("trial " + std::to_string(r.trial) + ": lemma1_ok column " +
                     std::string(r.lemma1_ok ? "1" : "0") + " != recomputed " + (ok ? "1" : "0"));
        if (!ok)
            complain("trial " + std::to_string(r.trial) +
                     ": pathwise bound violated: fdr_risk=" + csv::real17(r.fdr_risk) +
                     " > lemma1_rhs=" + csv::real17(rhs));
    }

    // FDR-risk bound flag consistency when the report carries the config.
    const auto arms_it = report_kv.find("grid_size");
    const auto delta_it = report_kv.find("delta");
    if (arms_it != report_kv.end() && delta_it != report_kv.end()) {
        std::uint64_t arms = 0;
        double delta = 0.0;
        if (csv::parse_u64(arms_it->second, arms) && csv::parse_real(delta_it->second, delta)) {
            for (const auto& r : rows) {
                const double rhs = fdr_risk_bound_value(r.horizon, arms, r.ineff, delta);
                const bool ok =
                    r.fdr_risk / static_cast<double>(r.horizon) <= rhs + kPathwiseTol;
                if (ok != r.fdrbound_ok)
                    complain("trial " + std::to_string(r.trial) + ": fdrbound_ok column " +
                             std::string(r.fdrbound_ok ? "1" : "0") + " != recomputed " +
                             (ok ? "1" : "0"));
            }
        }
    }

    // Step-log replay, per trial. With a full (stride-1) log every counter
    // is recounted; otherwise the logged rows are checked for internal
    // consistency and the final row against the summary.
    std::size_t pos = 0;
    for (const auto& r : rows) {
        std::size_t answered = 0, abstained = 0;
        double error_mass = 0.0, risk = 0.0;
        bool full = true;
        std::size_t expected_t = 0;
        std::size_t n_rows = 0;
        double last_cum_fdr = 0.0, last_cum_ineff = 0.0;
        std::size_t last_t = 0;

        while (pos < steps.size() && steps[pos].trial == r.trial) {
            const auto& s = steps[pos];
            ++n_rows;
            if (s.t != expected_t + 1) full = false;
            expected_t = s.t;
            if (s.accepted) {
                ++answered;
                error_mass += s.e;
                risk += s.e - r.alpha;
            } else {
                ++abstained;
            }
            last_cum_fdr = s.cum_fdr;
            last_cum_ineff = s.cum_ineff;
            last_t = s.t;
            ++pos;
        }
        if (n_rows == 0) {
            complain("trial " + std::to_string(r.trial) + ": no step rows");
            continue;
        }
        if (last_t != r.horizon)
            complain("trial " + std::to_string(r.trial) + ": last logged step t=" +
                     std::to_string(last_t) + " != T=" + std::to_string(r.horizon));
        if (last_cum_fdr != r.fdr)
            complain("trial " + std::to_string(r.trial) + ": final cum_fdr " +
                     csv::real17(last_cum_fdr) + " != summary fdr " + csv::real17(r.fdr));
        if (last_cum_ineff != r.ineff)
            complain("trial " + std::to_string(r.trial) + ": final cum_ineff " +
                     csv::real17(last_cum_ineff) + " != summary ineff " + csv::real17(r.ineff));
        if (full && expected_t == r.horizon) {
            const double replay_fdr =
                answered == 0 ? r.alpha : error_mass / static_cast<double>(answered);
            const double replay_ineff =
                static_cast<double>(abstained) / static_cast<double>(r.horizon);
            if (replay_fdr != r.fdr)
                complain("trial " + std::to_string(r.trial) + ": replayed fdr " +
                         csv::real17(replay_fdr) + " != summary fdr " + csv::real17(r.fdr));
            if (replay_ineff != r.ineff)
                complain("trial " + std::to_string(r.trial) + ": replayed ineff " +
                         csv::real17(replay_ineff) + " != summary ineff " + csv::real17(r.ineff));
            if (risk != r.fdr_risk)
                complain("trial " + std::to_string(r.trial) + ": replayed fdr_risk " +
                         csv::real17(risk) + " != summary fdr_risk " + csv::real17(r.fdr_risk));
        }
    }
    if (pos != steps.size()) complain("steps.csv has rows for trials missing from summary.csv");

    return result;
}

}  // namespace exaul
