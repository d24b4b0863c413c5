#include "exaul/cli.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exaul/csv.hpp"
#include "exaul/harness.hpp"
#include "exaul/pool.hpp"

namespace exaul {

namespace {

int cmd_gen_pool(std::size_t n, std::uint64_t seed, const std::string& calibration,
                 double incorrect_rate, const std::string& out) {
    const auto pool = gen_pool(n, seed, parse_calibration(calibration), incorrect_rate);
    save_pool(pool, out);
    std::printf("wrote %zu entries to %s\n", pool.entries.size(), out.c_str());
    return 0;
}

void print_metric(const char* name, const MetricAggregate& m) {
    std::printf("%-10s mean=%-12.6g std=%-12.6g p5=%-12.6g p25=%-12.6g p50=%-12.6g p75=%-12.6g p95=%-12.6g\n",
                name, m.mean, m.stddev, m.p5, m.p25, m.p50, m.p75, m.p95);
}

int cmd_run(const ExperimentConfig& config) {
    const auto summary = run_experiment(config);
    std::printf("algo=%s env=%s T=%zu trials=%zu lambda=%s\n", algo_name(config.algo).c_str(),
                schedule_kind_name(config.schedule.kind).c_str(), config.horizon, config.trials,
                csv::real17(config.lambda.resolve(config.horizon)).c_str());
    print_metric("fdr", summary.fdr);
    print_metric("ineff", summary.ineff);
    print_metric("regret", summary.regret);
    print_metric("fdr_risk", summary.fdr_risk);
    std::printf("pass rates: lemma1=%g fdrgap=%g fdrbound=%g regbound=%g\n",
                summary.lemma1_pass_rate, summary.fdrgap_pass_rate, summary.fdrbound_pass_rate,
                summary.regbound_pass_rate);
    if (!config.output_dir.empty())
        std::printf("wrote %s/{summary.csv,steps.csv,report.txt}\n", config.output_dir.c_str());
    return 0;
}

int cmd_audit(const std::string& dir) {
    const auto result = audit_outputs(dir);
    if (result.ok) {
        std::printf("audit ok: %s\n", dir.c_str());
        return 0;
    }
    std::printf("audit FAILED: %s\n", dir.c_str());
    for (const auto& issue : result.issues) std::printf("  %s\n", issue.c_str());
    return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"online conformal abstention simulator"};
    app.require_subcommand(1);

    // gen-pool
    auto* gen = app.add_subcommand("gen-pool", "generate a synthetic score/correctness pool");
    std::size_t gen_n = 1000;
    std::uint64_t gen_seed = 1;
    std::string gen_calibration = "well";
    double gen_rate = 0.3;
    std::string gen_out = "pool.csv";
    gen->add_option("--n", gen_n, "number of entries")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generation seed")->capture_default_str();
    gen->add_option("--calibration", gen_calibration, "well|over|under")->capture_default_str();
    gen->add_option("--incorrect-rate", gen_rate, "target marginal error rate in (0,1)")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output CSV path")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "run a multi-trial experiment");
    std::string run_algo = "exaul";
    std::string run_env = "stochastic";
    std::string run_pool, run_pool2;
    std::size_t run_horizon = 30000;
    double run_alpha = 0.05;
    std::string run_lambda = "sqrtT";
    std::size_t run_grid = 1000;
    std::size_t run_trials = 1;
    std::uint64_t run_seed = 1;
    std::size_t run_log_every = 10;
    double run_delta = 0.01;
    std::string run_out = "results";
    std::size_t run_switch = 0;
    std::size_t run_chunk = 3000;
    std::size_t run_phase_switch = 0;
    std::size_t run_window = 500;
    run->add_option("--algo", run_algo, "exaul|exp3ix-ca|ew-ca|no-ca")->capture_default_str();
    run->add_option("--env", run_env,
                    "stochastic|shift-single|shift-alternating|shift-gradual|adversary")
        ->capture_default_str();
    run->add_option("--pool", run_pool, "pool CSV (required)")->capture_default_str();
    run->add_option("--pool2", run_pool2, "second pool CSV (shift/adversary)")
        ->capture_default_str();
    run->add_option("--T", run_horizon, "time horizon")->capture_default_str();
    run->add_option("--alpha", run_alpha, "target FDR level")->capture_default_str();
    run->add_option("--lambda", run_lambda, "trade-off weight or 'sqrtT'")->capture_default_str();
    run->add_option("--grid-size", run_grid, "number of threshold arms")->capture_default_str();
    run->add_option("--trials", run_trials, "number of trials")->capture_default_str();
    run->add_option("--seed", run_seed, "base seed")->capture_default_str();
    run->add_option("--log-every", run_log_every, "step-log stride")->capture_default_str();
    run->add_option("--delta", run_delta, "bound-check failure probability")
        ->capture_default_str();
    run->add_option("--out", run_out, "output directory")->capture_default_str();
    run->add_option("--switch", run_switch, "shift-single switch round (0: T/2)")
        ->capture_default_str();
    run->add_option("--chunk", run_chunk, "shift-alternating chunk length")->capture_default_str();
    run->add_option("--phase-switch", run_phase_switch, "adversary phase-1 length (0: T/5)")
        ->capture_default_str();
    run->add_option("--window", run_window, "adversary adaptation window")->capture_default_str();

    // audit
    auto* audit = app.add_subcommand("audit", "replay and verify a run's outputs");
    std::string audit_dir = "results";
    audit->add_option("--run", audit_dir, "run output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_pool(gen_n, gen_seed, gen_calibration, gen_rate, gen_out);
        if (audit->parsed()) return cmd_audit(audit_dir);

        // run
        if (run_pool.empty()) {
            std::fprintf(stderr, "run requires --pool\n");
            return 2;
        }
        ExperimentConfig config;
        config.algo = parse_algo(run_algo);
        config.schedule.kind = parse_schedule_kind(run_env);
        config.schedule.pool1 = load_pool(run_pool);
        if (!run_pool2.empty()) config.schedule.pool2 = load_pool(run_pool2);
        config.schedule.chunk = run_chunk;
        config.schedule.switch_point = run_switch;
        config.schedule.adversary.phase_switch = run_phase_switch;
        config.schedule.adversary.window = run_window;
        config.alpha = run_alpha;
        config.lambda = LambdaSpec::parse(run_lambda);
        config.grid_size = run_grid;
        config.horizon = run_horizon;
        config.trials = run_trials;
        config.base_seed = run_seed;
        config.log_every = run_log_every;
        config.delta = run_delta;
        config.output_dir = run_out;
        config.validate();
        return cmd_run(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace exaul
