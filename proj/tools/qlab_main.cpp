#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "qlab/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qlab - train small deep-Q runs and turn them into diagnostics"};
    app.require_subcommand(1);

    std::string config_path, run_id, out_root, mdp_path;
    std::optional<std::uint64_t> seed;
    qlab::cli::DiagnoseOptions dopts;
    qlab::cli::CompareOptions copts;

    auto* train_cmd = app.add_subcommand("train", "run one configured training job");
    train_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
    train_cmd->add_option("--run", run_id, "run id (default: config hash prefix + seed)");
    train_cmd->add_option("--out", out_root, "output root (default: $QLAB_OUT_ROOT or ./runs)");
    train_cmd->add_option("--seed", seed, "override the config's seed");

    auto* diag_cmd = app.add_subcommand("diagnose", "emit diagnostic reports for a finished run");
    diag_cmd->add_option("--run", run_id, "run id under the output root")->required();
    diag_cmd->add_option("--out", out_root, "output root");
    diag_cmd->add_option("--window", dopts.window, "tail window fraction (default 0.2)");
    diag_cmd->add_option("--anchors", dopts.anchors, "tracking anchor steps (default: N/8 N/4 N/2)");
    diag_cmd->add_option("--horizon", dopts.horizon, "tracking horizon T (default 1)");
    diag_cmd->add_option("--substeps", dopts.substeps, "Euler substeps per interval (default 4)");
    diag_cmd->add_option("--tests", dopts.tests, "test-function ids (default: whole bank)");
    diag_cmd->add_option("--gap-threshold", dopts.gap_threshold, "stationarity gap bound");
    diag_cmd->add_option("--ratio-threshold", dopts.ratio_threshold, "Martingale tail ratio bound");
    diag_cmd->add_option("--grad-threshold", dopts.grad_threshold,
                         "final/initial averaged-gradient norm ratio bound");
    diag_cmd->add_option("--tracking-tolerance", dopts.tracking_tolerance,
                         "halving-shift bound per 1 + ||theta||");
    diag_cmd->add_option("--max-trapped", dopts.max_trapped,
                         "tolerated zero-mass optimal regions (default 0)");

    auto* oracle_cmd = app.add_subcommand("oracle", "solve an MDP exactly and write oracle files");
    oracle_cmd->add_option("--mdp", mdp_path, "MDP definition file (JSON)")->required();
    oracle_cmd->add_option("--run", run_id, "output directory name (default: oracle-<digest>)");
    oracle_cmd->add_option("--out", out_root, "output root");

    auto* cmp_cmd = app.add_subcommand("replay-compare",
                                       "run the config with and without replay on one seed");
    cmp_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
    cmp_cmd->add_option("--run", run_id, "run id (default: config hash prefix + seed + -cmp)");
    cmp_cmd->add_option("--out", out_root, "output root");
    cmp_cmd->add_option("--seed", seed, "override the config's seed");
    cmp_cmd->add_option("--window", copts.window, "tail window fraction (default 0.2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : qlab::cli::kExitInput;
    }

    if (app.got_subcommand(train_cmd)) {
        qlab::cli::TrainOptions opts;
        opts.out_root = out_root;
        opts.run_id = run_id;
        opts.seed = seed;
        return qlab::cli::cmd_train(config_path, opts, std::cout, std::cerr);
    }
    if (app.got_subcommand(diag_cmd)) {
        dopts.out_root = out_root;
        return qlab::cli::cmd_diagnose(run_id, dopts, std::cout, std::cerr);
    }
    if (app.got_subcommand(oracle_cmd)) {
        qlab::cli::OracleOptions opts;
        opts.out_root = out_root;
        opts.run_id = run_id;
        return qlab::cli::cmd_oracle(mdp_path, opts, std::cout, std::cerr);
    }
    copts.out_root = out_root;
    copts.run_id = run_id;
    copts.seed = seed;
    return qlab::cli::cmd_replay_compare(config_path, copts, std::cout, std::cerr);
}
