#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qlab/cli/manifest.hpp"

namespace qlab::cli {

// Exit codes are a total function of the outcome class.
inline constexpr int kExitOk = 0;        // success, all checks pass
inline constexpr int kExitInput = 1;     // unreadable/invalid inputs or artifacts
inline constexpr int kExitDiverged = 2;  // training crossed the divergence guard
inline constexpr int kExitProperty = 3;  // a configured diagnostic threshold failed

// Default output root: $QLAB_OUT_ROOT, falling back to ./runs.
inline constexpr const char* kOutRootEnv = "QLAB_OUT_ROOT";
std::string default_out_root();

struct TrainOptions {
    std::string out_root;                // empty -> default_out_root()
    std::string run_id;                  // empty -> <config hash prefix>-s<seed>
    std::optional<std::uint64_t> seed;   // overrides the config's seed
};

struct DiagnoseOptions {
    std::string out_root;
    double window = 0.2;             // tail window fraction
    std::vector<long> anchors;       // empty -> N/8, N/4, N/2 where the horizon fits
    double horizon = 1.0;            // tracking horizon T
    int substeps = 4;                // Euler substeps per interval
    std::vector<std::string> tests;  // test-function ids; empty -> the whole bank
    double gap_threshold = 0.05;     // stationarity gap
    double ratio_threshold = 0.1;    // Martingale tail/range ratio
    double grad_threshold = 0.1;     // final/initial averaged-gradient norm ratio
    double tracking_tolerance = 1e-3;  // halving shift vs 1 + ||theta||
    long max_trapped = 0;            // tolerated zero-mass optimal regions
};

struct OracleOptions {
    std::string out_root;
    std::string run_id;  // empty -> oracle-<mdp digest prefix>
};

struct CompareOptions {
    std::string out_root;
    std::string run_id;  // empty -> <config hash prefix>-s<seed>-cmp
    std::optional<std::uint64_t> seed;
    double window = 0.2;
};

// Runs the configured job and writes config/record/checkpoints/manifest under
// the run directory. Exit 0 completed, 2 diverged, 1 invalid config.
int cmd_train(const std::string& config_path, const TrainOptions& opts, std::ostream& out,
              std::ostream& err);

// Rebuilds the run and emits stationarity/Martingale/tracking/averaged-
// gradient/undertraining reports plus a summary. Exit 0 if every configured
// threshold passes, 3 if any fails, 1 on missing or inconsistent artifacts.
int cmd_diagnose(const std::string& run_id, const DiagnoseOptions& opts, std::ostream& out,
                 std::ostream& err);

// Writes Q*, V*, pi*, and the stationary distributions of the pi*-greedy
// kernel. Exit 0, or 1 on an invalid MDP file.
int cmd_oracle(const std::string& mdp_path, const OracleOptions& opts, std::ostream& out,
               std::ostream& err);

// Runs the config as written (replay) and with replay disabled (online) on
// the same seed, and reports tail supports, entropies, the TV distance, and
// both stationarity gaps. Exit codes as cmd_train.
int cmd_replay_compare(const std::string& config_path, const CompareOptions& opts,
                       std::ostream& out, std::ostream& err);

}  // namespace qlab::cli
