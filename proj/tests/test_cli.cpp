#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "qlab/cli/commands.hpp"
#include "qlab/cli/manifest.hpp"
#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"
#include "qlab/envs/benchmarks.hpp"
#include "qlab/envs/mdp.hpp"

using namespace qlab::cli;
namespace fs = std::filesystem;
using qlab::InputError;
using qlab::read_text_file;
using qlab::write_text_file;

namespace {

// Fresh scratch tree per binary invocation; every case works in its own child.
fs::path scratch(const std::string& name) {
    static const fs::path root = [] {
        fs::path r = fs::current_path() / "cli_scratch";
        fs::remove_all(r);
        fs::create_directories(r);
        return r;
    }();
    fs::path dir = root / name;
    fs::create_directories(dir);
    return dir;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// One self-looping state, two actions with distinct rewards. A greedy run on
// it settles almost immediately, so every diagnostic check should go green.
qlab::envs::Mdp pinned_mdp() {
    qlab::envs::Mdp m;
    m.states = {{0.0}};
    m.n_actions = 2;
    m.kernel = {{{{0, 1.0}}, {{0, 1.0}}}};
    m.reward = {{0.3, 0.7}};
    m.discount = 0.5;
    m.initial_dist = {1.0};
    return m;
}

std::string chain_config(const std::string& env_path, long steps, std::uint64_t seed) {
    std::ostringstream s;
    s << "{\n"
      << "  \"env\": {\"path\": \"" << env_path << "\"},\n"
      << "  \"network\": {\"hidden\": [6], \"sublayer\": [4, 4],\n"
      << "    \"activation\": [\"tanh\", \"sigmoid\"], \"seed\": " << seed << "},\n"
      << "  \"schedule\": {\"c\": 0.5, \"n0\": 10, \"p\": 0.6},\n"
      << "  \"policy\": {\"mode\": \"epsilon_greedy\", \"eps0\": 1.0, \"decay\": 0.999,"
      << " \"floor\": 0.01},\n"
      << "  \"run\": {\"steps\": " << steps << ", \"checkpoint_every\": 200}\n"
      << "}\n";
    return s.str();
}

int run_train(const std::string& config, const fs::path& out_root,
              std::string* err_text = nullptr) {
    TrainOptions opts;
    opts.out_root = out_root.string();
    std::ostringstream out, err;
    const int rc = cmd_train(config, opts, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

RunManifest sample_manifest() {
    RunManifest m;
    m.run_id = "abc-s7";
    m.config_hash = "0123456789abcdef";
    m.seed = 7;
    m.status = "completed";
    m.steps = 42;
    m.diverged_at = -1;
    m.tie_count = 3;
    m.env_path = "/tmp/env.json";
    m.checkpoint_paths = {"checkpoints/step_0.json", "checkpoints/step_42.json"};
    m.report_paths = {"reports/summary.json"};
    m.final_checkpoint_digest = "feedfacefeedface";
    return m;
}

}  // namespace

TEST_CASE("manifest round-trips through json") {
    const RunManifest m = sample_manifest();
    const RunManifest back = manifest_from_json_text(manifest_to_json_text(m), "buffer");
    CHECK(back == m);

    const fs::path dir = scratch("manifest_roundtrip");
    save_manifest(m, (dir / "manifest.json").string());
    CHECK((load_manifest((dir / "manifest.json").string()) == m));
}

TEST_CASE("manifest parsing rejects malformed documents") {
    CHECK_THROWS_AS(manifest_from_json_text("not json", "buf"), InputError);
    CHECK_THROWS_AS(manifest_from_json_text("[1, 2]", "buf"), InputError);

    nlohmann::json j = nlohmann::json::parse(manifest_to_json_text(sample_manifest()));
    nlohmann::json bad_status = j;
    bad_status["status"] = "sideways";
    CHECK_THROWS_WITH_AS(
        manifest_from_json_text(bad_status.dump(), "buf"),
        doctest::Contains("status"), InputError);

    nlohmann::json missing = j;
    missing.erase("seed");
    CHECK_THROWS_AS(manifest_from_json_text(missing.dump(), "buf"), InputError);

    nlohmann::json wrong_type = j;
    wrong_type["steps"] = "many";
    CHECK_THROWS_AS(manifest_from_json_text(wrong_type.dump(), "buf"), InputError);
}

TEST_CASE("train writes a completed run even with no steps") {
    const fs::path dir = scratch("train_zero");
    qlab::envs::save_mdp(pinned_mdp(), (dir / "pinned.json").string());
    write_text_file((dir / "cfg.json").string(), chain_config("pinned.json", 0, 5));

    const int rc = run_train((dir / "cfg.json").string(), dir / "out");
    CHECK(rc == kExitOk);

    const fs::path run_dir = dir / "out" / fs::directory_iterator(dir / "out")->path().filename();
    const RunManifest m = load_manifest((run_dir / "manifest.json").string());
    CHECK(m.status == "completed");
    CHECK(m.steps == 0);
    CHECK(m.checkpoint_paths == std::vector<std::string>{"checkpoints/step_0.json"});
    CHECK(read_text_file((run_dir / "record.csv").string()) ==
          "n,state,action,reward,next_state,gamma,batch,checkpoint\n");
    CHECK(fs::exists(run_dir / "config.json"));
}

TEST_CASE("train rejects an out-of-range schedule before writing artifacts") {
    const fs::path dir = scratch("train_badcfg");
    qlab::envs::save_mdp(pinned_mdp(), (dir / "pinned.json").string());
    std::string cfg = chain_config("pinned.json", 100, 5);
    cfg.replace(cfg.find("\"p\": 0.6"), 8, "\"p\": 0.4");
    write_text_file((dir / "cfg.json").string(), cfg);

    std::string err;
    const int rc = run_train((dir / "cfg.json").string(), dir / "out", &err);
    CHECK(rc == kExitInput);
    CHECK(contains(err, "schedule.p"));
    CHECK(!fs::exists(dir / "out"));
}

TEST_CASE("training twice with one seed is byte-identical") {
    const fs::path dir = scratch("train_repeat");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());
    write_text_file((dir / "cfg.json").string(), chain_config("chain.json", 400, 11));

    CHECK(run_train((dir / "cfg.json").string(), dir / "a") == kExitOk);
    CHECK(run_train((dir / "cfg.json").string(), dir / "b") == kExitOk);

    const std::string run_id = fs::directory_iterator(dir / "a")->path().filename().string();
    for (const char* rel : {"manifest.json", "config.json", "record.csv",
                            "checkpoints/step_0.json", "checkpoints/step_400.json"}) {
        CAPTURE(rel);
        CHECK(read_text_file((dir / "a" / run_id / rel).string()) ==
              read_text_file((dir / "b" / run_id / rel).string()));
    }

    const RunManifest ma = load_manifest((dir / "a" / run_id / "manifest.json").string());
    const RunManifest mb = load_manifest((dir / "b" / run_id / "manifest.json").string());
    CHECK(ma.final_checkpoint_digest == mb.final_checkpoint_digest);
    CHECK(ma.config_hash == mb.config_hash);
}

TEST_CASE("seed override renames the run and changes its digest") {
    const fs::path dir = scratch("train_override");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());
    write_text_file((dir / "cfg.json").string(), chain_config("chain.json", 200, 11));

    TrainOptions opts;
    opts.out_root = (dir / "out").string();
    std::ostringstream sink;
    CHECK(cmd_train((dir / "cfg.json").string(), opts, sink, sink) == kExitOk);
    opts.seed = 5;
    CHECK(cmd_train((dir / "cfg.json").string(), opts, sink, sink) == kExitOk);

    std::vector<std::string> runs;
    for (const auto& entry : fs::directory_iterator(dir / "out"))
        runs.push_back(entry.path().filename().string());
    REQUIRE(runs.size() == 2);

    RunManifest with_5, with_11;
    for (const auto& id : runs) {
        const RunManifest m = load_manifest((dir / "out" / id / "manifest.json").string());
        CHECK(contains(id, "-s" + std::to_string(m.seed)));
        (m.seed == 5 ? with_5 : with_11) = m;
    }
    CHECK(with_5.seed == 5);
    CHECK(with_11.seed == 11);
    // The seed participates in the canonical config, so everything downstream
    // of the hash separates too.
    CHECK(with_5.config_hash != with_11.config_hash);
    CHECK(with_5.final_checkpoint_digest != with_11.final_checkpoint_digest);
}

TEST_CASE("diagnose passes a settled deterministic run") {
    const fs::path dir = scratch("diag_green");
    qlab::envs::save_mdp(pinned_mdp(), (dir / "pinned.json").string());
    // The epsilon floor keeps the worse action sampled; a pure greedy run on
    // this MDP starves it and would (correctly) trip the coverage check.
    write_text_file((dir / "cfg.json").string(),
                    "{\n"
                    "  \"env\": {\"path\": \"pinned.json\"},\n"
                    "  \"network\": {\"sublayer\": [3, 3], \"activation\": \"tanh\","
                    " \"seed\": 4},\n"
                    "  \"schedule\": {\"c\": 0.5, \"n0\": 10, \"p\": 0.6},\n"
                    "  \"policy\": {\"mode\": \"epsilon_greedy\", \"eps0\": 0.3,"
                    " \"decay\": 0.995, \"floor\": 0.05},\n"
                    "  \"run\": {\"steps\": 4000, \"checkpoint_every\": 500}\n"
                    "}\n");
    REQUIRE(run_train((dir / "cfg.json").string(), dir / "out") == kExitOk);
    const std::string run_id = fs::directory_iterator(dir / "out")->path().filename().string();

    DiagnoseOptions opts;
    opts.out_root = (dir / "out").string();
    std::ostringstream out, err;
    const int rc = cmd_diagnose(run_id, opts, out, err);
    CAPTURE(err.str());
    CHECK(rc == kExitOk);

    const fs::path reports = dir / "out" / run_id / "reports";
    const auto summary = nlohmann::json::parse(read_text_file((reports / "summary.json").string()));
    CHECK(summary.at("exit_code").get<int>() == 0);
    CHECK(summary.at("failures").empty());
    CHECK(summary.at("checks").size() == 5);
    for (const char* name :
         {"stationarity.json", "martingale.json", "tracking.json", "averaged_gradient.json",
          "undertraining.json", "tail_measure.csv", "martingale_noise.csv"})
        CHECK(fs::exists(reports / name));

    // Every JSON report carries the hash of the config that produced the run.
    const RunManifest m = load_manifest((dir / "out" / run_id / "manifest.json").string());
    for (const char* name : {"stationarity.json", "martingale.json", "tracking.json",
                             "averaged_gradient.json", "undertraining.json", "summary.json"}) {
        const auto doc = nlohmann::json::parse(read_text_file((reports / name).string()));
        CHECK(doc.at("config_hash").get<std::string>() == m.config_hash);
    }
    CHECK(!m.report_paths.empty());
}

TEST_CASE("diagnose flags the starved trap region and loose thresholds clear it") {
    const fs::path dir = scratch("diag_trap");
    qlab::envs::save_mdp(qlab::envs::trap_mdp(), (dir / "trap.json").string());
    write_text_file((dir / "cfg.json").string(),
                    "{\n"
                    "  \"env\": {\"path\": \"trap.json\"},\n"
                    "  \"network\": {\"hidden\": [6], \"sublayer\": [4, 4],\n"
                    "    \"activation\": [\"tanh\", \"sigmoid\"], \"init\": \"biased_readout\","
                    " \"seed\": 29},\n"
                    "  \"schedule\": {\"c\": 0.5, \"n0\": 10, \"p\": 0.6},\n"
                    "  \"run\": {\"steps\": 6000, \"checkpoint_every\": 500}\n"
                    "}\n");
    REQUIRE(run_train((dir / "cfg.json").string(), dir / "out") == kExitOk);
    const std::string run_id = fs::directory_iterator(dir / "out")->path().filename().string();

    DiagnoseOptions opts;
    opts.out_root = (dir / "out").string();
    opts.window = 0.3;
    std::ostringstream out, err;
    CHECK(cmd_diagnose(run_id, opts, out, err) == kExitProperty);

    const fs::path reports = dir / "out" / run_id / "reports";
    const auto under = nlohmann::json::parse(read_text_file((reports / "undertraining.json").string()));
    CHECK(!under.at("pass").get<bool>());
    REQUIRE(under.at("trapped_regions").size() == 1);
    CHECK(under.at("trapped_regions")[0].at("action").get<int>() == 1);
    CHECK((under.at("trapped_regions")[0].at("states") == nlohmann::json::array({2, 3})));
    const auto summary = nlohmann::json::parse(read_text_file((reports / "summary.json").string()));
    const auto& failures = summary.at("failures");
    CHECK(std::find(failures.begin(), failures.end(), "undertraining_coverage") != failures.end());

    // Loosening every bound must flip the exit code without touching the run.
    DiagnoseOptions loose = opts;
    loose.gap_threshold = std::numeric_limits<double>::infinity();
    loose.ratio_threshold = std::numeric_limits<double>::infinity();
    loose.grad_threshold = std::numeric_limits<double>::infinity();
    loose.tracking_tolerance = std::numeric_limits<double>::infinity();
    loose.max_trapped = 100;
    std::ostringstream out2, err2;
    CHECK(cmd_diagnose(run_id, loose, out2, err2) == kExitOk);
}

TEST_CASE("diagnose needs a completed run with at least one step") {
    const fs::path dir = scratch("diag_reject");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());

    // Zero-step run: completed, but there is nothing to measure.
    write_text_file((dir / "cfg.json").string(), chain_config("chain.json", 0, 11));
    REQUIRE(run_train((dir / "cfg.json").string(), dir / "out") == kExitOk);
    const std::string empty_id = fs::directory_iterator(dir / "out")->path().filename().string();

    DiagnoseOptions opts;
    opts.out_root = (dir / "out").string();
    std::ostringstream out, err;
    CHECK(cmd_diagnose(empty_id, opts, out, err) == kExitInput);

    // Diverged run: reported as exit 2 by train, rejected by diagnose.
    std::string cfg = chain_config("chain.json", 500, 11);
    cfg.replace(cfg.find("\"c\": 0.5"), 8, "\"c\": 4000.0");
    write_text_file((dir / "cfg2.json").string(), cfg);
    std::string train_err;
    CHECK(run_train((dir / "cfg2.json").string(), dir / "out", &train_err) == kExitDiverged);

    std::string diverged_id;
    for (const auto& entry : fs::directory_iterator(dir / "out"))
        if (entry.path().filename().string() != empty_id)
            diverged_id = entry.path().filename().string();
    REQUIRE(!diverged_id.empty());
    const RunManifest m = load_manifest((dir / "out" / diverged_id / "manifest.json").string());
    CHECK(m.status == "diverged");
    CHECK(m.diverged_at >= 0);

    std::ostringstream out2, err2;
    CHECK(cmd_diagnose(diverged_id, opts, out2, err2) == kExitInput);
    CHECK(contains(err2.str(), "diverged"));

    // Unknown run ids are input errors, not crashes.
    std::ostringstream out3, err3;
    CHECK(cmd_diagnose("no-such-run", opts, out3, err3) == kExitInput);
}

TEST_CASE("diagnose rejects unknown test-function ids") {
    const fs::path dir = scratch("diag_badtest");
    qlab::envs::save_mdp(pinned_mdp(), (dir / "pinned.json").string());
    write_text_file((dir / "cfg.json").string(), chain_config("pinned.json", 300, 5));
    REQUIRE(run_train((dir / "cfg.json").string(), dir / "out") == kExitOk);
    const std::string run_id = fs::directory_iterator(dir / "out")->path().filename().string();

    DiagnoseOptions opts;
    opts.out_root = (dir / "out").string();
    opts.tests = {"indicator_0", "bogus_fn"};
    std::ostringstream out, err;
    CHECK(cmd_diagnose(run_id, opts, out, err) == kExitInput);
    CHECK(contains(err.str(), "bogus_fn"));

    // A valid subset restricts the emitted series.
    opts.tests = {"coord_0"};
    std::ostringstream out2, err2;
    const int rc = cmd_diagnose(run_id, opts, out2, err2);
    CHECK((rc == kExitOk || rc == kExitProperty));
    const fs::path reports = dir / "out" / run_id / "reports";
    CHECK(fs::exists(reports / "xi_coord_0.csv"));
    CHECK(!fs::exists(reports / "xi_indicator_0.csv"));
}

TEST_CASE("oracle solves the single-state loop exactly") {
    const fs::path dir = scratch("oracle_loop");
    qlab::envs::Mdp m;
    m.states = {{0.0}};
    m.n_actions = 1;
    m.kernel = {{{{0, 1.0}}}};
    m.reward = {{1.0}};
    m.discount = 0.5;
    m.initial_dist = {1.0};
    qlab::envs::save_mdp(m, (dir / "loop.json").string());

    OracleOptions opts;
    opts.out_root = (dir / "out").string();
    opts.run_id = "loop";
    std::ostringstream out, err;
    CHECK(cmd_oracle((dir / "loop.json").string(), opts, out, err) == kExitOk);

    // q* = 1 + 0.5 q*  =>  q* = 2 (value iteration stops at its tolerance).
    const std::string q_csv = read_text_file((dir / "out" / "loop" / "q_star.csv").string());
    const auto q_fields = qlab::split(qlab::split(q_csv, '\n')[1], ',');
    REQUIRE(q_fields.size() == 3);
    CHECK(qlab::parse_double(q_fields[2], "q_star value") == doctest::Approx(2.0).epsilon(1e-9));
    const std::string p_csv = read_text_file((dir / "out" / "loop" / "policy.csv").string());
    const auto p_fields = qlab::split(qlab::split(p_csv, '\n')[1], ',');
    REQUIRE(p_fields.size() == 3);
    CHECK(qlab::parse_double(p_fields[1], "v_star value") == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(p_fields[2] == "0");
    const auto doc = nlohmann::json::parse(
        read_text_file((dir / "out" / "loop" / "oracle.json").string()));
    CHECK(doc.at("n_stationary_distributions").get<int>() == 1);
    CHECK(doc.at("pi_star") == nlohmann::json::array({0}));
}

TEST_CASE("oracle counts both recurrent classes of the reducible benchmark") {
    const fs::path dir = scratch("oracle_reducible");
    qlab::envs::save_mdp(qlab::envs::reducible_mdp(0), (dir / "reducible.json").string());

    OracleOptions opts;
    opts.out_root = (dir / "out").string();
    opts.run_id = "red";
    std::ostringstream out, err;
    CHECK(cmd_oracle((dir / "reducible.json").string(), opts, out, err) == kExitOk);

    const auto doc = nlohmann::json::parse(
        read_text_file((dir / "out" / "red" / "oracle.json").string()));
    CHECK(doc.at("n_stationary_distributions").get<int>() == 2);

    const std::string stationary = read_text_file((dir / "out" / "red" / "stationary.csv").string());
    CHECK(contains(stationary, "\n0,0,"));
    CHECK(contains(stationary, "\n1,3,"));
}

TEST_CASE("oracle reruns are byte-identical and name themselves by digest") {
    const fs::path dir = scratch("oracle_repeat");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());

    OracleOptions opts;
    opts.out_root = (dir / "out").string();
    std::ostringstream out1, err1;
    REQUIRE(cmd_oracle((dir / "chain.json").string(), opts, out1, err1) == kExitOk);
    const std::string run_id = fs::directory_iterator(dir / "out")->path().filename().string();
    CHECK(run_id.rfind("oracle-", 0) == 0);

    const std::string before = read_text_file((dir / "out" / run_id / "oracle.json").string());
    std::ostringstream out2, err2;
    REQUIRE(cmd_oracle((dir / "chain.json").string(), opts, out2, err2) == kExitOk);
    CHECK(read_text_file((dir / "out" / run_id / "oracle.json").string()) == before);
    CHECK(out1.str() == out2.str());

    std::ostringstream out3, err3;
    CHECK(cmd_oracle((dir / "missing.json").string(), opts, out3, err3) == kExitInput);
}

TEST_CASE("replay compare matches online exactly at unit capacity") {
    const fs::path dir = scratch("compare_unit");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());
    write_text_file((dir / "cfg.json").string(),
                    "{\n"
                    "  \"env\": {\"path\": \"chain.json\"},\n"
                    "  \"network\": {\"hidden\": [6], \"sublayer\": [4, 4],\n"
                    "    \"activation\": [\"tanh\", \"sigmoid\"], \"seed\": 3},\n"
                    "  \"schedule\": {\"c\": 0.5, \"n0\": 10, \"p\": 0.6},\n"
                    "  \"policy\": {\"mode\": \"epsilon_greedy\", \"eps0\": 1.0,"
                    " \"decay\": 0.999, \"floor\": 0.01},\n"
                    "  \"replay\": {\"enabled\": true, \"capacity\": 1, \"batch\": 1},\n"
                    "  \"run\": {\"steps\": 800, \"checkpoint_every\": 200}\n"
                    "}\n");

    CompareOptions opts;
    opts.out_root = (dir / "out").string();
    opts.run_id = "unit";
    std::ostringstream out, err;
    CHECK(cmd_replay_compare((dir / "cfg.json").string(), opts, out, err) == kExitOk);

    // The trajectories coincide row for row; only the batch column differs
    // (the online run has no sampled indices to report).
    const fs::path run_dir = dir / "out" / "unit";
    auto strip_batch = [](const std::string& text) {
        std::string out;
        for (const auto& line : qlab::split(text, '\n')) {
            if (line.empty()) continue;
            auto fields = qlab::split(line, ',');
            REQUIRE(fields.size() == 8);
            fields.erase(fields.begin() + 6);
            for (std::size_t i = 0; i < fields.size(); ++i)
                out += (i ? "," : "") + fields[i];
            out += '\n';
        }
        return out;
    };
    CHECK(strip_batch(read_text_file((run_dir / "replay_record.csv").string())) ==
          strip_batch(read_text_file((run_dir / "online_record.csv").string())));
    const auto doc = nlohmann::json::parse(
        read_text_file((run_dir / "replay_compare.json").string()));
    CHECK(doc.at("tv_distance").get<double>() == 0.0);
    CHECK(doc.at("replay").at("entropy").get<double>() ==
          doc.at("online").at("entropy").get<double>());
}

TEST_CASE("replay compare separates batched replay from the online stream") {
    const fs::path dir = scratch("compare_batch");
    qlab::envs::save_mdp(qlab::envs::chain_mdp(), (dir / "chain.json").string());
    write_text_file((dir / "cfg.json").string(),
                    "{\n"
                    "  \"env\": {\"path\": \"chain.json\"},\n"
                    "  \"network\": {\"hidden\": [6], \"sublayer\": [4, 4],\n"
                    "    \"activation\": [\"tanh\", \"sigmoid\"], \"seed\": 3},\n"
                    "  \"schedule\": {\"c\": 0.5, \"n0\": 10, \"p\": 0.6},\n"
                    "  \"policy\": {\"mode\": \"epsilon_greedy\", \"eps0\": 1.0,"
                    " \"decay\": 0.999, \"floor\": 0.01},\n"
                    "  \"replay\": {\"enabled\": true, \"capacity\": 500, \"batch\": 16},\n"
                    "  \"run\": {\"steps\": 1500, \"checkpoint_every\": 500}\n"
                    "}\n");

    CompareOptions opts;
    opts.out_root = (dir / "out").string();
    opts.run_id = "batch";
    std::ostringstream out, err;
    CHECK(cmd_replay_compare((dir / "cfg.json").string(), opts, out, err) == kExitOk);

    const auto doc = nlohmann::json::parse(
        read_text_file((dir / "out" / "batch" / "replay_compare.json").string()));
    CHECK(doc.at("tv_distance").get<double>() > 0.0);
    CHECK(doc.at("replay").at("support_size").get<int>() >= 1);
    CHECK(fs::exists(dir / "out" / "batch" / "replay_tail.csv"));
    CHECK(fs::exists(dir / "out" / "batch" / "online_tail.csv"));
}

TEST_CASE("default out root honors the environment override") {
    ::setenv(kOutRootEnv, "/tmp/qlab_env_root", 1);
    CHECK(default_out_root() == "/tmp/qlab_env_root");
    ::unsetenv(kOutRootEnv);
    CHECK(default_out_root() == "runs");
}
