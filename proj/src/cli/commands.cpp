#include "qlab/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"
#include "qlab/diag/field.hpp"
#include "qlab/diag/martingale.hpp"
#include "qlab/diag/ode.hpp"
#include "qlab/diag/replayer.hpp"
#include "qlab/envs/benchmarks.hpp"
#include "qlab/envs/mdp.hpp"
#include "qlab/envs/solve.hpp"
#include "qlab/measure/measure.hpp"
#include "qlab/measure/time_axis.hpp"
#include "qlab/net/checkpoint.hpp"
#include "qlab/train/config.hpp"
#include "qlab/train/policy.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double norm2(const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

std::string derive_run_id(const train::RunConfig& cfg) {
    return cfg.hash().substr(0, 12) + "-s" + std::to_string(cfg.seed);
}

std::string checkpoint_file(long step) {
    return "checkpoints/step_" + std::to_string(step) + ".json";
}

void write_series_csv(const fs::path& path,
                      const std::vector<double>& t, const std::vector<double>& v) {
    std::string text = "t,value\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        text += format_double(t[i]) + "," + format_double(v[i]) + "\n";
    write_text_file(path.string(), text);
}

// Checkpoint whose step is nearest to n; ties resolve to the earlier one.
const net::Checkpoint& nearest_checkpoint(const std::vector<net::Checkpoint>& cs, long n) {
    const net::Checkpoint* best = &cs.front();
    for (const auto& c : cs) {
        if (std::llabs(c.step - n) < std::llabs(best->step - n)) best = &c;
    }
    return *best;
}

bool within(double value, double threshold) {
    return std::isinf(threshold) || value < threshold;
}

struct LoadedRun {
    RunManifest manifest;
    train::RunConfig config;
    envs::Mdp mdp;
    train::TrainRecord record;
    std::vector<net::Checkpoint> checkpoints;
};

LoadedRun load_run(const fs::path& run_dir) {
    LoadedRun r;
    r.manifest = load_manifest((run_dir / "manifest.json").string());
    const std::string cfg_text = read_text_file((run_dir / r.manifest.config_path).string());
    r.config = train::config_from_json_text(cfg_text, (run_dir / r.manifest.config_path).string(),
                                            run_dir.string());
    if (r.config.hash() != r.manifest.config_hash)
        throw InputError(run_dir.string() + ": stored config re-hashes to " + r.config.hash() +
                         ", manifest says " + r.manifest.config_hash);
    r.mdp = envs::load_mdp(r.manifest.env_path);
    r.record = train::load_record((run_dir / r.manifest.record_path).string());
    for (const auto& rel : r.manifest.checkpoint_paths)
        r.checkpoints.push_back(net::load_checkpoint((run_dir / rel).string()));
    return r;
}

// Window bookkeeping shared by the stationarity and comparison reports.
struct TailWindow {
    double start_t = 0.0;
    long n_start = 0, n_mid = 0, n_end = 0;
};

TailWindow tail_window(const measure::TimeAxis& axis, double window) {
    TailWindow w;
    const double total = axis.total();
    w.start_t = (1.0 - window) * total;
    w.n_start = axis.interval_of(std::min(w.start_t, std::nexttoward(total, 0.0)));
    w.n_mid = axis.interval_of(w.start_t + 0.5 * (total - w.start_t));
    w.n_end = axis.steps();
    return w;
}

double gap_at(const measure::OccupationMeasure& tail, const net::Topology& topo,
              const net::Checkpoint& ckpt, const envs::Mdp& mdp,
              const train::PolicyConfig& policy) {
    return measure::stationarity_gap(tail, topo, ckpt.theta, mdp, policy, ckpt.step);
}

}  // namespace

std::string default_out_root() {
    if (const char* env = std::getenv(kOutRootEnv); env && *env) return env;
    return "runs";
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const std::string& config_path, const TrainOptions& opts, std::ostream& out,
              std::ostream& err) {
    train::RunConfig cfg;
    envs::Mdp mdp;
    train::TrainSettings settings;
    try {
        cfg = train::load_config(config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        mdp = envs::load_mdp(cfg.resolved_env_path);
        settings = cfg.settings_for(mdp);
        settings.validate(mdp);
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return kExitInput;
    }

    const std::string root = opts.out_root.empty() ? default_out_root() : opts.out_root;
    const std::string run_id = opts.run_id.empty() ? derive_run_id(cfg) : opts.run_id;
    const fs::path run_dir = fs::path(root) / run_id;

    RunManifest m;
    m.run_id = run_id;
    m.config_hash = cfg.hash();
    m.seed = cfg.seed;
    m.env_path = fs::absolute(cfg.resolved_env_path).lexically_normal().string();

    try {
        fs::create_directories(run_dir / "checkpoints");
        write_text_file((run_dir / m.config_path).string(), cfg.canonical_text());

        const train::TrainResult result = train::train(settings, mdp);
        train::save_record(result.record, (run_dir / m.record_path).string());
        for (const auto& c : result.checkpoints) {
            const std::string rel = checkpoint_file(c.step);
            net::save_checkpoint(c, (run_dir / rel).string());
            m.checkpoint_paths.push_back(rel);
        }
        if (!result.checkpoints.empty())
            m.final_checkpoint_digest =
                fnv1a_hex(net::checkpoint_to_json_text(result.checkpoints.back()));

        m.steps = static_cast<long>(result.record.rows.size());
        m.tie_count = result.tie_count;
        m.diverged_at = result.diverged_at;
        m.status = result.status == train::TrainStatus::Completed ? "completed" : "diverged";
        save_manifest(m, (run_dir / "manifest.json").string());

        out << "run " << run_id << ": " << m.status << " after " << m.steps << " step(s), "
            << m.checkpoint_paths.size() << " checkpoint(s) in " << run_dir.string() << "\n";
        return m.status == "completed" ? kExitOk : kExitDiverged;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        m.status = "failed";
        try {
            save_manifest(m, (run_dir / "manifest.json").string());
        } catch (...) {
        }
        return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// diagnose

namespace {

struct CheckResult {
    std::string name;
    bool pass = true;
};

json stationarity_report(const LoadedRun& run, const measure::TimeAxis& axis,
                         const measure::OccupationMeasure& tail, const net::Topology& topo,
                         const DiagnoseOptions& opts, CheckResult& check) {
    const TailWindow w = tail_window(axis, opts.window);
    const auto& start = nearest_checkpoint(run.checkpoints, w.n_start);
    const auto& mid = nearest_checkpoint(run.checkpoints, w.n_mid);
    const auto& end = nearest_checkpoint(run.checkpoints, w.n_end);

    const double g_start = gap_at(tail, topo, start, run.mdp, run.config.policy);
    const double g_mid = gap_at(tail, topo, mid, run.mdp, run.config.policy);
    const double g_end = gap_at(tail, topo, end, run.mdp, run.config.policy);
    check = {"stationarity_gap", within(g_mid, opts.gap_threshold)};

    json j;
    j["config_hash"] = run.manifest.config_hash;
    j["window"] = opts.window;
    j["gap"] = g_mid;
    j["theta_checkpoint_step"] = mid.step;
    j["threshold"] = opts.gap_threshold;
    j["pass"] = check.pass;
    j["sensitivity"] = {{"start", {{"checkpoint_step", start.step}, {"gap", g_start}}},
                        {"mid", {{"checkpoint_step", mid.step}, {"gap", g_mid}}},
                        {"end", {{"checkpoint_step", end.step}, {"gap", g_end}}}};
    return j;
}

json trace_summary_json(const diag::MartingaleTrace& trace, double threshold) {
    json j;
    j["full_range"] = trace.summary.full_range;
    j["tail_fluctuation"] = trace.summary.tail_fluctuation;
    j["ratio"] = trace.summary.ratio;
    j["pass"] = within(trace.summary.ratio, threshold);
    return j;
}

json martingale_report(const LoadedRun& run, diag::RunReplayer& rep, const fs::path& reports_dir,
                       const DiagnoseOptions& opts, CheckResult& check,
                       std::vector<std::string>& files) {
    const auto noise = diag::martingale_trace(rep, run.mdp);
    write_series_csv(reports_dir / "martingale_noise.csv", noise.times, noise.norms);
    files.push_back("reports/martingale_noise.csv");

    auto bank = diag::default_test_functions(run.mdp);
    if (!opts.tests.empty()) {
        std::vector<diag::TestFunction> picked;
        for (const auto& id : opts.tests) {
            const auto it = std::find_if(bank.begin(), bank.end(),
                                         [&](const auto& tf) { return tf.id == id; });
            if (it == bank.end())
                throw InputError("diagnose: unknown test function '" + id + "'");
            picked.push_back(*it);
        }
        bank = std::move(picked);
    }

    bool all_pass = within(noise.summary.ratio, opts.ratio_threshold);
    json j;
    j["config_hash"] = run.manifest.config_hash;
    j["threshold"] = opts.ratio_threshold;
    j["noise"] = trace_summary_json(noise, opts.ratio_threshold);
    j["noise"]["series"] = "reports/martingale_noise.csv";
    j["test_functions"] = json::array();
    for (const auto& tf : bank) {
        const auto trace = diag::test_function_trace(run.record, run.mdp, tf);
        const std::string rel = "reports/xi_" + tf.id + ".csv";
        write_series_csv(reports_dir / ("xi_" + tf.id + ".csv"), trace.times, trace.norms);
        files.push_back(rel);
        json entry = trace_summary_json(trace, opts.ratio_threshold);
        entry["id"] = tf.id;
        entry["series"] = rel;
        all_pass = all_pass && entry["pass"].get<bool>();
        j["test_functions"].push_back(entry);
    }
    check = {"martingale_ratio", all_pass};
    j["pass"] = all_pass;
    return j;
}

json tracking_report(const LoadedRun& run, diag::RunReplayer& rep,
                     const measure::TimeAxis& axis, const fs::path& reports_dir,
                     const DiagnoseOptions& opts, CheckResult& check,
                     std::vector<std::string>& files) {
    std::vector<long> anchors = opts.anchors;
    if (anchors.empty()) {
        const long n = axis.steps();
        for (long cand : {n / 8, n / 4, n / 2}) {
            if (cand <= 0 || cand >= n) continue;
            if (axis.t(cand) + opts.horizon > axis.total()) continue;
            if (std::find(anchors.begin(), anchors.end(), cand) == anchors.end())
                anchors.push_back(cand);
        }
    }

    const auto reports = diag::tracking_error(rep, axis, run.mdp, anchors, opts.horizon,
                                              opts.substeps);
    bool all_pass = true;
    json j;
    j["config_hash"] = run.manifest.config_hash;
    j["horizon"] = opts.horizon;
    j["substeps"] = opts.substeps;
    j["tolerance"] = opts.tracking_tolerance;
    j["anchors"] = json::array();
    for (const auto& tr : reports) {
        // Distance series over the window, on the Euler nodes.
        const auto theta0 = rep.theta_at(tr.anchor);
        const auto sol = diag::integrate_frozen_ode(theta0, rep, axis, run.mdp, tr.anchor,
                                                    opts.horizon, opts.substeps);
        const double t_end = axis.t(tr.anchor) + opts.horizon;
        long n1 = t_end >= axis.total() ? axis.steps() : axis.interval_of(t_end) + 1;
        n1 = std::min(n1, rep.steps());
        std::vector<double> dist(sol.times.size(), 0.0);
        if (n1 > tr.anchor) {
            const auto bar = diag::interpolate_trajectory(rep, axis, tr.anchor, n1);
            for (std::size_t k = 0; k < sol.times.size(); ++k) {
                const auto b = bar.at(sol.times[k]);
                double ss = 0.0;
                for (std::size_t i = 0; i < b.size(); ++i) {
                    const double d = b[i] - sol.thetas[k][i];
                    ss += d * d;
                }
                dist[k] = std::sqrt(ss);
            }
        }
        const std::string rel = "tracking_anchor_" + std::to_string(tr.anchor) + ".csv";
        write_series_csv(reports_dir / rel, sol.times, dist);
        files.push_back("reports/" + rel);

        const double bound = opts.tracking_tolerance * (1.0 + norm2(theta0));
        const bool pass = std::isinf(opts.tracking_tolerance) || tr.halving_shift < bound;
        all_pass = all_pass && pass;
        j["anchors"].push_back({{"anchor", tr.anchor},
                                {"t_anchor", axis.t(tr.anchor)},
                                {"sup_distance", tr.sup_distance},
                                {"halving_shift", tr.halving_shift},
                                {"bound", bound},
                                {"pass", pass},
                                {"series", "reports/" + rel}});
    }
    check = {"tracking_halving", all_pass};
    j["pass"] = all_pass;
    return j;
}

json gradient_report(const LoadedRun& run, const measure::TimeAxis& axis,
                     const measure::OccupationMeasure& tail, const net::Topology& topo,
                     const fs::path& reports_dir, const DiagnoseOptions& opts,
                     CheckResult& check, std::vector<std::string>& files) {
    std::vector<double> ts, norms;
    json per = json::array();
    for (const auto& c : run.checkpoints) {
        const auto est = diag::averaged_gradient(topo, c.theta, tail, run.mdp);
        ts.push_back(axis.t(c.step));
        norms.push_back(est.norm);
        per.push_back({{"step", c.step}, {"t", axis.t(c.step)}, {"norm", est.norm}});
    }
    write_series_csv(reports_dir / "averaged_gradient.csv", ts, norms);
    files.push_back("reports/averaged_gradient.csv");

    const double init_norm = norms.front();
    const double final_norm = norms.back();
    const bool pass = std::isinf(opts.grad_threshold) ||
                      final_norm <= opts.grad_threshold * init_norm;
    check = {"averaged_gradient_ratio", pass};

    json j;
    j["config_hash"] = run.manifest.config_hash;
    j["window"] = opts.window;
    j["initial_norm"] = init_norm;
    j["final_norm"] = final_norm;
    j["ratio"] = init_norm > 0.0 ? final_norm / init_norm : 0.0;
    j["threshold"] = opts.grad_threshold;
    j["pass"] = pass;
    j["per_checkpoint"] = per;
    j["series"] = "reports/averaged_gradient.csv";
    return j;
}

json undertraining_report(const LoadedRun& run, const measure::OccupationMeasure& tail,
                          const net::Topology& topo, const DiagnoseOptions& opts,
                          CheckResult& check) {
    const auto oracle = envs::value_iteration(run.mdp);
    const auto& final_theta = run.checkpoints.back().theta;
    const auto scan = diag::undertraining_scan(topo, final_theta, tail, run.mdp, oracle);

    json regions = json::array();
    json trapped = json::array();
    for (const auto& region : scan.regions) {
        const bool starved = region.mass == 0.0;
        regions.push_back({{"action", region.action},
                           {"states", region.states},
                           {"mass", region.mass},
                           {"mean_q_error", region.mean_q_error},
                           {"trapped", starved}});
        if (starved)
            trapped.push_back({{"action", region.action}, {"states", region.states}});
    }
    const bool pass = static_cast<long>(trapped.size()) <= opts.max_trapped;
    check = {"undertraining_coverage", pass};

    json j;
    j["config_hash"] = run.manifest.config_hash;
    j["window"] = opts.window;
    j["regions"] = regions;
    j["trapped_regions"] = trapped;
    j["greedy_mismatch"] = scan.greedy_mismatch;
    j["mismatch_count"] = scan.mismatch_count;
    j["max_trapped"] = opts.max_trapped;
    j["pass"] = pass;
    return j;
}

}  // namespace

int cmd_diagnose(const std::string& run_id, const DiagnoseOptions& opts, std::ostream& out,
                 std::ostream& err) {
    try {
        const std::string root = opts.out_root.empty() ? default_out_root() : opts.out_root;
        const fs::path run_dir = fs::path(root) / run_id;
        LoadedRun run = load_run(run_dir);
        if (run.manifest.status != "completed") {
            err << "diagnose: run " << run_id << " is " << run.manifest.status
                << ", not completed\n";
            return kExitInput;
        }
        if (run.record.rows.empty()) {
            err << "diagnose: run " << run_id << " recorded no steps\n";
            return kExitInput;
        }

        const auto axis = measure::TimeAxis::from_record(run.record);
        const auto topo = run.config.topology_for(run.mdp);
        const auto mode =
            run.config.replay_enabled ? train::UpdateMode::Replay : run.config.update;
        diag::RunReplayer rep(run.record, run.checkpoints, run.mdp, mode);
        const auto tail = measure::tail_estimate(run.record, axis, run.mdp, opts.window);

        const fs::path reports_dir = run_dir / "reports";
        fs::create_directories(reports_dir);
        std::vector<std::string> files;

        std::vector<CheckResult> checks(5);
        json stationarity =
            stationarity_report(run, axis, tail, topo, opts, checks[0]);
        json martingale = martingale_report(run, rep, reports_dir, opts, checks[1], files);
        json tracking = tracking_report(run, rep, axis, reports_dir, opts, checks[2], files);
        json gradient =
            gradient_report(run, axis, tail, topo, reports_dir, opts, checks[3], files);
        json undertraining = undertraining_report(run, tail, topo, opts, checks[4]);

        write_text_file((reports_dir / "tail_measure.csv").string(), measure::measure_to_csv(tail));
        files.push_back("reports/tail_measure.csv");
        write_text_file((reports_dir / "stationarity.json").string(),
                        stationarity.dump(2) + "\n");
        write_text_file((reports_dir / "martingale.json").string(), martingale.dump(2) + "\n");
        write_text_file((reports_dir / "tracking.json").string(), tracking.dump(2) + "\n");
        write_text_file((reports_dir / "averaged_gradient.json").string(),
                        gradient.dump(2) + "\n");
        write_text_file((reports_dir / "undertraining.json").string(),
                        undertraining.dump(2) + "\n");
        for (const char* name : {"stationarity.json", "martingale.json", "tracking.json",
                                 "averaged_gradient.json", "undertraining.json"})
            files.push_back(std::string("reports/") + name);

        json summary;
        summary["config_hash"] = run.manifest.config_hash;
        summary["checks"] = json::array();
        json failures = json::array();
        for (const auto& c : checks) {
            summary["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
            if (!c.pass) failures.push_back(c.name);
            out << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL") << "\n";
        }
        summary["failures"] = failures;
        const int code = failures.empty() ? kExitOk : kExitProperty;
        summary["exit_code"] = code;
        write_text_file((reports_dir / "summary.json").string(), summary.dump(2) + "\n");
        files.push_back("reports/summary.json");

        std::sort(files.begin(), files.end());
        run.manifest.report_paths = files;
        save_manifest(run.manifest, (run_dir / "manifest.json").string());

        if (code != kExitOk) err << "diagnose: " << failures.size() << " check(s) failed\n";
        return code;
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const std::string& mdp_path, const OracleOptions& opts, std::ostream& out,
               std::ostream& err) {
    try {
        const std::string bytes = read_text_file(mdp_path);
        const std::string digest = fnv1a_hex(bytes);
        const envs::Mdp mdp = envs::load_mdp(mdp_path);
        const auto sol = envs::value_iteration(mdp);

        // Kernel of the oracle-greedy policy.
        envs::FrozenKernel fk;
        fk.p.assign(mdp.n_states(), std::vector<double>(mdp.n_states(), 0.0));
        for (int x = 0; x < mdp.n_states(); ++x)
            for (const auto& [y, p] : mdp.row(x, sol.pi_star[static_cast<std::size_t>(x)]))
                fk.p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] += p;
        const auto dists = envs::stationary_distributions(fk);

        const std::string root = opts.out_root.empty() ? default_out_root() : opts.out_root;
        const std::string id =
            opts.run_id.empty() ? "oracle-" + digest.substr(0, 12) : opts.run_id;
        const fs::path dir = fs::path(root) / id;
        fs::create_directories(dir);

        std::string q_csv = "state,action,value\n";
        for (int x = 0; x < mdp.n_states(); ++x)
            for (int a = 0; a < mdp.n_actions; ++a)
                q_csv += std::to_string(x) + "," + std::to_string(a) + "," +
                         format_double(sol.q_star[static_cast<std::size_t>(x)]
                                                 [static_cast<std::size_t>(a)]) +
                         "\n";
        write_text_file((dir / "q_star.csv").string(), q_csv);

        std::string p_csv = "state,v_star,pi_star\n";
        for (int x = 0; x < mdp.n_states(); ++x)
            p_csv += std::to_string(x) + "," +
                     format_double(sol.v_star[static_cast<std::size_t>(x)]) + "," +
                     std::to_string(sol.pi_star[static_cast<std::size_t>(x)]) + "\n";
        write_text_file((dir / "policy.csv").string(), p_csv);

        std::string s_csv = "distribution,state,mass\n";
        for (std::size_t k = 0; k < dists.size(); ++k)
            for (std::size_t x = 0; x < dists[k].size(); ++x)
                s_csv += std::to_string(k) + "," + std::to_string(x) + "," +
                         format_double(dists[k][x]) + "\n";
        write_text_file((dir / "stationary.csv").string(), s_csv);

        json j;
        j["mdp_path"] = mdp_path;
        j["mdp_digest"] = digest;
        j["discount"] = mdp.discount;
        j["n_states"] = mdp.n_states();
        j["n_actions"] = mdp.n_actions;
        j["pi_star"] = sol.pi_star;
        j["value_iteration"] = {{"residual", sol.residual}, {"iterations", sol.iterations}};
        j["n_stationary_distributions"] = dists.size();
        j["files"] = {"q_star.csv", "policy.csv", "stationary.csv"};
        write_text_file((dir / "oracle.json").string(), j.dump(2) + "\n");

        out << "oracle " << id << ": " << dists.size() << " stationary distribution(s), "
            << "pi* over " << mdp.n_states() << " state(s) in " << dir.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// replay-compare

namespace {

json side_report(const train::TrainResult& result, const train::RunConfig& cfg,
                 const envs::Mdp& mdp, double window,
                 measure::OccupationMeasure& tail_out) {
    const auto axis = measure::TimeAxis::from_record(result.record);
    tail_out = measure::tail_estimate(result.record, axis, mdp, window);
    const TailWindow w = tail_window(axis, window);
    const auto topo = cfg.topology_for(mdp);
    const auto& mid = nearest_checkpoint(result.checkpoints, w.n_mid);
    json j;
    j["support_size"] = tail_out.atoms.size();
    j["entropy"] = measure::entropy(tail_out);
    j["stationarity_gap"] = gap_at(tail_out, topo, mid, mdp, cfg.policy);
    j["theta_checkpoint_step"] = mid.step;
    return j;
}

}  // namespace

int cmd_replay_compare(const std::string& config_path, const CompareOptions& opts,
                       std::ostream& out, std::ostream& err) {
    train::RunConfig cfg;
    envs::Mdp mdp;
    try {
        cfg = train::load_config(config_path);
        if (opts.seed) cfg.seed = *opts.seed;
        mdp = envs::load_mdp(cfg.resolved_env_path);
        cfg.settings_for(mdp).validate(mdp);
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return kExitInput;
    }

    try {
        auto replay_settings = cfg.settings_for(mdp);
        auto online_settings = replay_settings;
        online_settings.replay_enabled = false;

        const auto replay_run = train::train(replay_settings, mdp);
        const auto online_run = train::train(online_settings, mdp);

        const std::string root = opts.out_root.empty() ? default_out_root() : opts.out_root;
        const std::string id =
            opts.run_id.empty() ? derive_run_id(cfg) + "-cmp" : opts.run_id;
        const fs::path dir = fs::path(root) / id;
        fs::create_directories(dir);
        write_text_file((dir / "config.json").string(), cfg.canonical_text());
        train::save_record(replay_run.record, (dir / "replay_record.csv").string());
        train::save_record(online_run.record, (dir / "online_record.csv").string());

        json j;
        j["config_hash"] = cfg.hash();
        j["seed"] = cfg.seed;
        j["window"] = opts.window;
        j["replay_enabled_in_config"] = cfg.replay_enabled;

        if (replay_run.status != train::TrainStatus::Completed ||
            online_run.status != train::TrainStatus::Completed) {
            j["status"] = "diverged";
            j["replay_diverged_at"] = replay_run.diverged_at;
            j["online_diverged_at"] = online_run.diverged_at;
            write_text_file((dir / "replay_compare.json").string(), j.dump(2) + "\n");
            err << "replay-compare: a variant diverged\n";
            return kExitDiverged;
        }

        measure::OccupationMeasure replay_tail, online_tail;
        j["replay"] = side_report(replay_run, cfg, mdp, opts.window, replay_tail);
        j["online"] = side_report(online_run, cfg, mdp, opts.window, online_tail);
        j["tv_distance"] = measure::measure_distance(replay_tail, online_tail);
        j["status"] = "completed";

        write_text_file((dir / "replay_tail.csv").string(), measure::measure_to_csv(replay_tail));
        write_text_file((dir / "online_tail.csv").string(), measure::measure_to_csv(online_tail));
        write_text_file((dir / "replay_compare.json").string(), j.dump(2) + "\n");

        out << "replay-compare " << id << ": tv " << format_double(j["tv_distance"].get<double>())
            << ", entropy replay " << format_double(j["replay"]["entropy"].get<double>())
            << " vs online " << format_double(j["online"]["entropy"].get<double>()) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace qlab::cli
