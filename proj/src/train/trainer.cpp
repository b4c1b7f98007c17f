#include "qlab/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::train {

namespace {

constexpr const char* kRecordHeader = "n,state,action,reward,next_state,gamma,batch,checkpoint";

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

void TrainRecord::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].n != static_cast<long>(i))
            throw InputError("record row " + std::to_string(i) + ": step index " +
                             std::to_string(rows[i].n) + ", expected " + std::to_string(i));
        for (long b : rows[i].batch)
            if (b < 0 || b > rows[i].n)
                throw InputError("record row " + std::to_string(i) +
                                 ": batch index " + std::to_string(b) + " out of range");
    }
}

Transition TrainRecord::transition_at(long step) const {
    if (step < 0 || step >= static_cast<long>(rows.size()))
        throw InputError("record: step " + std::to_string(step) + " outside 0.." +
                         std::to_string(rows.size()) + "-1");
    const RecordRow& r = rows[static_cast<std::size_t>(step)];
    return Transition{r.state, r.action, r.reward, r.next_state};
}

std::string record_to_csv(const TrainRecord& record) {
    std::ostringstream out;
    out << kRecordHeader << '\n';
    for (const RecordRow& r : record.rows) {
        out << r.n << ',' << r.state << ',' << r.action << ',' << format_double(r.reward)
            << ',' << r.next_state << ',' << format_double(r.gamma) << ',';
        for (std::size_t i = 0; i < r.batch.size(); ++i) {
            if (i) out << ';';
            out << r.batch[i];
        }
        out << ',' << (r.checkpointed ? '1' : '0') << '\n';
    }
    return out.str();
}

TrainRecord record_from_csv(const std::string& text) {
    const auto lines = split(text, '\n');
    if (lines.empty() || lines[0] != kRecordHeader)
        throw InputError("record csv: bad header, expected '" + std::string(kRecordHeader) + "'");
    TrainRecord record;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;  // trailing newline
        const std::string where = "record csv line " + std::to_string(li + 1);
        const auto f = split(lines[li], ',');
        if (f.size() != 8) throw InputError(where + ": expected 8 fields, got " +
                                            std::to_string(f.size()));
        RecordRow r;
        r.n = parse_long(f[0], where + " n");
        r.state = static_cast<int>(parse_long(f[1], where + " state"));
        r.action = static_cast<int>(parse_long(f[2], where + " action"));
        r.reward = parse_double(f[3], where + " reward");
        r.next_state = static_cast<int>(parse_long(f[4], where + " next_state"));
        r.gamma = parse_double(f[5], where + " gamma");
        if (!f[6].empty())
            for (const auto& tok : split(f[6], ';'))
                r.batch.push_back(parse_long(tok, where + " batch"));
        if (f[7] != "0" && f[7] != "1") throw InputError(where + ": checkpoint flag must be 0/1");
        r.checkpointed = f[7] == "1";
        record.rows.push_back(std::move(r));
    }
    record.validate();
    return record;
}

void save_record(const TrainRecord& record, const std::string& path) {
    write_text_file(path, record_to_csv(record));
}

TrainRecord load_record(const std::string& path) {
    return record_from_csv(read_text_file(path));
}

net::WeightVector online_update_direction(const envs::Mdp& mdp, const net::Topology& topo,
                                          const net::WeightVector& theta, const Transition& t) {
    net::ForwardTrace trace;
    const auto q_here = net::q_values(topo, theta, mdp.states.at(t.state), trace);
    const auto q_next = net::q_values(topo, theta, mdp.states.at(t.next_state));
    const double target = t.reward + mdp.discount * max_of(q_next);
    const double delta = target - q_here.at(t.action);
    auto dir = net::q_gradient(topo, theta, trace, t.action);
    for (double& g : dir) g *= delta;
    return dir;
}

net::WeightVector expected_update_direction(const envs::Mdp& mdp, const net::Topology& topo,
                                            const net::WeightVector& theta, int state,
                                            int action) {
    net::ForwardTrace trace;
    const auto q_here = net::q_values(topo, theta, mdp.states.at(state), trace);
    const double emax = envs::expected_max_q(
        mdp, state, action, [&](int y) { return net::q_values(topo, theta, mdp.states.at(y)); });
    const double target = mdp.reward_at(state, action) + mdp.discount * emax;
    const double delta = target - q_here.at(action);
    auto dir = net::q_gradient(topo, theta, trace, action);
    for (double& g : dir) g *= delta;
    return dir;
}

net::WeightVector step_online(const envs::Mdp& mdp, const net::Topology& topo,
                              const net::WeightVector& theta, const Transition& t,
                              double gamma) {
    const auto dir = online_update_direction(mdp, topo, theta, t);
    net::WeightVector out = theta;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += gamma * dir[j];
    return out;
}

net::WeightVector step_expected(const envs::Mdp& mdp, const net::Topology& topo,
                                const net::WeightVector& theta, int state, int action,
                                double gamma) {
    const auto dir = expected_update_direction(mdp, topo, theta, state, action);
    net::WeightVector out = theta;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += gamma * dir[j];
    return out;
}

net::WeightVector step_replay(const envs::Mdp& mdp, const net::Topology& topo,
                              const net::WeightVector& theta,
                              const std::vector<Transition>& batch, double gamma) {
    if (batch.empty()) throw PreconditionError("step_replay: empty batch");
    // Seed the accumulator with the first direction (not zeros) so a batch of
    // size one reproduces step_online bit for bit.
    net::WeightVector acc = online_update_direction(mdp, topo, theta, batch[0]);
    for (std::size_t i = 1; i < batch.size(); ++i) {
        const auto dir = online_update_direction(mdp, topo, theta, batch[i]);
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += dir[j];
    }
    const double inv = static_cast<double>(batch.size());
    net::WeightVector out = theta;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += gamma * (acc[j] / inv);
    return out;
}

void TrainSettings::validate(const envs::Mdp& mdp) const {
    mdp.validate();
    topology.validate();
    if (topology.input_dim != mdp.state_dim())
        throw ConfigError("network: input dim " + std::to_string(topology.input_dim) +
                          " does not match state dim " + std::to_string(mdp.state_dim()));
    if (topology.n_actions() != mdp.n_actions)
        throw ConfigError("network.sublayer: " + std::to_string(topology.n_actions()) +
                          " sublayers for an MDP with " + std::to_string(mdp.n_actions) +
                          " actions");
    schedule.validate();
    policy.validate();
    if (steps < 0) throw ConfigError("run.steps: must be >= 0");
    if (checkpoint_every < 1) throw ConfigError("run.checkpoint_every: must be >= 1");
    if (!(guard > 0.0)) throw ConfigError("run.guard: must be > 0");
    if (replay_enabled) {
        if (update == UpdateMode::Expected)
            throw ConfigError("run.update: 'expected' cannot be combined with replay");
        ReplayBuffer probe(replay_capacity, replay_batch);  // validates H, H^
    }
}

TrainResult train(const TrainSettings& settings, const envs::Mdp& mdp) {
    settings.validate(mdp);
    const net::Topology& topo = settings.topology;

    RandomStream init_rng(RandomStream::derive_seed(settings.seed, 0));
    RandomStream env_rng(RandomStream::derive_seed(settings.seed, 1));
    RandomStream policy_rng(RandomStream::derive_seed(settings.seed, 2));
    RandomStream replay_rng(RandomStream::derive_seed(settings.seed, 3));

    TrainResult res;
    res.topology = topo;
    net::WeightVector theta = net::initialize(settings.init, topo, init_rng);

    const bool use_replay = settings.replay_enabled;
    ReplayBuffer buffer(use_replay ? settings.replay_capacity : 1,
                        use_replay ? settings.replay_batch : 1);

    auto snapshot = [&](long step) {
        net::Checkpoint c;
        c.topology = topo;
        c.theta = theta;
        c.step = step;
        c.env_rng = env_rng.serialize();
        c.policy_rng = policy_rng.serialize();
        c.replay_rng = replay_rng.serialize();
        res.checkpoints.push_back(std::move(c));
    };

    const double guard_sq = settings.guard * settings.guard;
    int x = envs::sample_initial_state(mdp, env_rng);

    for (long n = 0; n < settings.steps; ++n) {
        const bool snap = n % settings.checkpoint_every == 0;
        if (snap) snapshot(n);

        const double gamma = settings.schedule.gamma(n);
        const ActionChoice choice =
            select_action(topo, theta, mdp.states[x], settings.policy, n, policy_rng);
        res.tie_count += choice.tie ? 1 : 0;
        const auto [y, r] = envs::sample_transition(mdp, x, choice.action, env_rng);
        const Transition t{x, choice.action, r, y};

        RecordRow row;
        row.n = n;
        row.state = x;
        row.action = choice.action;
        row.reward = r;
        row.next_state = y;
        row.gamma = gamma;
        row.checkpointed = snap;

        if (use_replay) {
            buffer.push(n, t);
            if (buffer.ready()) {
                const auto drawn = buffer.sample(replay_rng);
                std::vector<Transition> batch;
                batch.reserve(drawn.size());
                for (const auto& [step, tr] : drawn) {
                    row.batch.push_back(step);
                    batch.push_back(tr);
                }
                theta = step_replay(mdp, topo, theta, batch, gamma);
            }
            // Warm-up steps leave theta untouched; the row still logs the
            // observed transition so the buffer contents stay reconstructible.
        } else if (settings.update == UpdateMode::Expected) {
            theta = step_expected(mdp, topo, theta, x, choice.action, gamma);
        } else {
            theta = step_online(mdp, topo, theta, t, gamma);
        }

        res.record.rows.push_back(std::move(row));

        double ss = 0.0;
        for (double w : theta) ss += w * w;
        if (!(ss <= guard_sq)) {  // catches NaN and overflow as well
            res.status = TrainStatus::Diverged;
            res.diverged_at = n;
            break;
        }
        x = y;
    }

    if (res.status == TrainStatus::Completed) snapshot(settings.steps);
    res.theta_final = std::move(theta);
    return res;
}

}  // namespace qlab::train
