#include "qlab/train/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <set>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::train {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

const json* maybe(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

long as_long(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return v.get<long>();
}

std::uint64_t as_u64(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(where + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) throw ConfigError(where + ": expected true/false");
    return v.get<bool>();
}

std::vector<int> as_width_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array of widths");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const long w = as_long(v[i], where + "[" + std::to_string(i) + "]");
        if (w < 1)
            throw ConfigError(where + "[" + std::to_string(i) + "]: width must be >= 1");
        out.push_back(static_cast<int>(w));
    }
    return out;
}

UpdateMode parse_update(const std::string& name, const std::string& where) {
    if (name == "online") return UpdateMode::Online;
    if (name == "expected") return UpdateMode::Expected;
    throw ConfigError(where + ": unknown update mode '" + name + "' (online|expected)");
}

PolicyMode parse_policy_mode(const std::string& name, const std::string& where) {
    if (name == "greedy") return PolicyMode::Greedy;
    if (name == "epsilon_greedy") return PolicyMode::EpsilonGreedy;
    throw ConfigError(where + ": unknown mode '" + name + "' (greedy|epsilon_greedy)");
}

net::ActivationKind parse_activation_cfg(const std::string& name, const std::string& where) {
    try {
        return net::parse_activation(name);
    } catch (const InputError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

net::InitKind parse_init_cfg(const std::string& name, const std::string& where) {
    try {
        return net::parse_init(name);
    } catch (const InputError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

std::string update_mode_name(UpdateMode mode) {
    switch (mode) {
        case UpdateMode::Online: return "online";
        case UpdateMode::Expected: return "expected";
        case UpdateMode::Replay: return "replay";
    }
    return "online";
}

RunConfig config_from_json_text(const std::string& text, const std::string& origin,
                                const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
    check_keys(j, origin, {"env", "network", "schedule", "policy", "replay", "run"});

    RunConfig cfg;

    const json* env = maybe(j, "env");
    if (!env) throw ConfigError(origin + ": missing section 'env'");
    check_keys(*env, origin + ": env", {"path"});
    const json* path = maybe(*env, "path");
    if (!path) throw ConfigError(origin + ": env.path is required");
    cfg.env_path = as_string(*path, origin + ": env.path");
    cfg.resolved_env_path =
        (std::filesystem::path(base_dir) / cfg.env_path).lexically_normal().string();

    const json* netj = maybe(j, "network");
    if (!netj) throw ConfigError(origin + ": missing section 'network'");
    check_keys(*netj, origin + ": network", {"hidden", "sublayer", "activation", "init", "seed"});
    if (const json* v = maybe(*netj, "hidden"))
        cfg.hidden = as_width_list(*v, origin + ": network.hidden");
    const json* sub = maybe(*netj, "sublayer");
    if (!sub) throw ConfigError(origin + ": network.sublayer is required");
    cfg.sublayer = as_width_list(*sub, origin + ": network.sublayer");
    if (cfg.sublayer.empty())
        throw ConfigError(origin + ": network.sublayer: need at least one action");
    const json* act = maybe(*netj, "activation");
    if (!act) throw ConfigError(origin + ": network.activation is required");
    const std::string act_where = origin + ": network.activation";
    if (act->is_array()) {
        if (act->size() != cfg.hidden.size() + 1)
            throw ConfigError(act_where + ": expected " + std::to_string(cfg.hidden.size() + 1) +
                              " names (one per hidden layer plus the sublayers), got " +
                              std::to_string(act->size()));
        for (std::size_t i = 0; i < act->size(); ++i)
            cfg.activations.push_back(parse_activation_cfg(
                as_string((*act)[i], act_where + "[" + std::to_string(i) + "]"), act_where));
    } else {
        const auto kind = parse_activation_cfg(as_string(*act, act_where), act_where);
        cfg.activations.assign(cfg.hidden.size() + 1, kind);
    }
    if (const json* v = maybe(*netj, "init"))
        cfg.init = parse_init_cfg(as_string(*v, origin + ": network.init"),
                                  origin + ": network.init");
    const json* seed = maybe(*netj, "seed");
    if (!seed) throw ConfigError(origin + ": network.seed is required");
    cfg.seed = as_u64(*seed, origin + ": network.seed");

    if (const json* sch = maybe(j, "schedule")) {
        check_keys(*sch, origin + ": schedule", {"c", "n0", "p"});
        if (const json* v = maybe(*sch, "c")) cfg.schedule.c = as_double(*v, origin + ": schedule.c");
        if (const json* v = maybe(*sch, "n0"))
            cfg.schedule.n0 = as_double(*v, origin + ": schedule.n0");
        if (const json* v = maybe(*sch, "p")) cfg.schedule.p = as_double(*v, origin + ": schedule.p");
    }

    if (const json* pol = maybe(j, "policy")) {
        check_keys(*pol, origin + ": policy", {"mode", "eps0", "decay", "floor"});
        if (const json* v = maybe(*pol, "mode"))
            cfg.policy.mode = parse_policy_mode(as_string(*v, origin + ": policy.mode"),
                                                origin + ": policy.mode");
        if (const json* v = maybe(*pol, "eps0"))
            cfg.policy.eps0 = as_double(*v, origin + ": policy.eps0");
        if (const json* v = maybe(*pol, "decay"))
            cfg.policy.decay = as_double(*v, origin + ": policy.decay");
        if (const json* v = maybe(*pol, "floor"))
            cfg.policy.floor = as_double(*v, origin + ": policy.floor");
    }

    if (const json* rep = maybe(j, "replay")) {
        check_keys(*rep, origin + ": replay", {"enabled", "capacity", "batch"});
        if (const json* v = maybe(*rep, "enabled"))
            cfg.replay_enabled = as_bool(*v, origin + ": replay.enabled");
        if (const json* v = maybe(*rep, "capacity"))
            cfg.replay_capacity = static_cast<int>(as_long(*v, origin + ": replay.capacity"));
        if (const json* v = maybe(*rep, "batch"))
            cfg.replay_batch = static_cast<int>(as_long(*v, origin + ": replay.batch"));
    }

    const json* run = maybe(j, "run");
    if (!run) throw ConfigError(origin + ": missing section 'run'");
    check_keys(*run, origin + ": run", {"steps", "checkpoint_every", "guard", "update"});
    const json* steps = maybe(*run, "steps");
    if (!steps) throw ConfigError(origin + ": run.steps is required");
    cfg.steps = as_long(*steps, origin + ": run.steps");
    if (const json* v = maybe(*run, "checkpoint_every"))
        cfg.checkpoint_every = as_long(*v, origin + ": run.checkpoint_every");
    if (const json* v = maybe(*run, "guard")) cfg.guard = as_double(*v, origin + ": run.guard");
    if (const json* v = maybe(*run, "update"))
        cfg.update = parse_update(as_string(*v, origin + ": run.update"),
                                  origin + ": run.update");

    // Everything that does not need the MDP is checked here so a bad file is
    // rejected before any artifact is produced.
    try {
        cfg.schedule.validate();
        cfg.policy.validate();
        if (cfg.steps < 0) throw ConfigError("run.steps: must be >= 0");
        if (cfg.checkpoint_every < 1) throw ConfigError("run.checkpoint_every: must be >= 1");
        if (!(cfg.guard > 0.0)) throw ConfigError("run.guard: must be > 0");
        if (cfg.replay_enabled) {
            if (cfg.update == UpdateMode::Expected)
                throw ConfigError("run.update: 'expected' cannot be combined with replay");
            ReplayBuffer probe(cfg.replay_capacity, cfg.replay_batch);
        }
    } catch (const InputError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return config_from_json_text(read_text_file(path), path, dir);
}

std::string RunConfig::canonical_text() const {
    json j;
    j["env"]["path"] = env_path;
    j["network"]["hidden"] = hidden;
    j["network"]["sublayer"] = sublayer;
    json acts = json::array();
    for (auto a : activations) acts.push_back(net::activation_name(a));
    j["network"]["activation"] = acts;
    j["network"]["init"] = net::init_name(init);
    j["network"]["seed"] = seed;
    j["schedule"]["c"] = schedule.c;
    j["schedule"]["n0"] = schedule.n0;
    j["schedule"]["p"] = schedule.p;
    j["policy"]["mode"] = policy.mode == PolicyMode::Greedy ? "greedy" : "epsilon_greedy";
    j["policy"]["eps0"] = policy.eps0;
    j["policy"]["decay"] = policy.decay;
    j["policy"]["floor"] = policy.floor;
    j["replay"]["enabled"] = replay_enabled;
    j["replay"]["capacity"] = replay_capacity;
    j["replay"]["batch"] = replay_batch;
    j["run"]["steps"] = steps;
    j["run"]["checkpoint_every"] = checkpoint_every;
    j["run"]["guard"] = guard;
    j["run"]["update"] = update_mode_name(update);
    return j.dump(2) + "\n";
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical_text()); }

net::Topology RunConfig::topology_for(const envs::Mdp& mdp) const {
    net::Topology t;
    t.input_dim = mdp.state_dim();
    t.hidden = hidden;
    t.sublayer = sublayer;
    t.activations = activations;
    t.validate();
    return t;
}

TrainSettings RunConfig::settings_for(const envs::Mdp& mdp) const {
    TrainSettings s;
    s.topology = topology_for(mdp);
    s.init = init;
    s.seed = seed;
    s.schedule = schedule;
    s.policy = policy;
    s.replay_enabled = replay_enabled;
    s.replay_capacity = replay_capacity;
    s.replay_batch = replay_batch;
    s.steps = steps;
    s.checkpoint_every = checkpoint_every;
    s.guard = guard;
    s.update = update;
    return s;
}

}  // namespace qlab::train
