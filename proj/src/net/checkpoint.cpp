#include "qlab/net/checkpoint.hpp"

#include <json.hpp>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::net {

using nlohmann::json;

namespace {

json topology_to_json(const Topology& t) {
    json j;
    j["input_dim"] = t.input_dim;
    j["hidden"] = t.hidden;
    j["sublayer"] = t.sublayer;
    json acts = json::array();
    for (ActivationKind k : t.activations) acts.push_back(activation_name(k));
    j["activations"] = std::move(acts);
    return j;
}

Topology topology_from_json(const json& j, const std::string& origin) {
    Topology t;
    try {
        j.at("input_dim").get_to(t.input_dim);
        j.at("hidden").get_to(t.hidden);
        j.at("sublayer").get_to(t.sublayer);
        for (const auto& name : j.at("activations"))
            t.activations.push_back(parse_activation(name.get<std::string>()));
    } catch (const json::exception& e) {
        throw InputError(origin + ": topology: " + e.what());
    }
    t.validate();
    return t;
}

}  // namespace

std::string checkpoint_to_json_text(const Checkpoint& c) {
    json j;
    j["step"] = c.step;
    j["topology"] = topology_to_json(c.topology);
    j["theta"] = c.theta;
    j["rng"] = {{"env", c.env_rng}, {"policy", c.policy_rng}, {"replay", c.replay_rng}};
    return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
    Checkpoint c;
    try {
        j.at("step").get_to(c.step);
        c.topology = topology_from_json(j.at("topology"), origin);
        j.at("theta").get_to(c.theta);
        const json& rng = j.at("rng");
        rng.at("env").get_to(c.env_rng);
        rng.at("policy").get_to(c.policy_rng);
        rng.at("replay").get_to(c.replay_rng);
    } catch (const json::exception& e) {
        throw InputError(origin + ": " + e.what());
    }
    c.topology.check_theta(c.theta);
    if (c.step < 0) throw InputError(origin + ": step must be >= 0");
    return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    write_text_file(path, checkpoint_to_json_text(c));
}

Checkpoint load_checkpoint(const std::string& path) {
    return checkpoint_from_json_text(read_text_file(path), path);
}

}  // namespace qlab::net
