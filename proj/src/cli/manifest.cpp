#include "qlab/cli/manifest.hpp"

#include <json.hpp>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::cli {

namespace {

using nlohmann::json;

std::string need_string(const json& obj, const char* key, const std::string& origin) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw InputError(origin + ": missing or non-string field '" + std::string(key) + "'");
    return obj[key].get<std::string>();
}

}  // namespace

std::string manifest_to_json_text(const RunManifest& m) {
    json j;
    j["run_id"] = m.run_id;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["status"] = m.status;
    j["steps"] = m.steps;
    j["diverged_at"] = m.diverged_at;
    j["tie_count"] = m.tie_count;
    j["env_path"] = m.env_path;
    j["config"] = m.config_path;
    j["record"] = m.record_path;
    j["checkpoints"] = m.checkpoint_paths;
    j["reports"] = m.report_paths;
    j["final_checkpoint_digest"] = m.final_checkpoint_digest;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(origin + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError(origin + ": manifest must be a JSON object");

    RunManifest m;
    m.run_id = need_string(j, "run_id", origin);
    m.config_hash = need_string(j, "config_hash", origin);
    m.status = need_string(j, "status", origin);
    if (m.status != "completed" && m.status != "diverged" && m.status != "failed")
        throw InputError(origin + ": unknown status '" + m.status + "'");
    m.env_path = need_string(j, "env_path", origin);
    m.config_path = need_string(j, "config", origin);
    m.record_path = need_string(j, "record", origin);
    m.final_checkpoint_digest = need_string(j, "final_checkpoint_digest", origin);
    try {
        m.seed = j.at("seed").get<std::uint64_t>();
        m.steps = j.at("steps").get<long>();
        m.diverged_at = j.at("diverged_at").get<long>();
        m.tie_count = j.at("tie_count").get<long>();
        m.checkpoint_paths = j.at("checkpoints").get<std::vector<std::string>>();
        m.report_paths = j.at("reports").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw InputError(origin + ": bad field: " + e.what());
    }
    return m;
}

void save_manifest(const RunManifest& m, const std::string& path) {
    write_text_file(path, manifest_to_json_text(m));
}

RunManifest load_manifest(const std::string& path) {
    return manifest_from_json_text(read_text_file(path), path);
}

}  // namespace qlab::cli
