#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qlab::cli {

// What a finished run left on disk. All artifact paths are relative to the
// run directory; env_path is stored resolved so later commands can reload the
// MDP no matter where they are invoked from.
struct RunManifest {
    std::string run_id;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string status;  // "completed" | "diverged" | "failed"
    long steps = 0;
    long diverged_at = -1;
    long tie_count = 0;
    std::string env_path;  // resolved MDP file location

    std::string config_path = "config.json";
    std::string record_path = "record.csv";
    std::vector<std::string> checkpoint_paths;
    std::vector<std::string> report_paths;
    std::string final_checkpoint_digest;  // FNV-1a of the last checkpoint file

    bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json_text(const RunManifest& m);
RunManifest manifest_from_json_text(const std::string& text, const std::string& origin);
void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace qlab::cli
