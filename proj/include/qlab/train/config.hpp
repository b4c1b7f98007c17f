#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/envs/mdp.hpp"
#include "qlab/net/init.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::train {

// Run configuration, parsed from a JSON file with sections
//
//   env      path                       (MDP file, relative to the config file)
//   network  hidden, sublayer, activation, init, seed
//   schedule c, n0, p
//   policy   mode, eps0, decay, floor
//   replay   enabled, capacity, batch
//   run      steps, checkpoint_every, guard, update
//
// Unknown sections or keys are errors, not warnings. `activation` is either a
// single name applied everywhere or one name per layer (hidden count + 1).
struct RunConfig {
    std::string env_path;           // as written in the file
    std::string resolved_env_path;  // joined with the config file's directory

    std::vector<int> hidden;
    std::vector<int> sublayer;
    std::vector<net::ActivationKind> activations;  // hidden.size() + 1 entries
    net::InitKind init = net::InitKind::UniformFanIn;
    std::uint64_t seed = 0;

    StepSchedule schedule;
    PolicyConfig policy;

    bool replay_enabled = false;
    int replay_capacity = 1;
    int replay_batch = 1;

    long steps = 0;
    long checkpoint_every = 1000;
    double guard = 1e6;
    UpdateMode update = UpdateMode::Online;

    // Sorted-key JSON of every setting (env path as written, seed included);
    // parsing the dump and dumping again is byte-stable.
    std::string canonical_text() const;
    std::string hash() const;  // FNV-1a of canonical_text()

    net::Topology topology_for(const envs::Mdp& mdp) const;
    TrainSettings settings_for(const envs::Mdp& mdp) const;
};

RunConfig config_from_json_text(const std::string& text, const std::string& origin,
                                const std::string& base_dir);
RunConfig load_config(const std::string& path);

std::string update_mode_name(UpdateMode mode);

}  // namespace qlab::train
