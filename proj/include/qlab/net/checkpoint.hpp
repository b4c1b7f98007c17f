#pragma once

#include <string>

#include "qlab/net/network.hpp"

namespace qlab::net {

// Weight snapshot: topology descriptor, flat float64 theta (layout documented
// on WeightVector), step index, and the serialized random-stream states of the
// producing run. JSON on disk; round-trips bit-exactly (doubles are emitted in
// shortest round-trip form).
struct Checkpoint {
    Topology topology;
    WeightVector theta;
    long step = 0;
    std::string env_rng, policy_rng, replay_rng;

    bool operator==(const Checkpoint&) const = default;
};

std::string checkpoint_to_json_text(const Checkpoint& c);
Checkpoint checkpoint_from_json_text(const std::string& text, const std::string& origin);
void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qlab::net
