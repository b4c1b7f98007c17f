#pragma once

#include <string>
#include <vector>

#include "qlab/envs/mdp.hpp"
#include "qlab/net/checkpoint.hpp"
#include "qlab/net/init.hpp"
#include "qlab/net/network.hpp"
#include "qlab/train/policy.hpp"
#include "qlab/train/replay.hpp"
#include "qlab/train/schedule.hpp"

namespace qlab::train {

// One executed step. `batch` holds the step indices of the transitions that
// were averaged when replay is active (empty during buffer warm-up and in
// non-replay runs). `checkpointed` marks steps whose pre-update weights were
// snapshotted.
struct RecordRow {
    long n = 0;
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
    double gamma = 0.0;
    std::vector<long> batch;
    bool checkpointed = false;

    bool operator==(const RecordRow&) const = default;
};

struct TrainRecord {
    std::vector<RecordRow> rows;

    // Rows must cover steps 0..N-1 in order with no gaps.
    void validate() const;
    Transition transition_at(long step) const;

    bool operator==(const TrainRecord&) const = default;
};

// CSV with header n,state,action,reward,next_state,gamma,batch,checkpoint.
// Doubles are printed round-trip exact; batch indices are ';'-joined.
std::string record_to_csv(const TrainRecord& record);
TrainRecord record_from_csv(const std::string& text);
void save_record(const TrainRecord& record, const std::string& path);
TrainRecord load_record(const std::string& path);

enum class UpdateMode { Online, Expected, Replay };

enum class TrainStatus { Completed, Diverged };

struct TrainResult {
    net::Topology topology;
    TrainRecord record;
    std::vector<net::Checkpoint> checkpoints;  // ascending step order
    net::WeightVector theta_final;
    TrainStatus status = TrainStatus::Completed;
    long diverged_at = -1;  // step index when status == Diverged
    long tie_count = 0;     // steps whose greedy argmax was tied
};

// Semi-gradient step on one sampled transition:
//   theta' = theta + gamma * (r + alpha * max_a' Q(x',a') - Q(x,a)) * dQ/dtheta(x,a).
// The bootstrapped target is a constant w.r.t. theta.
net::WeightVector step_online(const envs::Mdp& mdp, const net::Topology& topo,
                              const net::WeightVector& theta, const Transition& t,
                              double gamma);

// Same step with the sampled max-Q target replaced by its exact expectation
// over the enumerated kernel row.
net::WeightVector step_expected(const envs::Mdp& mdp, const net::Topology& topo,
                                const net::WeightVector& theta, int state, int action,
                                double gamma);

// Mini-batch step: the average of per-transition semi-gradients, all evaluated
// at the incoming theta.
net::WeightVector step_replay(const envs::Mdp& mdp, const net::Topology& topo,
                              const net::WeightVector& theta,
                              const std::vector<Transition>& batch, double gamma);

// Update directions (the vector multiplied by gamma in the steps above).
net::WeightVector online_update_direction(const envs::Mdp& mdp, const net::Topology& topo,
                                          const net::WeightVector& theta, const Transition& t);
net::WeightVector expected_update_direction(const envs::Mdp& mdp, const net::Topology& topo,
                                            const net::WeightVector& theta, int state,
                                            int action);

struct TrainSettings {
    net::Topology topology;
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

    UpdateMode mode() const { return replay_enabled ? UpdateMode::Replay : update; }
    void validate(const envs::Mdp& mdp) const;
};

// Runs the loop. Four independent substreams are derived from the master
// seed (init, environment, policy, replay) so that enabling replay does not
// perturb the environment/policy draws. Weights are checkpointed before the
// update of every step with n % checkpoint_every == 0 and once more after the
// final step of a completed run. A non-finite iterate or one whose l2 norm
// exceeds `guard` marks the run diverged at that step instead of throwing.
TrainResult train(const TrainSettings& settings, const envs::Mdp& mdp);

}  // namespace qlab::train
