#pragma once

#include <vector>

#include "qlab/envs/mdp.hpp"
#include "qlab/net/checkpoint.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::diag {

// Reconstructs the full weight path of a finished run from its record and
// periodic checkpoints: determinism makes per-step snapshots unnecessary. The
// replayer re-applies the recorded updates (sampled, expected, or mini-batch
// depending on the run's mode) from the nearest checkpoint at or before the
// requested step, and cross-checks every checkpoint it passes bit for bit.
class RunReplayer {
public:
    RunReplayer(const train::TrainRecord& record, std::vector<net::Checkpoint> checkpoints,
                const envs::Mdp& mdp, train::UpdateMode mode);

    // Weights before the update of step n (n = steps() gives the final ones).
    // Sequential access is O(1) amortized per step; random access restarts
    // from the nearest earlier checkpoint.
    const net::WeightVector& theta_at(long n);

    long steps() const { return static_cast<long>(record_.rows.size()); }
    const net::Topology& topology() const { return checkpoints_.front().topology; }
    const train::TrainRecord& record() const { return record_; }

private:
    void apply_step(long n);  // cursor: theta_ for step n -> step n + 1

    train::TrainRecord record_;
    std::vector<net::Checkpoint> checkpoints_;
    const envs::Mdp& mdp_;
    train::UpdateMode mode_;
    long cursor_ = 0;
    net::WeightVector theta_;
};

}  // namespace qlab::diag
