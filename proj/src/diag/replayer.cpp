#include "qlab/diag/replayer.hpp"

#include <algorithm>

#include "qlab/common/error.hpp"

namespace qlab::diag {

RunReplayer::RunReplayer(const train::TrainRecord& record,
                         std::vector<net::Checkpoint> checkpoints, const envs::Mdp& mdp,
                         train::UpdateMode mode)
    : record_(record), checkpoints_(std::move(checkpoints)), mdp_(mdp), mode_(mode) {
    record_.validate();
    if (checkpoints_.empty())
        throw PreconditionError("replayer: no checkpoints to reconstruct from");
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        const auto& c = checkpoints_[i];
        if (i > 0 && c.step <= checkpoints_[i - 1].step)
            throw PreconditionError("replayer: checkpoint steps not strictly increasing");
        if (c.topology != checkpoints_.front().topology)
            throw PreconditionError("replayer: checkpoints disagree on the topology");
        c.topology.check_theta(c.theta);
    }
    if (checkpoints_.front().step != 0)
        throw PreconditionError("replayer: first checkpoint must hold the initial weights");
    cursor_ = 0;
    theta_ = checkpoints_.front().theta;
}

void RunReplayer::apply_step(long n) {
    const train::RecordRow& row = record_.rows[static_cast<std::size_t>(n)];
    const net::Topology& topo = topology();
    switch (mode_) {
        case train::UpdateMode::Replay: {
            if (row.batch.empty()) return;  // warm-up: no update happened
            std::vector<train::Transition> batch;
            batch.reserve(row.batch.size());
            for (long b : row.batch) batch.push_back(record_.transition_at(b));
            theta_ = train::step_replay(mdp_, topo, theta_, batch, row.gamma);
            return;
        }
        case train::UpdateMode::Expected:
            theta_ = train::step_expected(mdp_, topo, theta_, row.state, row.action, row.gamma);
            return;
        case train::UpdateMode::Online:
            theta_ = train::step_online(mdp_, topo, theta_, record_.transition_at(n), row.gamma);
            return;
    }
}

const net::WeightVector& RunReplayer::theta_at(long n) {
    if (n < 0 || n > steps())
        throw InputError("replayer: step " + std::to_string(n) + " outside 0.." +
                         std::to_string(steps()));
    if (n < cursor_) {
        // Restart from the nearest checkpoint at or before n.
        const auto it = std::upper_bound(
            checkpoints_.begin(), checkpoints_.end(), n,
            [](long step, const net::Checkpoint& c) { return step < c.step; });
        const net::Checkpoint& base = *(it - 1);
        cursor_ = base.step;
        theta_ = base.theta;
    }
    while (cursor_ < n) {
        if (cursor_ >= steps())
            throw PreconditionError("replayer: record ends at step " + std::to_string(steps()) +
                                    ", cannot reach " + std::to_string(n));
        apply_step(cursor_);
        ++cursor_;
        // Integrity: a stored snapshot of this step must match the rebuilt one.
        const auto it = std::lower_bound(
            checkpoints_.begin(), checkpoints_.end(), cursor_,
            [](const net::Checkpoint& c, long step) { return c.step < step; });
        if (it != checkpoints_.end() && it->step == cursor_ && !(it->theta == theta_))
            throw PreconditionError("replayer: rebuilt weights disagree with the checkpoint at step " +
                                    std::to_string(cursor_));
    }
    return theta_;
}

}  // namespace qlab::diag
