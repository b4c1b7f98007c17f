#pragma once

#include <deque>
#include <vector>

#include "qlab/common/rng.hpp"

namespace qlab::train {

struct Transition {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;

    bool operator==(const Transition&) const = default;
};

// Ring of the last H transitions, keyed by the step that produced them.
// Mini-batches are drawn uniformly without replacement (partial Fisher-Yates
// over the current contents), so indices within a batch are distinct.
class ReplayBuffer {
public:
    ReplayBuffer(int capacity, int batch);  // H >= 1, 1 <= batch <= H

    void push(long step, const Transition& t);
    bool ready() const { return size() >= batch_; }
    int size() const { return static_cast<int>(items_.size()); }
    int capacity() const { return capacity_; }
    int batch() const { return batch_; }

    // Batch in draw order; PreconditionError if fewer than `batch` items.
    std::vector<std::pair<long, Transition>> sample(RandomStream& rng);

private:
    int capacity_;
    int batch_;
    std::deque<std::pair<long, Transition>> items_;
};

}  // namespace qlab::train
