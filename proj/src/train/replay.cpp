#include "qlab/train/replay.hpp"

#include <numeric>

#include "qlab/common/error.hpp"

namespace qlab::train {

ReplayBuffer::ReplayBuffer(int capacity, int batch) : capacity_(capacity), batch_(batch) {
    if (capacity < 1) throw ConfigError("replay.capacity: must be >= 1");
    if (batch < 1) throw ConfigError("replay.batch: must be >= 1");
    if (batch > capacity)
        throw ConfigError("replay.batch: " + std::to_string(batch) +
                          " exceeds capacity " + std::to_string(capacity));
}

void ReplayBuffer::push(long step, const Transition& t) {
    items_.emplace_back(step, t);
    if (static_cast<int>(items_.size()) > capacity_) items_.pop_front();
}

std::vector<std::pair<long, Transition>> ReplayBuffer::sample(RandomStream& rng) {
    const int n = size();
    if (n < batch_)
        throw PreconditionError("replay buffer holds " + std::to_string(n) +
                                " transitions, need " + std::to_string(batch_));
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::pair<long, Transition>> out;
    out.reserve(batch_);
    for (int i = 0; i < batch_; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
        out.push_back(items_[idx[i]]);
    }
    return out;
}

}  // namespace qlab::train
