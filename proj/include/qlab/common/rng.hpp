#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>

namespace qlab {

// Deterministic random stream with serializable state.
//
// All draws are derived from raw mt19937_64 output through fixed integer
// arithmetic (never through std::*_distribution, whose output is
// implementation-defined), so a seed reproduces the same sequence everywhere.
class RandomStream {
public:
    RandomStream() : engine_(0) {}
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0,n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n);

    std::string serialize() const;
    static RandomStream deserialize(const std::string& state);

    bool operator==(const RandomStream& other) const { return engine_ == other.engine_; }

    // Independent substream seed for a named role (policy/env/replay/init).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

private:
    std::mt19937_64 engine_;
};

}  // namespace qlab
