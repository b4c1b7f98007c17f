#include "qlab/common/rng.hpp"

#include <sstream>

#include "qlab/common/error.hpp"

namespace qlab {

std::uint64_t RandomStream::below(std::uint64_t n) {
    if (n == 0) throw InputError("RandomStream::below: n must be positive");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
}

std::string RandomStream::serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

RandomStream RandomStream::deserialize(const std::string& state) {
    RandomStream s;
    std::istringstream is(state);
    is >> s.engine_;
    if (is.fail()) throw InputError("RandomStream::deserialize: malformed state string");
    return s;
}

std::uint64_t RandomStream::derive_seed(std::uint64_t master, std::uint64_t tag) {
    // splitmix64 over master ^ golden-ratio-scaled tag
    std::uint64_t z = master ^ (tag * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace qlab
