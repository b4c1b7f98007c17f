#pragma once

#include <string>

#include "qlab/common/rng.hpp"
#include "qlab/net/network.hpp"

namespace qlab::net {

enum class InitKind { UniformFanIn, BiasedReadout };

InitKind parse_init(const std::string& name);  // "uniform" | "biased_readout"
std::string init_name(InitKind k);

// Each weight independently uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)],
// drawn in flat-index order (fan_in = source width of the block; readout
// blocks use fan_in = l(a)).
WeightVector init_uniform_fan_in(const Topology& topo, RandomStream& rng);

// Biased variant used by the coverage-trap benchmark: draws exactly the same
// stream as init_uniform_fan_in, then overwrites every readout block with a
// constant: +0.5 for action 0 and 0 for every other action. With a squashing
// output activation this pins Q(x,0) > 0 = Q(x,a!=0) at the start, and pure
// greedy play keeps the zeroed readouts untouched forever.
WeightVector init_biased_readout(const Topology& topo, RandomStream& rng);

WeightVector initialize(InitKind kind, const Topology& topo, RandomStream& rng);

}  // namespace qlab::net
