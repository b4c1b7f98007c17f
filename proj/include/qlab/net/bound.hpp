#pragma once

#include <vector>

#include "qlab/net/network.hpp"

namespace qlab::net {

struct BoundViolation {
    int state_index;  // index into the probed sample
    int action;
    double q;
    double bound;
};

// Output-magnitude audit. With a squashing output activation (|act| <= c) the
// enforced bound is the loose product form c*l(a)*||theta_a||_2; the Cauchy-
// Schwarz factor sqrt(l(a)) is tight, so the report records the ratio against
// c*sqrt(l(a))*||theta_a||_2 as well (recorded, never enforced). For
// non-squashing output activations no a-priori bound holds and the report
// instead carries the empirical constant max |Q| / ||theta||_2 over the sample.
struct BoundReport {
    bool squashing = false;
    long probes = 0;
    std::vector<BoundViolation> violations;  // squashing mode only
    double max_ratio_enforced = 0.0;         // |Q| / (c*l(a)*||theta_a||)
    double max_ratio_tight = 0.0;            // |Q| / (c*sqrt(l(a))*||theta_a||)
    double empirical_constant = 0.0;         // non-squashing: max |Q| / ||theta||
    bool passed() const { return violations.empty(); }
};

BoundReport q_bound_check(const Topology& topo, const WeightVector& theta,
                          const std::vector<std::vector<double>>& sample_states);

}  // namespace qlab::net
