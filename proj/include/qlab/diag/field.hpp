#pragma once

#include <vector>

#include "qlab/envs/mdp.hpp"
#include "qlab/envs/solve.hpp"
#include "qlab/measure/measure.hpp"
#include "qlab/net/network.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::diag {

// Measure-weighted expected-target semi-gradient: the drift field the frozen
// ODE integrates, evaluated at a single (theta, measure) pair.
struct GradientFieldEstimate {
    net::WeightVector theta;
    measure::OccupationMeasure mu;
    net::WeightVector gradient;  // sum over atoms of weight * expected direction
    double norm = 0.0;           // l2 norm of `gradient`
};

GradientFieldEstimate averaged_gradient(const net::Topology& topo,
                                        const net::WeightVector& theta,
                                        const measure::OccupationMeasure& mu,
                                        const envs::Mdp& mdp);

// One optimal-action region S(a) = { x : pi*(x) = a } and how the tail
// measure + the learned Q treat it.
struct RegionReport {
    int action = 0;
    std::vector<int> states;    // S(a), ascending
    double mass = 0.0;          // tail-measure weight on S(a) x {a}
    double mean_q_error = 0.0;  // mean over S(a) of |Q(x,a;theta) - Q*(x,a)|
};

struct UndertrainingReport {
    std::vector<RegionReport> regions;  // one per action with S(a) nonempty
    std::vector<bool> greedy_mismatch;  // per state: argmax_a Q(x,a;theta) != pi*(x)
    int mismatch_count = 0;
};

UndertrainingReport undertraining_scan(const net::Topology& topo,
                                       const net::WeightVector& theta,
                                       const measure::OccupationMeasure& tail,
                                       const envs::Mdp& mdp,
                                       const envs::OptimalSolution& oracle);

}  // namespace qlab::diag
