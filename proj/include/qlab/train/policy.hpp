#pragma once

#include <vector>

#include "qlab/common/rng.hpp"
#include "qlab/envs/mdp.hpp"
#include "qlab/net/network.hpp"

namespace qlab::train {

enum class PolicyMode { Greedy, EpsilonGreedy };

// Exploration schedule eps(n) = max(floor, eps0 * decay^n); decay = 1 keeps it
// constant. Greedy mode never draws from the stream.
struct PolicyConfig {
    PolicyMode mode = PolicyMode::Greedy;
    double eps0 = 0.0;
    double decay = 1.0;
    double floor = 0.0;

    double epsilon(long n) const;
    void validate() const;
};

struct ActionChoice {
    int action = 0;
    bool explored = false;  // the uniform branch was taken
    bool tie = false;       // greedy branch saw multiple exact maxima
};

// Greedy argmax with ties to the lowest action index; exploration draws one
// uniform01 and, if exploring, one integer.
ActionChoice select_action(const net::Topology& topo, const net::WeightVector& theta,
                           const std::vector<double>& x, const PolicyConfig& policy,
                           long n, RandomStream& rng);

// pi_theta(a | x) as explicit probabilities for the same policy.
std::vector<double> action_probabilities(const net::Topology& topo,
                                         const net::WeightVector& theta,
                                         const std::vector<double>& x,
                                         const PolicyConfig& policy, long n);

// State kernel p~_theta: the policy at step n composed with the MDP kernel.
envs::FrozenKernel frozen_kernel(const envs::Mdp& mdp, const net::Topology& topo,
                                 const net::WeightVector& theta,
                                 const PolicyConfig& policy, long n);

}  // namespace qlab::train
