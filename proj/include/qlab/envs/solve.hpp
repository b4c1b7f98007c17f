#pragma once

#include <vector>

#include "qlab/envs/mdp.hpp"

namespace qlab::envs {

// Exact reference solution of a finite MDP.
struct OptimalSolution {
    std::vector<std::vector<double>> q_star;  // |S| x |A|
    std::vector<double> v_star;               // max_a q_star
    std::vector<int> pi_star;                 // argmax, ties to the lowest action index
    double residual = 0.0;                    // sup-norm Bellman residual of q_star
    int iterations = 0;
};

// Value iteration with the contraction stopping rule: stop once the sup-norm
// change drops below tol*(1-alpha)/alpha, which bounds ||q - q*||_inf by tol.
OptimalSolution value_iteration(const Mdp& mdp, double tol = 1e-10, int max_iters = 1000000);

// Greedy argmax over a Q table, ties to the lowest action index.
int greedy_action(const std::vector<double>& q_row);

// One stationary distribution per recurrent class of the support digraph of
// `fk` (recurrent classes found by SCC condensation, each distribution by a
// direct linear solve of pi P = pi, sum pi = 1). Ordered by the smallest state
// index in the class. Each returned pi satisfies ||pi P - pi||_1 <= tol.
std::vector<std::vector<double>> stationary_distributions(const FrozenKernel& fk,
                                                          double tol = 1e-10);

}  // namespace qlab::envs
