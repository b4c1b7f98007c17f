#pragma once

#include "qlab/envs/mdp.hpp"

namespace qlab::envs {

// 5-state, 2-action chain (actions 0=left, 1=right; moves succeed w.p. 0.9,
// otherwise stay; edge rows are deterministic). Reward 1 for action 1 at the
// right end, 0 elsewhere; discount 0.8; uniform start. Optimal policy: always
// right, so the converged sampling path parks on a deterministic kernel row.
Mdp chain_mdp();

// Two disconnected 3-cycles (states 0-2 and 3-5). Action 0 steps forward along
// the cycle w.p. 0.8, action 1 steps backward w.p. 0.8, both stay otherwise
// and never leave their component; every policy therefore has exactly two
// recurrent classes. Reward 0.5 for action 0, 0.2 for action 1; discount 0.8.
// start_component in {0,1} selects a point start at state 0 or state 3.
Mdp reducible_mdp(int start_component);

// Coverage-trap benchmark: 4 states on a reflecting random walk whose dynamics
// ignore the action, so only rewards differ. Action 0 pays 0.3 everywhere;
// action 1 pays 2.0 on states {2,3} and 0 elsewhere; discount 0.5. Action 1 is
// optimal exactly on {2,3}, but a zeroed action-1 readout (see
// net::init_biased_readout) keeps it out of the greedy path forever when eps = 0.
Mdp trap_mdp();

// States where action a is optimal under pi_star (lowest-index tie break):
// region S(a) used by the undertraining scan.
std::vector<int> optimal_region(const std::vector<int>& pi_star, int action);

}  // namespace qlab::envs
