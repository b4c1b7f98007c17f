#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/common/rng.hpp"

namespace qlab::envs {

// One enumerated kernel row: (next-state index, probability) over the support.
using KernelRow = std::vector<std::pair<int, double>>;

// Finite MDP with states embedded in R^k. Value type; validate() enforces the
// structural invariants (index ranges, probabilities, row sums within 1e-12,
// discount in (0,1), equal embedding dimensions).
struct Mdp {
    std::vector<std::vector<double>> states;    // |S| embeddings, each of dim k
    int n_actions = 0;
    std::vector<std::vector<KernelRow>> kernel; // [state][action]
    std::vector<std::vector<double>> reward;    // [state][action]
    double discount = 0.0;                      // alpha
    std::vector<double> initial_dist;           // over states, sums to 1

    int n_states() const { return static_cast<int>(states.size()); }
    int state_dim() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }

    const KernelRow& row(int state, int action) const;  // bounds-checked
    double reward_at(int state, int action) const;

    void validate() const;
};

// Row-stochastic |S| x |S| state transition matrix (a policy composed with the
// kernel, or any frozen Markov chain on the state space).
struct FrozenKernel {
    std::vector<std::vector<double>> p;

    int size() const { return static_cast<int>(p.size()); }
    void validate() const;  // square, entries >= 0, rows sum to 1 within 1e-12
};

// JSON file format: object with keys "states", "actions", "kernel", "reward",
// "discount", "initial_dist". kernel[x][a] is a list of [next_index, prob]
// pairs. Validation failures name the offending field.
Mdp load_mdp(const std::string& path);
Mdp mdp_from_json_text(const std::string& text, const std::string& origin);
std::string mdp_to_json_text(const Mdp& mdp);
void save_mdp(const Mdp& mdp, const std::string& path);

// Draw a successor by inverse CDF over the enumerated row; returns (y, r(x,a)).
std::pair<int, double> sample_transition(const Mdp& mdp, int state, int action,
                                         RandomStream& rng);

// Initial state draw from initial_dist (same inverse-CDF walk).
int sample_initial_state(const Mdp& mdp, RandomStream& rng);

// Exact E[max_a' q(y,a') | x,a] by enumerating the kernel row (compensated
// summation; no sampling). q_of_state(y) returns the action-value vector at y.
double expected_max_q(const Mdp& mdp, int state, int action,
                      const std::function<std::vector<double>(int)>& q_of_state);

}  // namespace qlab::envs
