#include "qlab/train/policy.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"
#include "qlab/envs/solve.hpp"
#include "qlab/train/schedule.hpp"

namespace qlab::train {

void StepSchedule::validate() const {
    if (!(c > 0.0) || !std::isfinite(c))
        throw ConfigError("schedule.c: must be a positive finite number, got " + format_double(c));
    if (!(n0 >= 1.0) || !std::isfinite(n0))
        throw ConfigError("schedule.n0: must be >= 1, got " + format_double(n0));
    if (!(p > 0.5 && p <= 1.0))
        throw ConfigError("schedule.p: must lie in (0.5, 1], got " + format_double(p));
}

double PolicyConfig::epsilon(long n) const {
    if (mode == PolicyMode::Greedy) return 0.0;
    return std::max(floor, eps0 * std::pow(decay, static_cast<double>(n)));
}

void PolicyConfig::validate() const {
    if (mode == PolicyMode::Greedy) return;
    if (!(eps0 >= 0.0 && eps0 <= 1.0))
        throw ConfigError("policy.eps0: must lie in [0,1], got " + format_double(eps0));
    if (!(decay > 0.0 && decay <= 1.0))
        throw ConfigError("policy.decay: must lie in (0,1], got " + format_double(decay));
    if (!(floor >= 0.0 && floor <= 1.0))
        throw ConfigError("policy.floor: must lie in [0,1], got " + format_double(floor));
}

namespace {

ActionChoice greedy_choice(const std::vector<double>& q) {
    ActionChoice ch;
    ch.action = envs::greedy_action(q);
    int maxima = 0;
    for (double v : q) maxima += (v == q[ch.action]);
    ch.tie = maxima > 1;
    return ch;
}

}  // namespace

ActionChoice select_action(const net::Topology& topo, const net::WeightVector& theta,
                           const std::vector<double>& x, const PolicyConfig& policy,
                           long n, RandomStream& rng) {
    if (policy.mode == PolicyMode::EpsilonGreedy) {
        const double eps = policy.epsilon(n);
        if (rng.uniform01() < eps) {
            ActionChoice ch;
            ch.action = static_cast<int>(rng.below(topo.n_actions()));
            ch.explored = true;
            return ch;
        }
    }
    return greedy_choice(net::q_values(topo, theta, x));
}

std::vector<double> action_probabilities(const net::Topology& topo,
                                         const net::WeightVector& theta,
                                         const std::vector<double>& x,
                                         const PolicyConfig& policy, long n) {
    const auto q = net::q_values(topo, theta, x);
    const int na = topo.n_actions();
    const double eps = policy.epsilon(n);
    std::vector<double> probs(na, eps / na);
    probs[envs::greedy_action(q)] += 1.0 - eps;
    return probs;
}

envs::FrozenKernel frozen_kernel(const envs::Mdp& mdp, const net::Topology& topo,
                                 const net::WeightVector& theta,
                                 const PolicyConfig& policy, long n) {
    mdp.validate();
    if (topo.n_actions() != mdp.n_actions)
        throw InputError("frozen_kernel: topology has " + std::to_string(topo.n_actions()) +
                         " actions, mdp has " + std::to_string(mdp.n_actions));
    envs::FrozenKernel fk;
    const int ns = mdp.n_states();
    fk.p.assign(ns, std::vector<double>(ns, 0.0));
    for (int xi = 0; xi < ns; ++xi) {
        const auto probs = action_probabilities(topo, theta, mdp.states[xi], policy, n);
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (probs[a] == 0.0) continue;
            for (const auto& [y, p] : mdp.kernel[xi][a]) fk.p[xi][y] += probs[a] * p;
        }
    }
    fk.validate();
    return fk;
}

}  // namespace qlab::train
