#include "qlab/diag/field.hpp"

#include <cmath>
#include <cstdlib>

#include "qlab/common/error.hpp"

namespace qlab::diag {

GradientFieldEstimate averaged_gradient(const net::Topology& topo,
                                        const net::WeightVector& theta,
                                        const measure::OccupationMeasure& mu,
                                        const envs::Mdp& mdp) {
    if (mu.n_states != mdp.n_states() || mu.n_actions != mdp.n_actions)
        throw InputError("averaged_gradient: measure dimensions do not match the mdp");
    mu.validate();

    GradientFieldEstimate est;
    est.theta = theta;
    est.mu = mu;
    est.gradient.assign(theta.size(), 0.0);
    for (const auto& atom : mu.atoms) {
        const auto dir = train::expected_update_direction(mdp, topo, theta, atom.state, atom.action);
        for (std::size_t j = 0; j < est.gradient.size(); ++j)
            est.gradient[j] += atom.weight * dir[j];
    }
    double ss = 0.0;
    for (double g : est.gradient) ss += g * g;
    est.norm = std::sqrt(ss);
    return est;
}

UndertrainingReport undertraining_scan(const net::Topology& topo,
                                       const net::WeightVector& theta,
                                       const measure::OccupationMeasure& tail,
                                       const envs::Mdp& mdp,
                                       const envs::OptimalSolution& oracle) {
    if (tail.n_states != mdp.n_states() || tail.n_actions != mdp.n_actions)
        throw InputError("undertraining_scan: measure dimensions do not match the mdp");
    if (static_cast<int>(oracle.pi_star.size()) != mdp.n_states())
        throw InputError("undertraining_scan: oracle solved for a different state count");
    tail.validate();

    UndertrainingReport report;
    report.greedy_mismatch.assign(static_cast<std::size_t>(mdp.n_states()), false);
    for (int x = 0; x < mdp.n_states(); ++x) {
        const auto q = net::q_values(topo, theta, mdp.states[static_cast<std::size_t>(x)]);
        const bool off = envs::greedy_action(q) != oracle.pi_star[static_cast<std::size_t>(x)];
        report.greedy_mismatch[static_cast<std::size_t>(x)] = off;
        if (off) ++report.mismatch_count;
    }

    for (int a = 0; a < mdp.n_actions; ++a) {
        RegionReport region;
        region.action = a;
        for (int x = 0; x < mdp.n_states(); ++x)
            if (oracle.pi_star[static_cast<std::size_t>(x)] == a) region.states.push_back(x);
        if (region.states.empty()) continue;

        double err = 0.0;
        for (int x : region.states) {
            region.mass += tail.weight_of(x, a);
            const auto q = net::q_values(topo, theta, mdp.states[static_cast<std::size_t>(x)]);
            err += std::abs(q[static_cast<std::size_t>(a)] -
                            oracle.q_star[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)]);
        }
        region.mean_q_error = err / static_cast<double>(region.states.size());
        report.regions.push_back(region);
    }
    return report;
}

}  // namespace qlab::diag
