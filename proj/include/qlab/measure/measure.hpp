#pragma once

#include <string>
#include <vector>

#include "qlab/envs/mdp.hpp"
#include "qlab/measure/time_axis.hpp"
#include "qlab/train/policy.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::measure {

// Finitely supported probability measure on S x A: the executable form of the
// occupation-measure process and its tail limits. Atoms are kept sorted by
// (state, action) with exact zero weights dropped.
struct OccupationMeasure {
    struct Atom {
        int state = 0;
        int action = 0;
        double weight = 0.0;

        bool operator==(const Atom&) const = default;
    };

    int n_states = 0;
    int n_actions = 0;
    std::vector<Atom> atoms;

    double weight_of(int state, int action) const;  // 0 off the support
    void validate() const;  // bounds, nonnegativity, normalization to 1e-12

    bool operator==(const OccupationMeasure&) const = default;
};

// Sorts, coalesces duplicate pairs, drops zero atoms, and normalizes the total
// mass to one. InputError if the total is not positive.
OccupationMeasure make_measure(int n_states, int n_actions,
                               std::vector<OccupationMeasure::Atom> atoms);

// State marginal m(x) = sum_a mu(x, a).
using MarginalHistogram = std::vector<double>;
MarginalHistogram state_marginal(const OccupationMeasure& mu);

// mu(t): the Dirac measure of the step whose interval contains t. Rows with a
// logged mini-batch yield the batch measure instead (1/batch per draw,
// duplicates coalesced); warm-up rows fall back to the observed pair.
OccupationMeasure measure_at(const train::TrainRecord& record, const TimeAxis& axis,
                             const envs::Mdp& mdp, double t);

// Tail average of mu over the final `window` fraction of the time axis. Each
// step contributes the length of its interval's overlap with the window, so
// interior steps carry weight gamma(n) and the boundary step its partial
// overlap; the result is normalized.
OccupationMeasure tail_estimate(const train::TrainRecord& record, const TimeAxis& axis,
                                const envs::Mdp& mdp, double window);

// pi -> pi P for a row-stochastic kernel.
MarginalHistogram pushforward(const MarginalHistogram& marginal, const envs::FrozenKernel& fk);

// 1/2 * l1 distance between probability vectors of equal length.
double total_variation(const MarginalHistogram& a, const MarginalHistogram& b);

// TV distance between two measures on the same S x A set.
double measure_distance(const OccupationMeasure& a, const OccupationMeasure& b);

// TV distance between mu's state marginal and its pushforward through the
// theta-frozen kernel (policy evaluated at step n's exploration rate). Zero
// characterizes stationary marginals.
double stationarity_gap(const OccupationMeasure& mu, const net::Topology& topo,
                        const net::WeightVector& theta, const envs::Mdp& mdp,
                        const train::PolicyConfig& policy, long n);

// Shannon entropy -sum w ln w of the atom weights (nats).
double entropy(const OccupationMeasure& mu);

// CSV exports: "state,action,weight" / "state,mass", one row per entry.
std::string measure_to_csv(const OccupationMeasure& mu);
std::string marginal_to_csv(const MarginalHistogram& marginal);

}  // namespace qlab::measure
