#include "qlab/measure/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::measure {

namespace {

constexpr double kMassTol = 1e-12;

bool atom_before(const OccupationMeasure::Atom& a, const OccupationMeasure::Atom& b) {
    return a.state != b.state ? a.state < b.state : a.action < b.action;
}

// One step's occupation measure as raw atoms with total mass 1: the logged
// mini-batch when present, otherwise the Dirac on the observed pair.
std::vector<OccupationMeasure::Atom> step_atoms(const train::TrainRecord& record, long n) {
    const train::RecordRow& row = record.rows[static_cast<std::size_t>(n)];
    std::vector<OccupationMeasure::Atom> atoms;
    if (row.batch.empty()) {
        atoms.push_back({row.state, row.action, 1.0});
        return atoms;
    }
    const double w = 1.0 / static_cast<double>(row.batch.size());
    for (long b : row.batch) {
        const train::Transition t = record.transition_at(b);
        atoms.push_back({t.state, t.action, w});
    }
    return atoms;
}

void check_alignment(const train::TrainRecord& record, const TimeAxis& axis) {
    if (axis.steps() != static_cast<long>(record.rows.size()))
        throw InputError("measure: time axis covers " + std::to_string(axis.steps()) +
                         " steps, record has " + std::to_string(record.rows.size()));
}

}  // namespace

double OccupationMeasure::weight_of(int state, int action) const {
    const Atom probe{state, action, 0.0};
    const auto it = std::lower_bound(atoms.begin(), atoms.end(), probe, atom_before);
    if (it == atoms.end() || it->state != state || it->action != action) return 0.0;
    return it->weight;
}

void OccupationMeasure::validate() const {
    if (n_states < 1 || n_actions < 1)
        throw InputError("measure: empty state-action space");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Atom& a = atoms[i];
        if (a.state < 0 || a.state >= n_states || a.action < 0 || a.action >= n_actions)
            throw InputError("measure: atom (" + std::to_string(a.state) + ", " +
                             std::to_string(a.action) + ") outside the state-action set");
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
            throw InputError("measure: negative or non-finite weight at atom " +
                             std::to_string(i));
        if (i > 0 && !atom_before(atoms[i - 1], a))
            throw InputError("measure: atoms not in canonical order");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw InputError("measure: total mass " + format_double(total) +
                         " is off 1 by more than 1e-12");
}

OccupationMeasure make_measure(int n_states, int n_actions,
                               std::vector<OccupationMeasure::Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(), atom_before);
    OccupationMeasure mu;
    mu.n_states = n_states;
    mu.n_actions = n_actions;
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
            throw InputError("measure: negative or non-finite atom weight");
        if (!mu.atoms.empty() && mu.atoms.back().state == a.state &&
            mu.atoms.back().action == a.action) {
            mu.atoms.back().weight += a.weight;
        } else {
            mu.atoms.push_back(a);
        }
        total += a.weight;
    }
    if (!(total > 0.0)) throw InputError("measure: total mass must be positive");
    std::erase_if(mu.atoms, [](const OccupationMeasure::Atom& a) { return a.weight == 0.0; });
    for (auto& a : mu.atoms) a.weight /= total;
    mu.validate();
    return mu;
}

MarginalHistogram state_marginal(const OccupationMeasure& mu) {
    MarginalHistogram m(static_cast<std::size_t>(mu.n_states), 0.0);
    for (const auto& a : mu.atoms) m[static_cast<std::size_t>(a.state)] += a.weight;
    return m;
}

OccupationMeasure measure_at(const train::TrainRecord& record, const TimeAxis& axis,
                             const envs::Mdp& mdp, double t) {
    check_alignment(record, axis);
    const long n = axis.interval_of(t);
    return make_measure(mdp.n_states(), mdp.n_actions, step_atoms(record, n));
}

OccupationMeasure tail_estimate(const train::TrainRecord& record, const TimeAxis& axis,
                                const envs::Mdp& mdp, double window) {
    check_alignment(record, axis);
    if (record.rows.empty()) throw InputError("tail_estimate: empty record");
    if (!(window > 0.0 && window <= 1.0))
        throw InputError("tail_estimate: window fraction must lie in (0, 1], got " +
                         format_double(window));
    const double T = axis.total();
    const double start_t = (1.0 - window) * T;
    if (!(start_t < T)) throw InputError("tail_estimate: window is empty");

    std::vector<OccupationMeasure::Atom> atoms;
    const long N = axis.steps();
    for (long n = axis.interval_of(start_t); n < N; ++n) {
        const double overlap = axis.t(n + 1) - std::max(axis.t(n), start_t);
        if (!(overlap > 0.0)) continue;
        for (auto a : step_atoms(record, n)) {
            a.weight *= overlap;
            atoms.push_back(a);
        }
    }
    return make_measure(mdp.n_states(), mdp.n_actions, std::move(atoms));
}

MarginalHistogram pushforward(const MarginalHistogram& marginal, const envs::FrozenKernel& fk) {
    if (static_cast<int>(marginal.size()) != fk.size())
        throw InputError("pushforward: marginal has " + std::to_string(marginal.size()) +
                         " states, kernel " + std::to_string(fk.size()));
    MarginalHistogram out(marginal.size(), 0.0);
    for (std::size_t x = 0; x < marginal.size(); ++x) {
        if (marginal[x] == 0.0) continue;
        for (std::size_t y = 0; y < out.size(); ++y) out[y] += marginal[x] * fk.p[x][y];
    }
    return out;
}

double total_variation(const MarginalHistogram& a, const MarginalHistogram& b) {
    if (a.size() != b.size())
        throw InputError("total_variation: length mismatch " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return 0.5 * sum;
}

double measure_distance(const OccupationMeasure& a, const OccupationMeasure& b) {
    if (a.n_states != b.n_states || a.n_actions != b.n_actions)
        throw InputError("measure_distance: measures live on different state-action sets");
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.atoms.size() || j < b.atoms.size()) {
        if (j == b.atoms.size() ||
            (i < a.atoms.size() && atom_before(a.atoms[i], b.atoms[j]))) {
            sum += a.atoms[i++].weight;
        } else if (i == a.atoms.size() || atom_before(b.atoms[j], a.atoms[i])) {
            sum += b.atoms[j++].weight;
        } else {
            sum += std::abs(a.atoms[i++].weight - b.atoms[j++].weight);
        }
    }
    return 0.5 * sum;
}

double stationarity_gap(const OccupationMeasure& mu, const net::Topology& topo,
                        const net::WeightVector& theta, const envs::Mdp& mdp,
                        const train::PolicyConfig& policy, long n) {
    mu.validate();
    if (mu.n_states != mdp.n_states() || mu.n_actions != mdp.n_actions)
        throw InputError("stationarity_gap: measure does not live on the MDP");
    const envs::FrozenKernel fk = train::frozen_kernel(mdp, topo, theta, policy, n);
    const MarginalHistogram m = state_marginal(mu);
    return total_variation(m, pushforward(m, fk));
}

double entropy(const OccupationMeasure& mu) {
    double h = 0.0;
    for (const auto& a : mu.atoms)
        if (a.weight > 0.0) h -= a.weight * std::log(a.weight);
    return h;
}

std::string measure_to_csv(const OccupationMeasure& mu) {
    std::ostringstream out;
    out << "state,action,weight\n";
    for (const auto& a : mu.atoms)
        out << a.state << ',' << a.action << ',' << format_double(a.weight) << '\n';
    return out.str();
}

std::string marginal_to_csv(const MarginalHistogram& marginal) {
    std::ostringstream out;
    out << "state,mass\n";
    for (std::size_t x = 0; x < marginal.size(); ++x)
        out << x << ',' << format_double(marginal[x]) << '\n';
    return out.str();
}

}  // namespace qlab::measure
