#include "qlab/diag/ode.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::diag {

namespace {

double norm2(const net::WeightVector& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

net::WeightVector diff_norm_arg(const net::WeightVector& a, const net::WeightVector& b) {
    net::WeightVector d(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
    return d;
}

// Measure-weighted expected-target semi-gradient at theta.
net::WeightVector field_at(const net::Topology& topo, const net::WeightVector& theta,
                           const measure::OccupationMeasure& mu, const envs::Mdp& mdp) {
    net::WeightVector field(theta.size(), 0.0);
    for (const auto& atom : mu.atoms) {
        const auto dir = train::expected_update_direction(mdp, topo, theta, atom.state, atom.action);
        for (std::size_t j = 0; j < field.size(); ++j) field[j] += atom.weight * dir[j];
    }
    return field;
}

}  // namespace

InterpolatedTrajectory::InterpolatedTrajectory(std::vector<double> times,
                                               std::vector<net::WeightVector> thetas)
    : times_(std::move(times)), thetas_(std::move(thetas)) {
    if (times_.empty() || times_.size() != thetas_.size())
        throw InputError("trajectory: need matching, non-empty node lists");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1]))
            throw InputError("trajectory: node times must strictly increase");
        if (thetas_[i].size() != thetas_[0].size())
            throw InputError("trajectory: node dimensions differ");
    }
}

net::WeightVector InterpolatedTrajectory::at(double t) const {
    if (!(t >= times_.front()) || !(t <= times_.back()))
        throw InputError("trajectory: t = " + format_double(t) + " outside [" +
                         format_double(times_.front()) + ", " + format_double(times_.back()) +
                         "]");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (t == times_[i]) return thetas_[i];  // nodes reproduce bit-exactly
    if (i + 1 == times_.size()) return thetas_.back();
    const double lam = (t - times_[i]) / (times_[i + 1] - times_[i]);
    net::WeightVector out = thetas_[i];
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] += lam * (thetas_[i + 1][j] - thetas_[i][j]);
    return out;
}

InterpolatedTrajectory interpolate_trajectory(RunReplayer& replayer,
                                              const measure::TimeAxis& axis, long n0, long n1) {
    if (n0 < 0 || n1 <= n0 || n1 > replayer.steps())
        throw InputError("trajectory: bad step range [" + std::to_string(n0) + ", " +
                         std::to_string(n1) + "]");
    std::vector<double> times;
    std::vector<net::WeightVector> thetas;
    for (long n = n0; n <= n1; ++n) {
        times.push_back(axis.t(n));
        thetas.push_back(replayer.theta_at(n));
    }
    return InterpolatedTrajectory(std::move(times), std::move(thetas));
}

OdeSolution integrate_frozen_ode(const net::WeightVector& theta_start, RunReplayer& replayer,
                                 const measure::TimeAxis& axis, const envs::Mdp& mdp,
                                 long anchor, double horizon, int substeps, double guard) {
    if (anchor < 0 || anchor > axis.steps())
        throw InputError("ode: anchor " + std::to_string(anchor) + " outside the run");
    if (substeps < 1) throw InputError("ode: substeps must be >= 1");
    if (!(horizon >= 0.0)) throw InputError("ode: negative horizon");
    const double t0 = axis.t(anchor);
    const double t_end = t0 + horizon;
    if (t_end > axis.total())
        throw InputError("ode: horizon reaches t = " + format_double(t_end) +
                         " beyond the record end " + format_double(axis.total()));

    OdeSolution sol;
    sol.times.push_back(t0);
    sol.thetas.push_back(theta_start);
    if (horizon == 0.0) return sol;

    const net::Topology& topo = replayer.topology();
    net::WeightVector theta = theta_start;
    const double guard_sq = guard * guard;

    // The measure path is constant on each step interval: stepping stays
    // aligned to intervals (exact in the measure argument) and splits each
    // into equal Euler substeps.
    for (long m = anchor; axis.t(m) < t_end; ++m) {
        const double seg_a = axis.t(m);
        const double seg_b = std::min(axis.t(m + 1), t_end);
        const auto mu = measure::measure_at(replayer.record(), axis, mdp, seg_a);
        for (int k = 1; k <= substeps; ++k) {
            const double h = (seg_b - seg_a) / substeps;
            const auto field = field_at(topo, theta, mu, mdp);
            for (std::size_t j = 0; j < theta.size(); ++j) theta[j] += h * field[j];
            double ss = 0.0;
            for (double w : theta) ss += w * w;
            if (!(ss <= guard_sq))
                throw NumericalError("ode: iterate norm crossed the guard at t = " +
                                     format_double(seg_a + k * h));
            sol.times.push_back(seg_a + (seg_b - seg_a) * k / substeps);
            sol.thetas.push_back(theta);
        }
    }
    return sol;
}

std::vector<OdeTrackingReport> tracking_error(RunReplayer& replayer,
                                              const measure::TimeAxis& axis,
                                              const envs::Mdp& mdp,
                                              const std::vector<long>& anchors, double horizon,
                                              int substeps) {
    std::vector<OdeTrackingReport> reports;
    for (long anchor : anchors) {
        const double t0 = axis.t(anchor);
        const double t_end = t0 + horizon;
        if (t_end > axis.total())
            throw InputError("tracking: anchor " + std::to_string(anchor) +
                             " has no room for horizon " + format_double(horizon));

        const net::WeightVector theta_start = replayer.theta_at(anchor);
        const auto sol = integrate_frozen_ode(theta_start, replayer, axis, mdp, anchor,
                                              horizon, substeps);
        const auto fine = integrate_frozen_ode(theta_start, replayer, axis, mdp, anchor,
                                               horizon, 2 * substeps);

        OdeTrackingReport rep;
        rep.anchor = anchor;
        rep.horizon = horizon;
        rep.substeps = substeps;
        rep.halving_shift = norm2(diff_norm_arg(sol.endpoint(), fine.endpoint()));

        if (horizon == 0.0) {
            reports.push_back(rep);
            continue;
        }
        // theta-bar nodes covering the window: first boundary at or past t_end.
        long n1 = t_end >= axis.total() ? axis.steps() : axis.interval_of(t_end) + 1;
        n1 = std::min(n1, replayer.steps());
        const auto bar = interpolate_trajectory(replayer, axis, anchor, n1);

        double sup = 0.0;
        for (std::size_t k = 0; k < sol.times.size(); ++k)
            sup = std::max(sup, norm2(diff_norm_arg(bar.at(sol.times[k]), sol.thetas[k])));
        rep.sup_distance = sup;
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace qlab::diag
