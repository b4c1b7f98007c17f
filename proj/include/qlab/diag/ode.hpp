#pragma once

#include <vector>

#include "qlab/diag/replayer.hpp"
#include "qlab/envs/mdp.hpp"
#include "qlab/measure/measure.hpp"
#include "qlab/measure/time_axis.hpp"
#include "qlab/net/network.hpp"

namespace qlab::diag {

// Piecewise-linear function of algorithm time through a list of (time, theta)
// nodes. Evaluation at a node returns that node's vector bit for bit.
class InterpolatedTrajectory {
public:
    InterpolatedTrajectory(std::vector<double> times, std::vector<net::WeightVector> thetas);

    net::WeightVector at(double t) const;  // InputError outside [front, back]
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }

private:
    std::vector<double> times_;
    std::vector<net::WeightVector> thetas_;
};

// theta-bar over steps [n0, n1]: nodes at t_n with the replayed weights.
InterpolatedTrajectory interpolate_trajectory(RunReplayer& replayer,
                                              const measure::TimeAxis& axis, long n0, long n1);

// Euler solution of the frozen-measure dynamics
//   d theta / dt = sum_atoms mu(t)(x,a) * expected-target semi-gradient(theta, x, a)
// started at theta_start = theta-bar(t_{anchor}) and run for `horizon` time.
// The measure path is the run's own occupation process, piecewise constant on
// step intervals, so integration steps are aligned to intervals and split into
// `substeps` equal Euler substeps each.
struct OdeSolution {
    std::vector<double> times;               // absolute t, first = t_anchor
    std::vector<net::WeightVector> thetas;   // same length

    const net::WeightVector& endpoint() const { return thetas.back(); }
};

OdeSolution integrate_frozen_ode(const net::WeightVector& theta_start, RunReplayer& replayer,
                                 const measure::TimeAxis& axis, const envs::Mdp& mdp,
                                 long anchor, double horizon, int substeps,
                                 double guard = 1e6);

struct OdeTrackingReport {
    long anchor = 0;
    double horizon = 0.0;
    int substeps = 0;
    double sup_distance = 0.0;      // sup_t ||theta-bar(t_anchor + t) - theta^n(t)||
    double halving_shift = 0.0;     // ||endpoint(substeps) - endpoint(2*substeps)||
};

// Tracking error of the interpolated iterates against the frozen-measure ODE,
// per anchor. The sup runs over the union of step boundaries and Euler nodes
// in the horizon window. Each report also carries the endpoint shift under
// substep halving (an integrator-accuracy certificate).
std::vector<OdeTrackingReport> tracking_error(RunReplayer& replayer,
                                              const measure::TimeAxis& axis,
                                              const envs::Mdp& mdp,
                                              const std::vector<long>& anchors, double horizon,
                                              int substeps = 4);

}  // namespace qlab::diag
