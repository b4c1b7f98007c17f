#pragma once

#include <vector>

#include "qlab/train/schedule.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::measure {

// Algorithm time: t_0 = 0, t_{n+1} = t_n + gamma(n). A record of N steps
// spans [0, t_N); step n owns the half-open interval [t_n, t_{n+1}).
class TimeAxis {
public:
    static TimeAxis from_gammas(const std::vector<double>& gammas);
    static TimeAxis from_schedule(const train::StepSchedule& schedule, long steps);
    static TimeAxis from_record(const train::TrainRecord& record);

    long steps() const { return static_cast<long>(times_.size()) - 1; }
    double t(long n) const;                      // n in [0, steps]
    double total() const { return times_.back(); }
    double gamma(long n) const { return t(n + 1) - t(n); }

    // The step whose interval contains t; InputError outside [0, total()).
    long interval_of(double t) const;

private:
    std::vector<double> times_;  // steps + 1 entries, strictly increasing
};

}  // namespace qlab::measure
