#include "qlab/measure/time_axis.hpp"

#include <algorithm>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::measure {

TimeAxis TimeAxis::from_gammas(const std::vector<double>& gammas) {
    TimeAxis axis;
    axis.times_.reserve(gammas.size() + 1);
    axis.times_.push_back(0.0);
    double t = 0.0;
    for (std::size_t n = 0; n < gammas.size(); ++n) {
        if (!(gammas[n] > 0.0))
            throw InputError("time axis: gamma(" + std::to_string(n) +
                             ") = " + format_double(gammas[n]) + " is not positive");
        t += gammas[n];
        axis.times_.push_back(t);
    }
    return axis;
}

TimeAxis TimeAxis::from_schedule(const train::StepSchedule& schedule, long steps) {
    schedule.validate();
    if (steps < 0) throw InputError("time axis: negative step count");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (long n = 0; n < steps; ++n) g[static_cast<std::size_t>(n)] = schedule.gamma(n);
    return from_gammas(g);
}

TimeAxis TimeAxis::from_record(const train::TrainRecord& record) {
    std::vector<double> g;
    g.reserve(record.rows.size());
    for (const auto& row : record.rows) g.push_back(row.gamma);
    return from_gammas(g);
}

double TimeAxis::t(long n) const {
    if (n < 0 || n >= static_cast<long>(times_.size()))
        throw InputError("time axis: index " + std::to_string(n) + " outside 0.." +
                         std::to_string(times_.size() - 1));
    return times_[static_cast<std::size_t>(n)];
}

long TimeAxis::interval_of(double t) const {
    if (!(t >= 0.0) || t >= total())
        throw InputError("time axis: t = " + format_double(t) + " outside [0, " +
                         format_double(total()) + ")");
    // First boundary strictly above t; its predecessor starts the interval.
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<long>(it - times_.begin()) - 1;
}

}  // namespace qlab::measure
