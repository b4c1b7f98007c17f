#pragma once

#include <cmath>

namespace qlab::train {

// Step-size schedule gamma(n) = c * (n + n0)^(-p) with p in (0.5, 1]:
// monotone, non-summable, square-summable.
struct StepSchedule {
    double c = 0.5;
    double n0 = 10.0;
    double p = 0.6;

    void validate() const;  // c > 0, n0 >= 1, p in (0.5, 1]
    double gamma(long n) const { return c * std::pow(static_cast<double>(n) + n0, -p); }
};

}  // namespace qlab::train
