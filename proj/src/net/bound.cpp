#include "qlab/net/bound.hpp"

#include <cmath>

#include "qlab/common/error.hpp"

namespace qlab::net {

BoundReport q_bound_check(const Topology& topo, const WeightVector& theta,
                          const std::vector<std::vector<double>>& sample_states) {
    topo.validate();
    topo.check_theta(theta);
    BoundReport rep;
    rep.squashing = is_squashing(topo.output_activation());

    const int na = topo.n_actions();
    std::vector<double> readout_norm(na, 0.0);
    for (int a = 0; a < na; ++a) {
        double s = 0.0;
        const double* r = theta.data() + topo.readout_begin(a);
        for (int u = 0; u < topo.sublayer[a]; ++u) s += r[u] * r[u];
        readout_norm[a] = std::sqrt(s);
    }
    double theta_norm = 0.0;
    for (double w : theta) theta_norm += w * w;
    theta_norm = std::sqrt(theta_norm);

    const double c = rep.squashing ? squashing_bound(topo.output_activation()) : 0.0;
    for (std::size_t s = 0; s < sample_states.size(); ++s) {
        const auto q = q_values(topo, theta, sample_states[s]);
        for (int a = 0; a < na; ++a) {
            ++rep.probes;
            const double absq = std::abs(q[a]);
            if (rep.squashing) {
                const double enforced = c * topo.sublayer[a] * readout_norm[a];
                const double tight = c * std::sqrt(static_cast<double>(topo.sublayer[a])) * readout_norm[a];
                if (absq > enforced)
                    rep.violations.push_back({static_cast<int>(s), a, q[a], enforced});
                if (enforced > 0.0)
                    rep.max_ratio_enforced = std::max(rep.max_ratio_enforced, absq / enforced);
                if (tight > 0.0)
                    rep.max_ratio_tight = std::max(rep.max_ratio_tight, absq / tight);
            } else if (theta_norm > 0.0) {
                rep.empirical_constant = std::max(rep.empirical_constant, absq / theta_norm);
            }
        }
    }
    return rep;
}

}  // namespace qlab::net
