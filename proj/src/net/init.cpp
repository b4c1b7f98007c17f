#include "qlab/net/init.hpp"

#include <cmath>

#include "qlab/common/error.hpp"

namespace qlab::net {

InitKind parse_init(const std::string& name) {
    if (name == "uniform") return InitKind::UniformFanIn;
    if (name == "biased_readout") return InitKind::BiasedReadout;
    throw InputError("unknown initializer '" + name + "' (expected uniform|biased_readout)");
}

std::string init_name(InitKind k) {
    return k == InitKind::UniformFanIn ? "uniform" : "biased_readout";
}

WeightVector init_uniform_fan_in(const Topology& topo, RandomStream& rng) {
    topo.validate();
    WeightVector theta(topo.weight_count(), 0.0);
    int pos = 0;
    auto fill = [&](int count, int fan_in) {
        const double b = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int i = 0; i < count; ++i) theta[pos++] = rng.uniform(-b, b);
    };
    int pw = topo.input_dim;
    for (int l = 0; l < topo.n_hidden_layers(); ++l) {
        fill(topo.hidden[l] * pw, pw);
        pw = topo.hidden[l];
    }
    for (int a = 0; a < topo.n_actions(); ++a) {
        fill(topo.sublayer[a] * pw, pw);          // sublayer input weights
        fill(topo.sublayer[a], topo.sublayer[a]); // readout
    }
    return theta;
}

WeightVector init_biased_readout(const Topology& topo, RandomStream& rng) {
    WeightVector theta = init_uniform_fan_in(topo, rng);
    for (int a = 0; a < topo.n_actions(); ++a) {
        const int begin = topo.readout_begin(a);
        for (int u = 0; u < topo.sublayer[a]; ++u) theta[begin + u] = a == 0 ? 0.5 : 0.0;
    }
    return theta;
}

WeightVector initialize(InitKind kind, const Topology& topo, RandomStream& rng) {
    return kind == InitKind::UniformFanIn ? init_uniform_fan_in(topo, rng)
                                          : init_biased_readout(topo, rng);
}

}  // namespace qlab::net
