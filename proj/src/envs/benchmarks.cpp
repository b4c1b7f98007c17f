#include "qlab/envs/benchmarks.hpp"

#include "qlab/common/error.hpp"

namespace qlab::envs {

Mdp chain_mdp() {
    Mdp m;
    const int ns = 5;
    for (int i = 0; i < ns; ++i) m.states.push_back({(i - 2) / 2.0});
    m.n_actions = 2;
    m.discount = 0.8;
    m.initial_dist.assign(ns, 1.0 / ns);
    m.kernel.resize(ns);
    m.reward.assign(ns, {0.0, 0.0});
    for (int i = 0; i < ns; ++i) {
        const int left = i > 0 ? i - 1 : 0;
        const int right = i < ns - 1 ? i + 1 : ns - 1;
        KernelRow go_left = (left == i) ? KernelRow{{i, 1.0}}
                                        : KernelRow{{left, 0.9}, {i, 0.1}};
        KernelRow go_right = (right == i) ? KernelRow{{i, 1.0}}
                                          : KernelRow{{right, 0.9}, {i, 0.1}};
        m.kernel[i] = {std::move(go_left), std::move(go_right)};
    }
    m.reward[ns - 1][1] = 1.0;
    m.validate();
    return m;
}

Mdp reducible_mdp(int start_component) {
    if (start_component != 0 && start_component != 1)
        throw InputError("reducible_mdp: start_component must be 0 or 1");
    Mdp m;
    m.states = {{-1.0}, {-0.6}, {-0.2}, {0.2}, {0.6}, {1.0}};
    m.n_actions = 2;
    m.discount = 0.8;
    m.initial_dist.assign(6, 0.0);
    m.initial_dist[start_component == 0 ? 0 : 3] = 1.0;
    m.kernel.resize(6);
    m.reward.assign(6, {0.5, 0.2});
    for (int comp = 0; comp < 2; ++comp) {
        const int base = 3 * comp;
        for (int k = 0; k < 3; ++k) {
            const int i = base + k;
            const int fwd = base + (k + 1) % 3;
            const int bwd = base + (k + 2) % 3;
            m.kernel[i] = {KernelRow{{fwd, 0.8}, {i, 0.2}}, KernelRow{{bwd, 0.8}, {i, 0.2}}};
        }
    }
    m.validate();
    return m;
}

Mdp trap_mdp() {
    Mdp m;
    const int ns = 4;
    for (int i = 0; i < ns; ++i) m.states.push_back({(2.0 * i - 3.0) / 3.0});
    m.n_actions = 2;
    m.discount = 0.5;
    m.initial_dist.assign(ns, 1.0 / ns);
    m.kernel.resize(ns);
    m.reward.resize(ns);
    for (int i = 0; i < ns; ++i) {
        const int left = i > 0 ? i - 1 : 0;
        const int right = i < ns - 1 ? i + 1 : ns - 1;
        KernelRow walk = (left == i)    ? KernelRow{{i, 0.5}, {right, 0.5}}
                         : (right == i) ? KernelRow{{left, 0.5}, {i, 0.5}}
                                        : KernelRow{{left, 0.5}, {right, 0.5}};
        m.kernel[i] = {walk, walk};  // dynamics ignore the action
        m.reward[i] = {0.3, i >= 2 ? 2.0 : 0.0};
    }
    m.validate();
    return m;
}

std::vector<int> optimal_region(const std::vector<int>& pi_star, int action) {
    std::vector<int> region;
    for (int x = 0; x < static_cast<int>(pi_star.size()); ++x)
        if (pi_star[x] == action) region.push_back(x);
    return region;
}

}  // namespace qlab::envs
