#pragma once

#include <vector>

#include "qlab/net/activation.hpp"

namespace qlab::net {

// Flat parameter vector theta. Layout (all blocks destination-major, no biases):
//
//   for each hidden layer L in order:        weight(dst j, src i) at
//       hidden_weights_begin(L) + j*prev_width + i
//   then for each action a in order:
//       sublayer input weights               sublayer_weights_begin(a) + u*last_width + i
//       readout theta_a                      readout_begin(a) + u       (length l(a))
//
// Q(x,a) = sum_u act_a(u) * theta_a(u); the readout is linear, everything else
// passes through the layer's activation.
using WeightVector = std::vector<double>;

struct Topology {
    int input_dim = 1;
    std::vector<int> hidden;                  // hidden widths; may be empty
    std::vector<int> sublayer;                // per-action output sublayer widths l(a)
    std::vector<ActivationKind> activations;  // one per hidden layer + one for all sublayers

    int n_actions() const { return static_cast<int>(sublayer.size()); }
    int n_hidden_layers() const { return static_cast<int>(hidden.size()); }
    int last_feature_width() const { return hidden.empty() ? input_dim : hidden.back(); }
    ActivationKind output_activation() const { return activations.back(); }

    int weight_count() const;
    int hidden_weights_begin(int layer) const;
    int sublayer_weights_begin(int action) const;
    int readout_begin(int action) const;

    void validate() const;
    void check_theta(const WeightVector& theta) const;  // length + finiteness
    bool operator==(const Topology&) const = default;
};

// Per-unit pre-activations and outputs from one forward pass; reused by
// reverse mode. Re-running the forward from `input` reproduces it bit-exactly.
struct ForwardTrace {
    std::vector<double> input;
    std::vector<std::vector<double>> hidden_pre, hidden_act;
    std::vector<std::vector<double>> sub_pre, sub_act;  // per action
    std::vector<double> q;
};

// All action values at x. Throws NumericalError naming the unit if any
// intermediate is non-finite.
std::vector<double> q_values(const Topology& topo, const WeightVector& theta,
                             const std::vector<double>& x);
std::vector<double> q_values(const Topology& topo, const WeightVector& theta,
                             const std::vector<double>& x, ForwardTrace& trace);
double q_value(const Topology& topo, const WeightVector& theta,
               const std::vector<double>& x, int action);

// Exact reverse-mode gradient of Q(x,a;theta) in theta. Entries for the other
// actions' sublayer-input and readout blocks are exactly zero.
WeightVector q_gradient(const Topology& topo, const WeightVector& theta,
                        const std::vector<double>& x, int action);
WeightVector q_gradient(const Topology& topo, const WeightVector& theta,
                        const ForwardTrace& trace, int action);

}  // namespace qlab::net
