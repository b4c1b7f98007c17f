#include "qlab/net/network.hpp"

#include <cmath>
#include <string>

#include "qlab/common/error.hpp"

namespace qlab::net {

namespace {

int prev_width(const Topology& t, int layer) {
    return layer == 0 ? t.input_dim : t.hidden[layer - 1];
}

void check_finite(double v, const std::string& where) {
    if (!std::isfinite(v)) throw NumericalError("non-finite value at " + where);
}

}  // namespace

int Topology::weight_count() const {
    int d = 0;
    for (int l = 0; l < n_hidden_layers(); ++l) d += prev_width(*this, l) * hidden[l];
    for (int a = 0; a < n_actions(); ++a) d += sublayer[a] * (last_feature_width() + 1);
    return d;
}

int Topology::hidden_weights_begin(int layer) const {
    int off = 0;
    for (int l = 0; l < layer; ++l) off += prev_width(*this, l) * hidden[l];
    return off;
}

int Topology::sublayer_weights_begin(int action) const {
    int off = hidden_weights_begin(n_hidden_layers());
    for (int a = 0; a < action; ++a) off += sublayer[a] * (last_feature_width() + 1);
    return off;
}

int Topology::readout_begin(int action) const {
    return sublayer_weights_begin(action) + sublayer[action] * last_feature_width();
}

void Topology::validate() const {
    if (input_dim < 1) throw InputError("topology: input_dim must be >= 1");
    for (std::size_t l = 0; l < hidden.size(); ++l)
        if (hidden[l] < 1)
            throw InputError("topology: hidden[" + std::to_string(l) + "] must be >= 1");
    if (sublayer.empty()) throw InputError("topology: need at least one action sublayer");
    for (std::size_t a = 0; a < sublayer.size(); ++a)
        if (sublayer[a] < 1)
            throw InputError("topology: sublayer[" + std::to_string(a) + "] must be >= 1");
    if (activations.size() != hidden.size() + 1)
        throw InputError("topology: expected " + std::to_string(hidden.size() + 1) +
                         " activation kinds (one per hidden layer plus the output sublayers), got " +
                         std::to_string(activations.size()));
}

void Topology::check_theta(const WeightVector& theta) const {
    const int d = weight_count();
    if (static_cast<int>(theta.size()) != d)
        throw InputError("theta: expected " + std::to_string(d) + " weights, got " +
                         std::to_string(theta.size()));
    for (int i = 0; i < d; ++i)
        if (!std::isfinite(theta[i]))
            throw InputError("theta[" + std::to_string(i) + "]: non-finite weight");
}

std::vector<double> q_values(const Topology& topo, const WeightVector& theta,
                             const std::vector<double>& x, ForwardTrace& tr) {
    topo.validate();
    topo.check_theta(theta);
    if (static_cast<int>(x.size()) != topo.input_dim)
        throw InputError("q_values: state has dimension " + std::to_string(x.size()) +
                         ", topology expects " + std::to_string(topo.input_dim));

    const int nl = topo.n_hidden_layers();
    const int na = topo.n_actions();
    tr.input = x;
    tr.hidden_pre.assign(nl, {});
    tr.hidden_act.assign(nl, {});
    tr.sub_pre.assign(na, {});
    tr.sub_act.assign(na, {});
    tr.q.assign(na, 0.0);

    const std::vector<double>* prev = &tr.input;
    for (int l = 0; l < nl; ++l) {
        const int w = topo.hidden[l], pw = prev_width(topo, l);
        const double* weights = theta.data() + topo.hidden_weights_begin(l);
        tr.hidden_pre[l].resize(w);
        tr.hidden_act[l].resize(w);
        for (int j = 0; j < w; ++j) {
            double s = 0.0;
            const double* row = weights + j * pw;
            for (int i = 0; i < pw; ++i) s += row[i] * (*prev)[i];
            check_finite(s, "hidden layer " + std::to_string(l) + " unit " + std::to_string(j));
            tr.hidden_pre[l][j] = s;
            tr.hidden_act[l][j] = activation_value(topo.activations[l], s);
        }
        prev = &tr.hidden_act[l];
    }

    const int lw = topo.last_feature_width();
    const ActivationKind out_act = topo.output_activation();
    for (int a = 0; a < na; ++a) {
        const int la = topo.sublayer[a];
        const double* weights = theta.data() + topo.sublayer_weights_begin(a);
        const double* readout = theta.data() + topo.readout_begin(a);
        tr.sub_pre[a].resize(la);
        tr.sub_act[a].resize(la);
        double q = 0.0;
        for (int u = 0; u < la; ++u) {
            double s = 0.0;
            const double* row = weights + u * lw;
            for (int i = 0; i < lw; ++i) s += row[i] * (*prev)[i];
            check_finite(s, "action " + std::to_string(a) + " sublayer unit " + std::to_string(u));
            tr.sub_pre[a][u] = s;
            tr.sub_act[a][u] = activation_value(out_act, s);
            q += tr.sub_act[a][u] * readout[u];
        }
        check_finite(q, "action " + std::to_string(a) + " output");
        tr.q[a] = q;
    }
    return tr.q;
}

std::vector<double> q_values(const Topology& topo, const WeightVector& theta,
                             const std::vector<double>& x) {
    ForwardTrace tr;
    return q_values(topo, theta, x, tr);
}

double q_value(const Topology& topo, const WeightVector& theta,
               const std::vector<double>& x, int action) {
    const auto q = q_values(topo, theta, x);
    if (action < 0 || action >= static_cast<int>(q.size()))
        throw InputError("q_value: action " + std::to_string(action) + " out of range");
    return q[action];
}

WeightVector q_gradient(const Topology& topo, const WeightVector& theta,
                        const ForwardTrace& tr, int action) {
    const int na = topo.n_actions();
    if (action < 0 || action >= na)
        throw InputError("q_gradient: action " + std::to_string(action) + " out of range");

    WeightVector g(topo.weight_count(), 0.0);
    const int nl = topo.n_hidden_layers();
    const int lw = topo.last_feature_width();
    const int la = topo.sublayer[action];
    const std::vector<double>& last = nl == 0 ? tr.input : tr.hidden_act[nl - 1];
    const ActivationKind out_act = topo.output_activation();

    // readout block and sublayer delta for the selected action only
    const double* sub_w = theta.data() + topo.sublayer_weights_begin(action);
    const double* readout = theta.data() + topo.readout_begin(action);
    double* g_sub = g.data() + topo.sublayer_weights_begin(action);
    double* g_read = g.data() + topo.readout_begin(action);

    std::vector<double> dlast(lw, 0.0);
    for (int u = 0; u < la; ++u) {
        g_read[u] = tr.sub_act[action][u];
        const double delta = readout[u] * activation_derivative(out_act, tr.sub_pre[action][u]);
        double* row = g_sub + u * lw;
        const double* w_row = sub_w + u * lw;
        for (int i = 0; i < lw; ++i) {
            row[i] = delta * last[i];
            dlast[i] += delta * w_row[i];
        }
    }

    // shared hidden stack
    std::vector<double> dact = std::move(dlast);
    for (int l = nl - 1; l >= 0; --l) {
        const int w = topo.hidden[l], pw = prev_width(topo, l);
        const std::vector<double>& below = l == 0 ? tr.input : tr.hidden_act[l - 1];
        const double* weights = theta.data() + topo.hidden_weights_begin(l);
        double* g_w = g.data() + topo.hidden_weights_begin(l);
        std::vector<double> dprev(pw, 0.0);
        for (int j = 0; j < w; ++j) {
            const double dpre = dact[j] * activation_derivative(topo.activations[l], tr.hidden_pre[l][j]);
            double* row = g_w + j * pw;
            const double* w_row = weights + j * pw;
            for (int i = 0; i < pw; ++i) {
                row[i] = dpre * below[i];
                dprev[i] += dpre * w_row[i];
            }
        }
        dact = std::move(dprev);
    }
    return g;
}

WeightVector q_gradient(const Topology& topo, const WeightVector& theta,
                        const std::vector<double>& x, int action) {
    ForwardTrace tr;
    q_values(topo, theta, x, tr);
    return q_gradient(topo, theta, tr, action);
}

}  // namespace qlab::net
