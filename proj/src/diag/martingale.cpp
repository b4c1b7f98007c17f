#include "qlab/diag/martingale.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/error.hpp"

namespace qlab::diag {

namespace {

// Components are kept while the trace stays below ~32 MB.
constexpr long kKeepComponentEntries = 4000000;

double norm2(const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss);
}

TraceSummary summarize(const std::vector<double>& norms,
               const std::vector<double>& tail_flucts) {
    TraceSummary s;
    s.full_range = *std::max_element(norms.begin(), norms.end());
    s.tail_fluctuation =
        tail_flucts.empty() ? 0.0 : *std::max_element(tail_flucts.begin(), tail_flucts.end());
    s.ratio = s.full_range > 0.0 ? s.tail_fluctuation / s.full_range : 0.0;
    return s;
}

}  // namespace

net::WeightVector psi_term(const envs::Mdp& mdp, const net::Topology& topo,
                           const net::WeightVector& theta, const train::Transition& t) {
    const auto q_next = net::q_values(topo, theta, mdp.states.at(t.next_state));
    const double sampled = *std::max_element(q_next.begin(), q_next.end());
    const double expected = envs::expected_max_q(
        mdp, t.state, t.action,
        [&](int y) { return net::q_values(topo, theta, mdp.states.at(y)); });
    const double scale = mdp.discount * (sampled - expected);
    auto psi = net::q_gradient(topo, theta, mdp.states.at(t.state), t.action);
    for (double& g : psi) g *= scale;
    return psi;
}

MartingaleTrace martingale_trace(RunReplayer& replayer, const envs::Mdp& mdp) {
    const long N = replayer.steps();
    const net::Topology& topo = replayer.topology();
    const int d = topo.weight_count();

    MartingaleTrace trace;
    trace.kind = MartingaleTrace::Kind::Noise;
    trace.dim = d;
    const bool keep = (N + 1) * static_cast<long>(d) <= kKeepComponentEntries;

    std::vector<double> m(d, 0.0);       // running M_n
    std::vector<double> m_ref;           // M_{N/2}
    std::vector<double> tail_flucts;
    const long half = N / 2;

    trace.times.push_back(0.0);
    trace.norms.push_back(0.0);
    if (keep) trace.partial_sums.push_back(m);
    if (half == 0) m_ref = m;

    double t = 0.0;
    for (long n = 0; n < N; ++n) {
        const train::RecordRow& row = replayer.record().rows[static_cast<std::size_t>(n)];
        const auto psi = psi_term(mdp, topo, replayer.theta_at(n), replayer.record().transition_at(n));
        std::vector<double> inc(psi);
        for (double& x : inc) x *= row.gamma;
        for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(j)] += inc[static_cast<std::size_t>(j)];
        t += row.gamma;

        trace.times.push_back(t);
        trace.norms.push_back(norm2(m));
        if (keep) {
            trace.increments.push_back(std::move(inc));
            trace.partial_sums.push_back(m);
        }
        if (n + 1 == half) m_ref = m;
        if (n + 1 >= half && !m_ref.empty()) {
            std::vector<double> diff(m);
            for (int j = 0; j < d; ++j) diff[static_cast<std::size_t>(j)] -= m_ref[static_cast<std::size_t>(j)];
            tail_flucts.push_back(norm2(diff));
        }
    }
    trace.summary = summarize(trace.norms, tail_flucts);
    return trace;
}

MartingaleTrace test_function_trace(const train::TrainRecord& record, const envs::Mdp& mdp,
                                    const TestFunction& f) {
    record.validate();
    if (!f.f) throw InputError("test_function_trace: empty test function");
    const long N = static_cast<long>(record.rows.size());

    MartingaleTrace trace;
    trace.kind = MartingaleTrace::Kind::TestFunction;
    trace.test_function_id = f.id;
    trace.dim = 1;

    double xi = 0.0, t = 0.0;
    const long half = N / 2;
    double xi_ref = 0.0;
    std::vector<double> tail_flucts;

    trace.times.push_back(0.0);
    trace.norms.push_back(0.0);
    trace.partial_sums.push_back({0.0});
    if (half == 0) xi_ref = xi;

    for (long n = 0; n < N; ++n) {
        const train::RecordRow& row = record.rows[static_cast<std::size_t>(n)];
        // Conditional mean of f under the logged pair's kernel row, compensated.
        double mean = 0.0, comp = 0.0;
        for (const auto& [y, p] : mdp.row(row.state, row.action)) {
            const double term = p * f.f(y) - comp;
            const double next = mean + term;
            comp = (next - mean) - term;
            mean = next;
        }
        const double inc = row.gamma * (f.f(row.next_state) - mean);
        xi += inc;
        t += row.gamma;

        trace.times.push_back(t);
        trace.norms.push_back(std::abs(xi));
        trace.increments.push_back({inc});
        trace.partial_sums.push_back({xi});
        if (n + 1 == half) xi_ref = xi;
        if (n + 1 >= half) tail_flucts.push_back(std::abs(xi - xi_ref));
    }
    trace.summary = summarize(trace.norms, tail_flucts);
    return trace;
}

std::vector<TestFunction> default_test_functions(const envs::Mdp& mdp) {
    std::vector<TestFunction> bank;
    for (int x = 0; x < mdp.n_states(); ++x)
        bank.push_back({"indicator_" + std::to_string(x),
                        [x](int y) { return y == x ? 1.0 : 0.0; }});
    const int coords = std::min(2, mdp.state_dim());
    for (int k = 0; k < coords; ++k) {
        std::vector<double> column;
        for (const auto& s : mdp.states) column.push_back(s.at(static_cast<std::size_t>(k)));
        bank.push_back({"coord_" + std::to_string(k),
                        [column](int y) { return column.at(static_cast<std::size_t>(y)); }});
    }
    return bank;
}

}  // namespace qlab::diag
