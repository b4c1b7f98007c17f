#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qlab/diag/replayer.hpp"
#include "qlab/envs/mdp.hpp"
#include "qlab/net/network.hpp"
#include "qlab/train/trainer.hpp"

namespace qlab::diag {

// Noise term of one step: the sampled bootstrap target minus its exact
// kernel expectation, scaled onto the gradient,
//   psi = alpha * (max_a Q(x', a) - E[max_a Q(y, a) | x, a]) * dQ/dtheta(x, a).
// Its conditional mean over the enumerated kernel row is the zero vector.
net::WeightVector psi_term(const envs::Mdp& mdp, const net::Topology& topo,
                           const net::WeightVector& theta, const train::Transition& t);

// How far a partial-sum process strays: `full_range` is max_n ||M_n|| over
// the run, `tail_fluctuation` is max_{n >= N/2} ||M_n - M_{N/2}||, and
// `ratio` their quotient (0 when the range is 0). A converging trace keeps
// the ratio small; the default threshold is 0.1.
struct TraceSummary {
    double full_range = 0.0;
    double tail_fluctuation = 0.0;
    double ratio = 0.0;
};

// Partial-sum trace of a (vector- or scalar-valued) zero-mean process.
// norms[n] = ||M_n||_2 is always kept; the raw increments and partial sums
// are kept while (steps+1)*dim stays small enough to hold comfortably
// (they satisfy partial_sums[n+1] = partial_sums[n] + increments[n] exactly,
// by sequential construction).
struct MartingaleTrace {
    enum class Kind { Noise, TestFunction };

    Kind kind = Kind::Noise;
    std::string test_function_id;  // empty for the noise trace
    int dim = 0;
    std::vector<double> times;  // t_0 .. t_N
    std::vector<double> norms;  // ||M_n||, n = 0 .. N
    std::vector<std::vector<double>> increments;    // gamma(m) psi_m, when kept
    std::vector<std::vector<double>> partial_sums;  // M_n, when kept
    TraceSummary summary;

    bool components_kept() const { return !partial_sums.empty(); }
};

// M_n = sum_{m<n} gamma(m) psi_m along the run, with theta_m rebuilt by the
// replayer.
MartingaleTrace martingale_trace(RunReplayer& replayer, const envs::Mdp& mdp);

// A bounded test function on the state set, by state index.
struct TestFunction {
    std::string id;
    std::function<double(int)> f;
};

// xi_n = sum_{m<n} gamma(m) [f(x_{m+1}) - E(f(y) | x_m, a_m)]. The conditional
// expectation only needs the kernel row of the logged pair, so no weight
// reconstruction is involved.
MartingaleTrace test_function_trace(const train::TrainRecord& record, const envs::Mdp& mdp,
                                    const TestFunction& f);

// Indicator of every state plus the first two embedding coordinates.
std::vector<TestFunction> default_test_functions(const envs::Mdp& mdp);

}  // namespace qlab::diag
