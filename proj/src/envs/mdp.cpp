#include "qlab/envs/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::envs {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string at(const std::string& field, int i) {
    return field + "[" + std::to_string(i) + "]";
}
std::string at(const std::string& field, int i, int j) {
    return field + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void check_distribution(const std::vector<double>& w, const std::string& field) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] < 0.0)
            throw InputError(field + "[" + std::to_string(i) + "]: probability must be finite and >= 0");
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw InputError(field + ": probabilities sum to " + format_double(sum) + ", expected 1 within 1e-12");
}

}  // namespace

const KernelRow& Mdp::row(int state, int action) const {
    if (state < 0 || state >= n_states())
        throw InputError("state index " + std::to_string(state) + " out of range [0," +
                         std::to_string(n_states()) + ")");
    if (action < 0 || action >= n_actions)
        throw InputError("action index " + std::to_string(action) + " out of range [0," +
                         std::to_string(n_actions) + ")");
    return kernel[state][action];
}

double Mdp::reward_at(int state, int action) const {
    row(state, action);  // bounds check
    return reward[state][action];
}

void Mdp::validate() const {
    const int ns = n_states();
    if (ns == 0) throw InputError("states: must be non-empty");
    const std::size_t k = states[0].size();
    if (k == 0) throw InputError("states[0]: embedding must have dimension >= 1");
    for (int i = 0; i < ns; ++i) {
        if (states[i].size() != k)
            throw InputError(at("states", i) + ": embedding dimension " +
                             std::to_string(states[i].size()) + " != " + std::to_string(k));
        for (std::size_t d = 0; d < k; ++d)
            if (!std::isfinite(states[i][d]))
                throw InputError(at("states", i) + ": non-finite coordinate");
    }
    if (n_actions <= 0) throw InputError("actions: must be >= 1");
    if (!(discount > 0.0 && discount < 1.0))
        throw InputError("discount: must lie in (0,1), got " + format_double(discount));

    if (static_cast<int>(kernel.size()) != ns)
        throw InputError("kernel: expected " + std::to_string(ns) + " rows, got " +
                         std::to_string(kernel.size()));
    if (static_cast<int>(reward.size()) != ns)
        throw InputError("reward: expected " + std::to_string(ns) + " rows, got " +
                         std::to_string(reward.size()));

    for (int x = 0; x < ns; ++x) {
        if (static_cast<int>(kernel[x].size()) != n_actions)
            throw InputError(at("kernel", x) + ": expected " + std::to_string(n_actions) +
                             " action rows, got " + std::to_string(kernel[x].size()));
        if (static_cast<int>(reward[x].size()) != n_actions)
            throw InputError(at("reward", x) + ": expected " + std::to_string(n_actions) +
                             " entries, got " + std::to_string(reward[x].size()));
        for (int a = 0; a < n_actions; ++a) {
            const KernelRow& r = kernel[x][a];
            if (r.empty())
                throw InputError(at("kernel", x, a) + ": support must be non-empty");
            double sum = 0.0;
            for (std::size_t e = 0; e < r.size(); ++e) {
                const auto& [y, p] = r[e];
                const std::string ctx = at("kernel", x, a) + "[" + std::to_string(e) + "]";
                if (y < 0 || y >= ns)
                    throw InputError(ctx + ": next-state index " + std::to_string(y) +
                                     " out of range [0," + std::to_string(ns) + ")");
                if (!std::isfinite(p) || p < 0.0)
                    throw InputError(ctx + ": probability must be finite and >= 0");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTol)
                throw InputError(at("kernel", x, a) + ": row sums to " + format_double(sum) +
                                 ", expected 1 within 1e-12");
            if (!std::isfinite(reward[x][a]))
                throw InputError(at("reward", x, a) + ": must be finite");
        }
    }
    if (static_cast<int>(initial_dist.size()) != ns)
        throw InputError("initial_dist: expected " + std::to_string(ns) + " entries, got " +
                         std::to_string(initial_dist.size()));
    check_distribution(initial_dist, "initial_dist");
}

void FrozenKernel::validate() const {
    const int n = size();
    if (n == 0) throw InputError("frozen kernel: must be non-empty");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(p[i].size()) != n)
            throw InputError("frozen kernel: row " + std::to_string(i) + " has length " +
                             std::to_string(p[i].size()) + ", expected " + std::to_string(n));
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(p[i][j]) || p[i][j] < 0.0)
                throw InputError("frozen kernel: entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") must be finite and >= 0");
            sum += p[i][j];
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw InputError("frozen kernel: row " + std::to_string(i) + " sums to " +
                             format_double(sum) + ", expected 1 within 1e-12");
    }
}

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& origin) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(origin + ": missing key '" + key + "'");
    return *it;
}

}  // namespace

Mdp mdp_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(origin + ": top level must be an object");
    for (const auto& [key, _] : j.items()) {
        static const char* known[] = {"states", "actions", "kernel", "reward", "discount", "initial_dist"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw InputError(origin + ": unknown key '" + key + "'");
    }

    Mdp m;
    try {
        require(j, "states", origin).get_to(m.states);
        require(j, "actions", origin).get_to(m.n_actions);
        require(j, "discount", origin).get_to(m.discount);
        require(j, "initial_dist", origin).get_to(m.initial_dist);
        const json& jk = require(j, "kernel", origin);
        m.kernel.reserve(jk.size());
        for (const auto& jx : jk) {
            std::vector<KernelRow> per_action;
            for (const auto& ja : jx) {
                KernelRow r;
                for (const auto& je : ja) {
                    if (!je.is_array() || je.size() != 2)
                        throw InputError(origin + ": kernel entries must be [next_index, prob] pairs");
                    r.emplace_back(je[0].get<int>(), je[1].get<double>());
                }
                per_action.push_back(std::move(r));
            }
            m.kernel.push_back(std::move(per_action));
        }
        require(j, "reward", origin).get_to(m.reward);
    } catch (const json::exception& e) {
        throw InputError(origin + ": " + e.what());
    }
    try {
        m.validate();
    } catch (const InputError& e) {
        throw InputError(origin + ": " + e.what());
    }
    return m;
}

Mdp load_mdp(const std::string& path) {
    return mdp_from_json_text(read_text_file(path), path);
}

std::string mdp_to_json_text(const Mdp& mdp) {
    json j;
    j["states"] = mdp.states;
    j["actions"] = mdp.n_actions;
    j["discount"] = mdp.discount;
    j["initial_dist"] = mdp.initial_dist;
    json jk = json::array();
    for (const auto& per_state : mdp.kernel) {
        json jx = json::array();
        for (const auto& row : per_state) {
            json ja = json::array();
            for (const auto& [y, p] : row) ja.push_back(json::array({y, p}));
            jx.push_back(std::move(ja));
        }
        jk.push_back(std::move(jx));
    }
    j["kernel"] = std::move(jk);
    j["reward"] = mdp.reward;
    return j.dump(2) + "\n";
}

void save_mdp(const Mdp& mdp, const std::string& path) {
    write_text_file(path, mdp_to_json_text(mdp));
}

namespace {

int inverse_cdf_draw(const KernelRow& row, double u) {
    double cum = 0.0;
    for (const auto& [y, p] : row) {
        cum += p;
        if (u < cum) return y;
    }
    return row.back().first;  // u landed in the 1e-12 slack past the last atom
}

}  // namespace

std::pair<int, double> sample_transition(const Mdp& mdp, int state, int action,
                                         RandomStream& rng) {
    const KernelRow& r = mdp.row(state, action);
    const double u = rng.uniform01();
    return {inverse_cdf_draw(r, u), mdp.reward[state][action]};
}

int sample_initial_state(const Mdp& mdp, RandomStream& rng) {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (int i = 0; i < mdp.n_states(); ++i) {
        cum += mdp.initial_dist[i];
        if (u < cum) return i;
    }
    for (int i = mdp.n_states() - 1; i >= 0; --i)
        if (mdp.initial_dist[i] > 0.0) return i;
    return mdp.n_states() - 1;
}

double expected_max_q(const Mdp& mdp, int state, int action,
                      const std::function<std::vector<double>(int)>& q_of_state) {
    const KernelRow& r = mdp.row(state, action);
    // Kahan summation: downstream martingale identities difference this value
    // against per-successor maxima, so keep it exact to the last ulp.
    double sum = 0.0, comp = 0.0;
    for (const auto& [y, p] : r) {
        const std::vector<double> q = q_of_state(y);
        if (q.size() != static_cast<std::size_t>(mdp.n_actions))
            throw InputError("expected_max_q: q_of_state returned " + std::to_string(q.size()) +
                             " values, expected " + std::to_string(mdp.n_actions));
        const double term = p * *std::max_element(q.begin(), q.end());
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace qlab::envs
