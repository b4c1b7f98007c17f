#include "qlab/envs/solve.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/error.hpp"
#include "qlab/common/textio.hpp"

namespace qlab::envs {

int greedy_action(const std::vector<double>& q_row) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(q_row.size()); ++a)
        if (q_row[a] > q_row[best]) best = a;
    return best;
}

OptimalSolution value_iteration(const Mdp& mdp, double tol, int max_iters) {
    mdp.validate();
    if (!(tol > 0.0)) throw InputError("value_iteration: tol must be positive");
    const int ns = mdp.n_states(), na = mdp.n_actions;
    const double alpha = mdp.discount;
    const double stop = tol * (1.0 - alpha) / alpha;

    std::vector<std::vector<double>> q(ns, std::vector<double>(na, 0.0));
    std::vector<std::vector<double>> next(ns, std::vector<double>(na, 0.0));
    std::vector<double> v(ns, 0.0);

    OptimalSolution sol;
    double change = 0.0;
    int it = 0;
    for (; it < max_iters; ++it) {
        for (int x = 0; x < ns; ++x) v[x] = *std::max_element(q[x].begin(), q[x].end());
        change = 0.0;
        for (int x = 0; x < ns; ++x) {
            for (int a = 0; a < na; ++a) {
                double ev = 0.0;
                for (const auto& [y, p] : mdp.kernel[x][a]) ev += p * v[y];
                next[x][a] = mdp.reward[x][a] + alpha * ev;
                change = std::max(change, std::abs(next[x][a] - q[x][a]));
            }
        }
        q.swap(next);
        if (change < stop) break;
    }
    if (change >= stop)
        throw NumericalError("value_iteration: no convergence after " + std::to_string(max_iters) +
                             " iterations, last sup-norm change " + format_double(change));

    sol.q_star = q;
    sol.iterations = it + 1;
    sol.v_star.resize(ns);
    sol.pi_star.resize(ns);
    // residual of the returned table (one more Bellman application)
    for (int x = 0; x < ns; ++x) {
        sol.v_star[x] = *std::max_element(q[x].begin(), q[x].end());
        sol.pi_star[x] = greedy_action(q[x]);
    }
    double residual = 0.0;
    for (int x = 0; x < ns; ++x)
        for (int a = 0; a < na; ++a) {
            double ev = 0.0;
            for (const auto& [y, p] : mdp.kernel[x][a]) ev += p * sol.v_star[y];
            residual = std::max(residual, std::abs(mdp.reward[x][a] + alpha * ev - q[x][a]));
        }
    sol.residual = residual;
    return sol;
}

namespace {

// Tarjan strongly connected components over the support digraph (p > 0).
struct Tarjan {
    const std::vector<std::vector<double>>& p;
    int n;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int counter = 0, n_comps = 0;

    explicit Tarjan(const std::vector<std::vector<double>>& m)
        : p(m), n(static_cast<int>(m.size())),
          index(n, -1), low(n, 0), comp(n, -1), on_stack(n, false) {}

    void run() {
        for (int v = 0; v < n; ++v)
            if (index[v] < 0) strongconnect(v);
    }

    // Iterative DFS to stay safe on larger chains.
    void strongconnect(int root) {
        struct Frame { int v; int next; };
        std::vector<Frame> frames{{root, 0}};
        visit(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            for (; f.next < n; ++f.next) {
                const int w = f.next;
                if (p[f.v][w] <= 0.0) continue;
                if (index[w] < 0) {
                    ++f.next;
                    visit(w);
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
            }
            if (descended) continue;
            const int v = f.v;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = n_comps;
                    if (w == v) break;
                }
                ++n_comps;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }

    void visit(int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
    }
};

// Solve the dense system A z = b by Gaussian elimination with partial
// pivoting; systems here are tiny (one recurrent class at a time).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300)
            throw NumericalError("stationary_distributions: singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> z(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * z[c];
        z[r] = s / a[r][r];
    }
    return z;
}

}  // namespace

std::vector<std::vector<double>> stationary_distributions(const FrozenKernel& fk, double tol) {
    fk.validate();
    if (!(tol > 0.0)) throw InputError("stationary_distributions: tol must be positive");
    const int n = fk.size();

    Tarjan t(fk.p);
    t.run();

    // A component is recurrent iff no edge leaves it.
    std::vector<bool> recurrent(t.n_comps, true);
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (fk.p[v][w] > 0.0 && t.comp[w] != t.comp[v]) recurrent[t.comp[v]] = false;

    std::vector<std::vector<int>> members(t.n_comps);
    for (int v = 0; v < n; ++v) members[t.comp[v]].push_back(v);

    std::vector<std::vector<int>> classes;
    for (int c = 0; c < t.n_comps; ++c)
        if (recurrent[c]) classes.push_back(members[c]);
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<std::vector<double>> result;
    for (const auto& cls : classes) {
        const int m = static_cast<int>(cls.size());
        // pi (P - I) = 0 on the class, with the last equation replaced by sum pi = 1.
        std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
        std::vector<double> b(m, 0.0);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i)
                a[j][i] = fk.p[cls[i]][cls[j]] - (i == j ? 1.0 : 0.0);
        }
        for (int i = 0; i < m; ++i) a[m - 1][i] = 1.0;
        b[m - 1] = 1.0;

        std::vector<double> pi_cls = solve_dense(std::move(a), std::move(b));
        std::vector<double> pi(n, 0.0);
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            pi[cls[i]] = std::max(pi_cls[i], 0.0);  // clamp roundoff negatives
            total += pi[cls[i]];
        }
        for (double& v : pi) v /= total;

        double residual = 0.0;
        for (int j = 0; j < n; ++j) {
            double pj = 0.0;
            for (int i = 0; i < n; ++i) pj += pi[i] * fk.p[i][j];
            residual += std::abs(pj - pi[j]);
        }
        if (residual > tol)
            throw NumericalError("stationary_distributions: residual " + format_double(residual) +
                                 " exceeds tolerance " + format_double(tol));
        result.push_back(std::move(pi));
    }
    return result;
}

}  // namespace qlab::envs
