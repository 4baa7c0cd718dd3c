#include "iddmp/mdp_solve.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "scc.hpp"

namespace iddmp {

namespace {

// Classes up to this size use GTH elimination (dense, relative accuracy for tiny
// probabilities); larger ones a sparse LU solve.
constexpr std::size_t kDenseClassLimit = 2000;

// Rounding floor on the span: one backup sums terms as large as the largest
// relative value, so differences below a few ulps of it are noise.
constexpr double kRoundingFloor = 32.0 * std::numeric_limits<double>::epsilon();

// One Bellman backup of every post-decision state:
// Q(u) = c(u)/L + sum_t q(u,t)/L h(t) + (1 - out(u)/L) h(u).
void post_values(const CtmdpModel& model, double penalty, const std::vector<double>& h,
                 std::vector<double>& q) {
    const double lambda = model.uniformization_rate();
    const std::size_t n = model.num_states();
    for (std::size_t u = 0; u < n; ++u) {
        const int id = static_cast<int>(u);
        const auto& c = model.cost(id);
        double acc = (c.operational + penalty * c.failure) / lambda;
        for (const auto& t : model.transitions(id)) acc += t.rate / lambda * h[t.target];
        acc += (1.0 - model.total_outflow(id) / lambda) * h[u];
        q[u] = acc;
    }
}

template <typename Backup>
SolveResult relative_value_iteration(const CtmdpModel& model, double penalty,
                                     const SolveOptions& options, Backup&& backup) {
    if (!(penalty >= 0.0) || !std::isfinite(penalty)) throw Error("penalty must be finite and >= 0");
    if (!(options.tolerance > 0.0)) throw Error("tolerance must be > 0");
    const std::size_t n = model.num_states();
    const double lambda = model.uniformization_rate();
    std::vector<double> h(n, 0.0), q(n), next(n);
    SolveResult result;
    result.penalty = penalty;
    double lo = 0.0, hi = 0.0;
    for (long it = 1; it <= options.max_iterations; ++it) {
        post_values(model, penalty, h, q);
        backup(q, next);
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (std::size_t s = 0; s < n; ++s) {
            const double d = next[s] - h[s];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        const double ref = next[0];
        double largest = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            h[s] = next[s] - ref;
            largest = std::max(largest, std::abs(next[s]));
        }
        result.iterations = it;
        result.span = hi - lo;
        const double threshold =
            std::max(options.tolerance * std::max({1.0, std::abs(lo), std::abs(hi)}),
                     kRoundingFloor * largest);
        if (result.span < threshold) {
            result.converged = true;
            break;
        }
    }
    result.gain = lambda * 0.5 * (lo + hi);
    return result;
}

}  // namespace

double log_failure(double g_f) {
    if (g_f < 1e-300) return -std::numeric_limits<double>::infinity();
    return std::log(g_f);
}

double GainPair::log_g_f() const { return log_failure(g_f); }

SolveResult solve_average_cost(const CtmdpModel& model, double penalty,
                               const SolveOptions& options) {
    const std::size_t n = model.num_states();
    std::vector<double> last_q;
    auto backup = [&](const std::vector<double>& q, std::vector<double>& next) {
        for (std::size_t s = 0; s < n; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (int u : model.actions(static_cast<int>(s))) best = std::min(best, q[u]);
            next[s] = best;
        }
        last_q = q;
    };
    SolveResult result = relative_value_iteration(model, penalty, options, backup);

    // greedy policy with respect to the last backup
    result.policy.post.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto acts = model.actions(static_cast<int>(s));
        double best = std::numeric_limits<double>::infinity();
        for (int u : acts) best = std::min(best, last_q[u]);
        const double eps = 1e-12 * (std::abs(best) + 1.0);
        for (int u : acts) {
            if (last_q[u] <= best + eps) {
                result.policy.post[s] = u;
                break;
            }
        }
    }
    return result;
}

SolveResult policy_gain_by_iteration(const CtmdpModel& model, const MaintenancePolicy& policy,
                                     double penalty, const SolveOptions& options) {
    check_policy(model, policy);
    const std::size_t n = model.num_states();
    auto backup = [&](const std::vector<double>& q, std::vector<double>& next) {
        for (std::size_t s = 0; s < n; ++s) next[s] = q[policy.post[s]];
    };
    SolveResult result = relative_value_iteration(model, penalty, options, backup);
    result.policy = policy;
    return result;
}

namespace {

struct LocalChain {
    std::vector<int> posts;                                  // local -> model id
    std::vector<std::vector<std::pair<int, double>>> edges;  // local targets, merged rates
};

LocalChain induced_chain(const CtmdpModel& model, const MaintenancePolicy& policy, int start) {
    LocalChain chain;
    std::map<int, int> local;
    auto intern = [&](int id) {
        auto [it, inserted] = local.emplace(id, static_cast<int>(chain.posts.size()));
        if (inserted) {
            chain.posts.push_back(id);
            chain.edges.emplace_back();
        }
        return it->second;
    };
    intern(start);
    for (std::size_t k = 0; k < chain.posts.size(); ++k) {
        const int u = chain.posts[k];
        std::map<int, double> merged;
        for (const auto& t : model.transitions(u)) {
            const int next = policy.post[t.target];
            if (next == u) continue;
            merged[next] += t.rate;
        }
        std::vector<std::pair<int, double>> out;
        for (const auto& [target, rate] : merged) out.emplace_back(intern(target), rate);
        chain.edges[k] = std::move(out);
    }
    return chain;
}

// Stationary distribution of an irreducible CTMC given by local off-diagonal
// rates restricted to `members`.
std::vector<double> stationary(const LocalChain& chain, const std::vector<int>& members) {
    const std::size_t n = members.size();
    if (n == 1) return {1.0};
    std::map<int, int> pos;
    for (std::size_t i = 0; i < n; ++i) pos[members[i]] = static_cast<int>(i);

    if (n <= kDenseClassLimit) {
        std::vector<double> a(n * n, 0.0);
        auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& [t, r] : chain.edges[members[i]]) at(i, pos.at(t)) += r;
        for (std::size_t k = n - 1; k >= 1; --k) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += at(k, j);
            if (!(s > 0.0)) throw Error("balance equations are singular (class not irreducible)");
            for (std::size_t i = 0; i < k; ++i) at(i, k) /= s;
            for (std::size_t i = 0; i < k; ++i) {
                const double f = at(i, k);
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < k; ++j) at(i, j) += f * at(k, j);
            }
        }
        std::vector<double> pi(n, 0.0);
        pi[0] = 1.0;
        double total = 1.0;
        for (std::size_t j = 1; j < n; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < j; ++i) v += pi[i] * at(i, j);
            pi[j] = v;
            total += v;
        }
        for (double& v : pi) v /= total;
        return pi;
    }

    // pi^T Q = 0 with the first balance equation replaced by normalization
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t i = 0; i < n; ++i) {
        double out = 0.0;
        for (const auto& [t, r] : chain.edges[members[i]]) {
            const int j = pos.at(t);
            out += r;
            if (j != 0) trip.emplace_back(j, static_cast<int>(i), r);
        }
        if (i != 0) trip.emplace_back(static_cast<int>(i), static_cast<int>(i), -out);
    }
    for (std::size_t i = 0; i < n; ++i) trip.emplace_back(0, static_cast<int>(i), 1.0);
    Eigen::SparseMatrix<double> m(static_cast<int>(n), static_cast<int>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw Error("balance equations are singular");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<int>(n));
    rhs[0] = 1.0;
    Eigen::VectorXd x = lu.solve(rhs);
    std::vector<double> pi(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = std::max(0.0, x[static_cast<int>(i)]);
        total += pi[i];
    }
    for (double& v : pi) v /= total;
    return pi;
}

}  // namespace

GainPair evaluate_policy(const CtmdpModel& model, const MaintenancePolicy& policy,
                         int initial_state) {
    check_policy(model, policy);
    if (initial_state < 0 || static_cast<std::size_t>(initial_state) >= model.num_states())
        throw Error("initial state is not part of the model");
    const LocalChain chain = induced_chain(model, policy, policy.post[initial_state]);
    const int n = static_cast<int>(chain.posts.size());

    int count = 0;
    const auto comp = detail::strongly_connected_components(
        n,
        [&](int v) {
            std::vector<int> out;
            for (const auto& e : chain.edges[v]) out.push_back(e.first);
            return out;
        },
        count);
    std::vector<bool> closed(count, true);
    std::vector<std::vector<int>> members(count);
    for (int v = 0; v < n; ++v) {
        members[comp[v]].push_back(v);
        for (const auto& e : chain.edges[v])
            if (comp[e.first] != comp[v]) closed[comp[v]] = false;
    }

    auto class_gain = [&](int c) {
        const auto pi = stationary(chain, members[c]);
        GainPair g;
        for (std::size_t i = 0; i < pi.size(); ++i) {
            const auto& cost = model.cost(chain.posts[members[c][i]]);
            g.g_o += pi[i] * cost.operational;
            g.g_f += pi[i] * cost.failure;
        }
        return g;
    };

    if (closed[comp[0]]) return class_gain(comp[0]);

    // absorption probabilities from the start into each closed class
    std::vector<int> transient_index(n, -1);
    std::vector<int> transient;
    for (int v = 0; v < n; ++v)
        if (!closed[comp[v]]) {
            transient_index[v] = static_cast<int>(transient.size());
            transient.push_back(v);
        }
    std::vector<int> closed_ids;
    for (int c = 0; c < count; ++c)
        if (closed[c]) closed_ids.push_back(c);
    const int nt = static_cast<int>(transient.size());
    const int nc = static_cast<int>(closed_ids.size());
    std::vector<int> column(count, -1);
    for (int k = 0; k < nc; ++k) column[closed_ids[k]] = k;

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nt, nc);
    for (int k = 0; k < nt; ++k) {
        const int v = transient[k];
        double out = 0.0;
        for (const auto& [t, r] : chain.edges[v]) {
            out += r;
            if (transient_index[t] >= 0) trip.emplace_back(k, transient_index[t], -r);
            else rhs(k, column[comp[t]]) += r;
        }
        trip.emplace_back(k, k, out);
    }
    Eigen::SparseMatrix<double> m(nt, nt);
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw Error("absorption system is singular");
    const Eigen::MatrixXd absorb = lu.solve(rhs);

    GainPair total;
    for (int k = 0; k < nc; ++k) {
        const double w = absorb(transient_index[0], k);
        if (w <= 0.0) continue;
        const GainPair g = class_gain(closed_ids[k]);
        total.g_o += w * g.g_o;
        total.g_f += w * g.g_f;
    }
    total.g_f = std::clamp(total.g_f, 0.0, 1.0);
    return total;
}

MaintenancePolicy fully_active_policy(const CtmdpModel& model) {
    MaintenancePolicy policy;
    policy.post.resize(model.num_states());
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        const int id = static_cast<int>(s);
        SystemState post = model.state(id);
        for (std::size_t i = 0; i < post.size(); ++i) {
            post[i].repairing += post[i].damaged;
            post[i].damaged = 0;
        }
        const int u = model.find(post);
        const auto acts = model.actions(id);
        if (u < 0 || std::find(acts.begin(), acts.end(), u) == acts.end())
            throw Error("fully-active action is infeasible in state " + model.state(id).to_string());
        policy.post[s] = u;
    }
    return policy;
}

void check_policy(const CtmdpModel& model, const MaintenancePolicy& policy) {
    if (policy.size() != model.num_states()) throw Error("policy size does not match the model");
    for (std::size_t s = 0; s < policy.size(); ++s) {
        const auto acts = model.actions(static_cast<int>(s));
        if (std::find(acts.begin(), acts.end(), policy.post[s]) == acts.end())
            throw Error("policy action infeasible in state " +
                        model.state(static_cast<int>(s)).to_string());
    }
}

namespace {

std::string action_text(const Action& a) {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(a[i]);
    }
    return out;
}

int post_for(const CtmdpModel& model, int state, const std::string& text) {
    const Design counts = Design::parse(text);
    if (counts.size() != model.num_types()) throw Error("action has the wrong length: " + text);
    const SystemState post = apply_action(model.state(state), counts.counts());
    const int u = model.find(post);
    const auto acts = model.actions(state);
    if (u < 0 || std::find(acts.begin(), acts.end(), u) == acts.end())
        throw Error("infeasible action " + text + " in state " + model.state(state).to_string());
    return u;
}

}  // namespace

void write_policy(std::ostream& out, const CtmdpModel& model, const MaintenancePolicy& policy) {
    check_policy(model, policy);
    for (std::size_t s = 0; s < policy.size(); ++s) {
        const int id = static_cast<int>(s);
        out << model.state(id).to_string() << ' '
            << action_text(model.action_vector(id, policy.post[s])) << '\n';
    }
}

MaintenancePolicy read_policy(std::istream& in, const CtmdpModel& model) {
    MaintenancePolicy policy;
    policy.post.assign(model.num_states(), -1);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string state_text, action;
        if (!(ss >> state_text >> action)) throw Error("malformed policy line: " + line);
        SystemState state;
        std::istringstream st(state_text);
        char open, comma, close;
        int r, d;
        while (st >> open >> r >> comma >> d >> close) {
            if (open != '(' || comma != ',' || close != ')') throw Error("malformed state: " + state_text);
            state.rows.push_back({r, d});
        }
        const int id = model.find(state);
        if (id < 0) throw Error("unknown state in policy: " + state_text);
        policy.post[id] = post_for(model, id, action);
    }
    for (int u : policy.post)
        if (u < 0) throw Error("policy does not cover every state");
    return policy;
}

std::string encode_policy(const CtmdpModel& model, const MaintenancePolicy& policy) {
    check_policy(model, policy);
    std::string out;
    for (std::size_t s = 0; s < policy.size(); ++s) {
        if (s) out += ';';
        out += action_text(model.action_vector(static_cast<int>(s), policy.post[s]));
    }
    return out;
}

MaintenancePolicy decode_policy(const std::string& text, const CtmdpModel& model) {
    MaintenancePolicy policy;
    std::size_t start = 0;
    int s = 0;
    while (true) {
        const auto end = text.find(';', start);
        const std::string piece = text.substr(start, end == std::string::npos ? end : end - start);
        if (static_cast<std::size_t>(s) >= model.num_states())
            throw Error("policy encoding has too many entries");
        policy.post.push_back(post_for(model, s, piece));
        ++s;
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (policy.size() != model.num_states()) throw Error("policy encoding has too few entries");
    return policy;
}

}  // namespace iddmp
