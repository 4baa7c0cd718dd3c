#include "iddmp/ctmdp.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "scc.hpp"

namespace iddmp {

namespace {

constexpr double kUniformizationFactor = 1.05;
constexpr double kFeasibilitySlack = 1e-9;

int healthy(const TypeState& row, int bound) { return bound - row.repairing - row.damaged; }

void check_shape(const SystemState& state, const std::vector<int>& bounds) {
    if (state.size() != bounds.size()) throw Error("state has the wrong number of rows");
    for (std::size_t i = 0; i < state.size(); ++i) {
        const auto& r = state[i];
        if (r.repairing < 0 || r.damaged < 0 || r.repairing + r.damaged > bounds[i])
            throw Error("invalid state " + state.to_string());
    }
}

bool knapsack_ok(const std::vector<double>& used, const Instance& instance) {
    for (std::size_t j = 0; j < used.size(); ++j)
        if (used[j] > instance.constraints()[j].bound + kFeasibilitySlack) return false;
    return true;
}

std::uint64_t pair_index(const TypeState& row, int bound) {
    const std::uint64_t s1 = static_cast<std::uint64_t>(row.repairing);
    const std::uint64_t m = static_cast<std::uint64_t>(bound);
    return s1 * (m + 1) - (s1 * (s1 - (s1 > 0 ? 1 : 0))) / 2 + static_cast<std::uint64_t>(row.damaged);
}

std::vector<TypeState> type_pairs(int bound) {
    std::vector<TypeState> pairs;
    for (int s1 = 0; s1 <= bound; ++s1)
        for (int s2 = 0; s1 + s2 <= bound; ++s2) pairs.push_back({s1, s2});
    return pairs;
}

void append_actions(const SystemState& state, const std::vector<int>& bounds, ActionMode mode,
                    const Instance& instance, std::size_t type, Action& current,
                    std::vector<double>& used, std::vector<Action>& out) {
    const std::size_t n = state.size();
    if (type == n) {
        if (mode == ActionMode::FixedDesign || knapsack_ok(used, instance)) out.push_back(current);
        return;
    }
    for (int a = 0; a <= state[type].damaged; ++a) {
        current[type] = a;
        if (mode == ActionMode::KnapsackPruned) {
            // minimal design copies of this type: M - (damaged - a)
            const int copies = bounds[type] - (state[type].damaged - a);
            for (std::size_t j = 0; j < used.size(); ++j)
                used[j] += instance.coefficient(j, type) * copies;
            // later types only add usage, so a violation here prunes the subtree
            if (knapsack_ok(used, instance))
                append_actions(state, bounds, mode, instance, type + 1, current, used, out);
            for (std::size_t j = 0; j < used.size(); ++j)
                used[j] -= instance.coefficient(j, type) * copies;
        } else {
            append_actions(state, bounds, mode, instance, type + 1, current, used, out);
        }
    }
    current[type] = 0;
}

}  // namespace

std::string SystemState::to_string() const {
    std::string out;
    for (const auto& r : rows)
        out += "(" + std::to_string(r.repairing) + "," + std::to_string(r.damaged) + ")";
    return out;
}

std::uint64_t pair_count(int bound) {
    const std::uint64_t m = static_cast<std::uint64_t>(bound);
    return (m + 1) * (m + 2) / 2;
}

std::uint64_t state_count(const std::vector<int>& bounds, std::size_t ceiling) {
    std::uint64_t total = 1;
    for (int m : bounds) {
        if (m < 0) throw Error("copy bounds must be >= 0");
        const std::uint64_t k = pair_count(m);
        if (total > ceiling / k + 1) total = std::numeric_limits<std::uint64_t>::max();
        else total *= k;
        if (total > ceiling) {
            std::ostringstream msg;
            msg << "state space too large: more than " << ceiling << " states for bounds (";
            for (std::size_t i = 0; i < bounds.size(); ++i) msg << (i ? "," : "") << bounds[i];
            msg << ")";
            throw Error(msg.str());
        }
    }
    return total;
}

std::vector<SystemState> enumerate_states(const std::vector<int>& bounds, std::size_t ceiling) {
    const std::uint64_t total = state_count(bounds, ceiling);
    std::vector<std::vector<TypeState>> pairs;
    for (int m : bounds) pairs.push_back(type_pairs(m));
    std::vector<SystemState> states;
    states.reserve(total);
    std::vector<std::size_t> digit(bounds.size(), 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        SystemState s;
        s.rows.reserve(bounds.size());
        for (std::size_t i = 0; i < bounds.size(); ++i) s.rows.push_back(pairs[i][digit[i]]);
        states.push_back(std::move(s));
        for (std::size_t i = bounds.size(); i-- > 0;) {
            if (++digit[i] < pairs[i].size()) break;
            digit[i] = 0;
        }
    }
    return states;
}

Design minimal_design(const SystemState& state, const std::vector<int>& bounds) {
    std::vector<int> x(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) x[i] = bounds[i] - state[i].damaged;
    return Design(std::move(x));
}

std::vector<SystemState> build_pruned_state_space(const Instance& instance, std::size_t ceiling) {
    const std::size_t n = instance.num_types();
    if (n == 0) throw Error("instance has no component types");
    const auto& bounds = instance.copy_bounds();
    struct Partial {
        std::vector<TypeState> rows;
        std::vector<double> used;
    };
    std::vector<Partial> partials{{{}, std::vector<double>(instance.num_constraints(), 0.0)}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Partial> next;
        const auto pairs = type_pairs(bounds[i]);
        for (const auto& part : partials) {
            for (const auto& pr : pairs) {
                const int copies = bounds[i] - pr.damaged;
                std::vector<double> used = part.used;
                for (std::size_t j = 0; j < used.size(); ++j)
                    used[j] += instance.coefficient(j, i) * copies;
                if (!knapsack_ok(used, instance)) continue;
                Partial grown{part.rows, std::move(used)};
                grown.rows.push_back(pr);
                next.push_back(std::move(grown));
                if (next.size() > ceiling)
                    throw Error("pruned state space exceeds the ceiling of " +
                                std::to_string(ceiling) + " states");
            }
        }
        partials = std::move(next);
    }
    std::vector<SystemState> states;
    states.reserve(partials.size());
    for (auto& part : partials) states.push_back(SystemState{std::move(part.rows)});
    return states;
}

std::vector<Action> feasible_actions(const SystemState& state, const std::vector<int>& bounds,
                                     ActionMode mode, const Instance& instance) {
    check_shape(state, bounds);
    std::vector<Action> out;
    Action current(state.size(), 0);
    std::vector<double> used(instance.num_constraints(), 0.0);
    append_actions(state, bounds, mode, instance, 0, current, used, out);
    return out;
}

SystemState apply_action(const SystemState& state, const Action& action) {
    if (action.size() != state.size()) throw Error("action has the wrong length");
    SystemState post = state;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (action[i] < 0 || action[i] > state[i].damaged)
            throw Error("infeasible action for state " + state.to_string());
        post[i].repairing += action[i];
        post[i].damaged -= action[i];
    }
    return post;
}

std::vector<std::pair<SystemState, double>> transition_rates(const SystemState& post,
                                                             const std::vector<int>& bounds,
                                                             const Instance& instance,
                                                             const ModelOptions& options) {
    check_shape(post, bounds);
    std::vector<std::pair<SystemState, double>> out;
    for (std::size_t i = 0; i < post.size(); ++i) {
        const auto& c = instance.component(i);
        const int h = healthy(post[i], bounds[i]);
        if (h > 0) {
            SystemState t = post;
            t[i].damaged += 1;
            out.emplace_back(std::move(t), h * c.alpha);
        }
        if (post[i].repairing > 0) {
            SystemState t = post;
            t[i].repairing -= 1;
            out.emplace_back(std::move(t), post[i].repairing * c.tau);
            if (options.repair_interruption) {
                SystemState u = post;
                u[i].repairing -= 1;
                u[i].damaged += 1;
                out.emplace_back(std::move(u), post[i].repairing * c.alpha);
            }
        }
    }
    return out;
}

CostPair cost_rates(const SystemState& post, const std::vector<int>& bounds,
                    const Instance& instance) {
    check_shape(post, bounds);
    CostPair cost;
    bool any_healthy = false;
    double usage = 0.0;
    double repair = 0.0;
    // canonical order is ascending usage cost, so the first healthy type is the cheapest
    for (std::size_t i = 0; i < post.size(); ++i) {
        const auto& c = instance.component(i);
        if (!any_healthy && healthy(post[i], bounds[i]) > 0) {
            any_healthy = true;
            usage = c.usage_cost;
        }
        repair += c.repair_cost * post[i].repairing;
    }
    cost.operational = usage + repair;
    cost.failure = any_healthy ? 0.0 : 1.0;
    return cost;
}

CtmdpModel CtmdpModel::for_design(const Instance& instance, const Design& design,
                                  const ModelOptions& options) {
    if (design.size() != instance.num_types()) throw Error("design has the wrong length");
    CtmdpModel model;
    model.bounds_ = design.counts();
    model.mode_ = ActionMode::FixedDesign;
    model.design_ = design;
    model.options_ = options;
    model.build(instance, enumerate_states(model.bounds_, options.state_ceiling));
    return model;
}

CtmdpModel CtmdpModel::knapsack_pruned(const Instance& instance, const ModelOptions& options) {
    CtmdpModel model;
    model.bounds_ = instance.copy_bounds();
    model.mode_ = ActionMode::KnapsackPruned;
    model.options_ = options;
    model.build(instance, build_pruned_state_space(instance, options.state_ceiling));
    return model;
}

std::uint64_t CtmdpModel::encode(const SystemState& state) const {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < bounds_.size(); ++i) code += pair_index(state[i], bounds_[i]) * strides_[i];
    return code;
}

int CtmdpModel::find(const SystemState& state) const {
    if (state.size() != bounds_.size()) return -1;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const auto& r = state[i];
        if (r.repairing < 0 || r.damaged < 0 || r.repairing + r.damaged > bounds_[i]) return -1;
    }
    const std::uint64_t code = encode(state);
    if (codes_.empty()) return code < states_.size() ? static_cast<int>(code) : -1;
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return -1;
    return static_cast<int>(it - codes_.begin());
}

void CtmdpModel::build(const Instance& instance, std::vector<SystemState> states) {
    const std::size_t n = bounds_.size();
    strides_.assign(n, 1);
    for (std::size_t i = n; i-- > 1;) strides_[i - 1] = strides_[i] * pair_count(bounds_[i]);
    states_ = std::move(states);
    if (mode_ == ActionMode::KnapsackPruned) {
        codes_.reserve(states_.size());
        for (const auto& s : states_) codes_.push_back(encode(s));
    }
    if (states_.size() > static_cast<std::size_t>(std::numeric_limits<int>::max()))
        throw Error("state space too large for dense ids");

    action_offsets_.assign(1, 0);
    transition_offsets_.assign(1, 0);
    double max_outflow = 0.0;
    for (std::size_t id = 0; id < states_.size(); ++id) {
        const auto& s = states_[id];
        for (const auto& a : feasible_actions(s, bounds_, mode_, instance)) {
            const int post = find(apply_action(s, a));
            if (post < 0) throw Error("post-decision state missing from model (construction bug)");
            action_targets_.push_back(post);
        }
        action_offsets_.push_back(action_targets_.size());

        double out = 0.0;
        for (const auto& [target, rate] : transition_rates(s, bounds_, instance, options_)) {
            const int t = find(target);
            if (t < 0) throw Error("transition leaves the model (construction bug)");
            transitions_.push_back({t, rate});
            out += rate;
        }
        transition_offsets_.push_back(transitions_.size());
        outflow_.push_back(out);
        max_outflow = std::max(max_outflow, out);
        costs_.push_back(cost_rates(s, bounds_, instance));
    }
    uniformization_rate_ = max_outflow > 0.0 ? kUniformizationFactor * max_outflow : 1.0;
    all_healthy_ = find(SystemState{std::vector<TypeState>(n)});
}

Action CtmdpModel::action_vector(int state_id, int post_id) const {
    const auto& s = state(state_id);
    const auto& u = state(post_id);
    Action a(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) a[i] = u[i].repairing - s[i].repairing;
    return a;
}

void CtmdpModel::dump(std::ostream& out) const {
    out << "# post_id state c_o c_f outflow targets(id:rate)\n";
    for (std::size_t id = 0; id < states_.size(); ++id) {
        const int i = static_cast<int>(id);
        out << id << ' ' << states_[id].to_string() << ' ' << costs_[id].operational << ' '
            << costs_[id].failure << ' ' << outflow_[id];
        for (const auto& t : transitions(i)) out << ' ' << t.target << ':' << t.rate;
        out << '\n';
    }
}

CommunicationReport check_weakly_communicating(const CtmdpModel& model) {
    CommunicationReport report;
    const int n = static_cast<int>(model.num_states());
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indegree(n, 0);
    for (int s = 0; s < n; ++s) {
        for (int post : model.actions(s))
            for (const auto& t : model.transitions(post))
                if (t.target != s) succ[s].push_back(t.target);
        std::sort(succ[s].begin(), succ[s].end());
        succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
        for (int t : succ[s]) ++indegree[t];
    }
    std::vector<bool> keep(n, true);
    for (int s = 0; s < n; ++s)
        if (indegree[s] == 0 && n > 1) {
            report.never_entered.push_back(s);
            keep[s] = false;
        }

    SystemState all_repairing;
    for (int m : model.bounds()) all_repairing.rows.push_back({m, 0});
    const int ar = model.find(all_repairing);
    const bool empty_design = std::all_of(model.bounds().begin(), model.bounds().end(),
                                          [](int m) { return m == 0; });
    report.all_repairing_transient =
        empty_design || ar < 0 ||
        std::find(report.never_entered.begin(), report.never_entered.end(), ar) !=
            report.never_entered.end();

    int count = 0;
    auto comp = detail::strongly_connected_components(
        n,
        [&](int v) {
            std::vector<int> out;
            if (!keep[v]) return out;
            for (int t : succ[v])
                if (keep[t]) out.push_back(t);
            return out;
        },
        count);
    int kept_component = -1;
    bool single = true;
    for (int s = 0; s < n; ++s) {
        if (!keep[s]) continue;
        ++report.communicating_states;
        if (kept_component == -1) kept_component = comp[s];
        else if (comp[s] != kept_component) single = false;
    }
    report.weakly_communicating = single && report.all_repairing_transient;
    if (!single) report.message = "states outside the never-entered set do not communicate";
    else if (!report.all_repairing_transient)
        report.message = "all-repairing state can be entered (model construction bug)";
    else report.message = "weakly communicating";
    return report;
}

}  // namespace iddmp
