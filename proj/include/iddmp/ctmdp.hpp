#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iddmp/model.hpp"

namespace iddmp {

inline constexpr std::size_t kDefaultStateCeiling = 5'000'000;

/// Condition counts for one component type. Healthy copies are implied by the
/// type's copy bound: healthy = M_i - repairing - damaged.
struct TypeState {
    int repairing = 0;
    int damaged = 0;
    auto operator<=>(const TypeState&) const = default;
};

/// One row per component type.
struct SystemState {
    std::vector<TypeState> rows;

    std::size_t size() const { return rows.size(); }
    const TypeState& operator[](std::size_t i) const { return rows[i]; }
    TypeState& operator[](std::size_t i) { return rows[i]; }
    auto operator<=>(const SystemState&) const = default;
    std::string to_string() const;  ///< "(0,1)(2,0)"
};

/// Number of copies of each type to put into repair.
using Action = std::vector<int>;

struct Transition {
    int target = 0;
    double rate = 0.0;
};

struct CostPair {
    double operational = 0.0;  ///< usage cost of the cheapest healthy copy + repair cost rates
    double failure = 0.0;      ///< 1 when no copy is healthy
};

struct ModelOptions {
    /// Lets a copy under repair fail back to damaged at rate alpha. Off by default;
    /// with it off, copies under repair only complete.
    bool repair_interruption = false;
    std::size_t state_ceiling = kDefaultStateCeiling;
};

enum class ActionMode { FixedDesign, KnapsackPruned };

/// Number of (repairing, damaged) pairs with repairing + damaged <= bound.
std::uint64_t pair_count(int bound);
/// Product of pair counts; throws when it exceeds `ceiling`.
std::uint64_t state_count(const std::vector<int>& bounds, std::size_t ceiling = kDefaultStateCeiling);

/// All states for the given copy bounds in lexicographic order over the rows.
std::vector<SystemState> enumerate_states(const std::vector<int>& bounds,
                                          std::size_t ceiling = kDefaultStateCeiling);

/// Smallest design under which `state` can occur: M_i - damaged_i copies of type i.
Design minimal_design(const SystemState& state, const std::vector<int>& bounds);

/// States of the maximal design whose minimal design satisfies the knapsack rows,
/// built type by type without materializing the full product.
std::vector<SystemState> build_pruned_state_space(const Instance& instance,
                                                  std::size_t ceiling = kDefaultStateCeiling);

/// Actions in lexicographic order. In pruned mode an action must also keep the
/// minimal design of the post-decision state knapsack-feasible.
std::vector<Action> feasible_actions(const SystemState& state, const std::vector<int>& bounds,
                                     ActionMode mode, const Instance& instance);

/// Post-decision state: a_i copies move from damaged to repairing.
SystemState apply_action(const SystemState& state, const Action& action);

/// Outgoing events from a post-decision state. No self-transitions.
std::vector<std::pair<SystemState, double>> transition_rates(const SystemState& post,
                                                             const std::vector<int>& bounds,
                                                             const Instance& instance,
                                                             const ModelOptions& options = {});

CostPair cost_rates(const SystemState& post, const std::vector<int>& bounds,
                    const Instance& instance);

/// The maintenance CTMDP. States double as post-decision states: the transitions
/// and costs of a state are those it has when entered with the zero action.
class CtmdpModel {
public:
    /// Model of a fixed design: copy bounds equal the design counts.
    static CtmdpModel for_design(const Instance& instance, const Design& design,
                                 const ModelOptions& options = {});
    /// Model over the knapsack-pruned maximal design.
    static CtmdpModel knapsack_pruned(const Instance& instance, const ModelOptions& options = {});

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_types() const { return bounds_.size(); }
    const SystemState& state(int id) const { return states_[static_cast<std::size_t>(id)]; }
    /// Dense id of `state`, or -1 if it is not part of the model.
    int find(const SystemState& state) const;
    /// Id of the state with every copy healthy, -1 if the model excludes it.
    int all_healthy_state() const { return all_healthy_; }

    /// Post-decision state ids reachable by the feasible actions of `id`, in
    /// lexicographic action order. The zero action comes first.
    std::span<const int> actions(int id) const {
        return {action_targets_.data() + action_offsets_[id],
                action_offsets_[id + 1] - action_offsets_[id]};
    }
    Action action_vector(int state_id, int post_id) const;
    std::size_t num_state_actions() const { return action_targets_.size(); }

    std::span<const Transition> transitions(int post_id) const {
        return {transitions_.data() + transition_offsets_[post_id],
                transition_offsets_[post_id + 1] - transition_offsets_[post_id]};
    }
    double total_outflow(int post_id) const { return outflow_[post_id]; }
    const CostPair& cost(int post_id) const { return costs_[post_id]; }
    /// 1.05 times the largest total outflow (1 if every state is absorbing).
    double uniformization_rate() const { return uniformization_rate_; }

    const std::vector<int>& bounds() const { return bounds_; }
    ActionMode mode() const { return mode_; }
    /// The design for fixed-design models.
    const std::optional<Design>& design() const { return design_; }
    const ModelOptions& options() const { return options_; }

    /// One line per post-decision state: id, encoding, cost pair, outgoing edges.
    void dump(std::ostream& out) const;

private:
    void build(const Instance& instance, std::vector<SystemState> states);
    std::uint64_t encode(const SystemState& state) const;

    std::vector<int> bounds_;
    std::vector<std::uint64_t> strides_;
    ActionMode mode_ = ActionMode::FixedDesign;
    std::optional<Design> design_;
    ModelOptions options_;
    std::vector<SystemState> states_;
    std::vector<std::uint64_t> codes_;  // ascending; empty when code == id
    std::vector<std::size_t> action_offsets_;
    std::vector<int> action_targets_;
    std::vector<std::size_t> transition_offsets_;
    std::vector<Transition> transitions_;
    std::vector<double> outflow_;
    std::vector<CostPair> costs_;
    double uniformization_rate_ = 1.0;
    int all_healthy_ = -1;
};

struct CommunicationReport {
    bool weakly_communicating = false;
    /// States no state-action pair can move into; transient under every policy.
    std::vector<int> never_entered;
    /// The all-repairing state is among never_entered (vacuous for the empty design).
    bool all_repairing_transient = false;
    std::size_t communicating_states = 0;
    std::string message;
};

/// Structural check on the union graph of all state-action transitions: states
/// never entered are transient under every policy; the rest must be strongly
/// connected.
CommunicationReport check_weakly_communicating(const CtmdpModel& model);

}  // namespace iddmp
