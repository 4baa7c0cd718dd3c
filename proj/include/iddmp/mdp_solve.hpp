#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "iddmp/ctmdp.hpp"

namespace iddmp {

/// Deterministic stationary policy stored as the chosen post-decision state per
/// state id. The action vector is recovered with CtmdpModel::action_vector.
struct MaintenancePolicy {
    std::vector<int> post;

    std::size_t size() const { return post.size(); }
    bool operator==(const MaintenancePolicy&) const = default;
};

/// Long-run operational cost rate and fraction of time failed.
struct GainPair {
    double g_o = 0.0;
    double g_f = 0.0;

    /// Natural log of g_f; -infinity when g_f < 1e-300.
    double log_g_f() const;
};

double log_failure(double g_f);

struct SolveOptions {
    /// Span tolerance on successive value differences, relative to the one-step
    /// gain when that exceeds 1. The span is never required to drop below the
    /// rounding noise of the relative values.
    double tolerance = 1e-10;
    long max_iterations = 1'000'000;
};

struct SolveResult {
    MaintenancePolicy policy;
    double gain = 0.0;  ///< scalarized g_o + p g_f
    bool converged = false;
    long iterations = 0;
    double span = 0.0;
    double penalty = 0.0;
};

/// Relative value iteration on the uniformized model for cost c^o + p c^f.
/// Greedy ties go to the lexicographically smallest action.
SolveResult solve_average_cost(const CtmdpModel& model, double penalty,
                               const SolveOptions& options = {});

/// Scalarized gain of a fixed policy by value iteration on its induced chain.
/// Only meaningful when the policy's chain has a single recurrent class; used as
/// an independent cross-check of evaluate_policy.
SolveResult policy_gain_by_iteration(const CtmdpModel& model, const MaintenancePolicy& policy,
                                     double penalty, const SolveOptions& options = {});

/// Exact long-run objectives of `policy` started in `initial_state`, via the
/// stationary distributions of the closed classes reachable from the initial
/// post-decision state.
GainPair evaluate_policy(const CtmdpModel& model, const MaintenancePolicy& policy,
                         int initial_state);

/// Repairs every damaged copy immediately.
MaintenancePolicy fully_active_policy(const CtmdpModel& model);

/// Throws if some entry is not a feasible post-decision state of its state.
void check_policy(const CtmdpModel& model, const MaintenancePolicy& policy);

/// One line per state: "<state> <action>", e.g. "(0,1)(2,0) 1,0".
void write_policy(std::ostream& out, const CtmdpModel& model, const MaintenancePolicy& policy);
MaintenancePolicy read_policy(std::istream& in, const CtmdpModel& model);

/// Compact one-line encoding "a;a;..." of the action of every state in id order,
/// actions written as comma-separated counts.
std::string encode_policy(const CtmdpModel& model, const MaintenancePolicy& policy);
MaintenancePolicy decode_policy(const std::string& text, const CtmdpModel& model);

}  // namespace iddmp
