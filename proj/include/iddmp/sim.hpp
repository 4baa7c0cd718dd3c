#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "iddmp/ctmdp.hpp"
#include "iddmp/mdp_solve.hpp"

namespace iddmp {

struct SimReport {
    double g_o = 0.0;
    double g_f = 0.0;
    double se_o = 0.0;  ///< batch-means standard errors
    double se_f = 0.0;
    double horizon = 0.0;
    int batches = 0;
    std::uint64_t seed = 0;
    std::uint64_t events = 0;
    std::uint64_t failure_events = 0;  ///< entries into a state with no healthy copy
    /// Fewer than 100 failure events: g_f and its error are unreliable.
    bool few_failures = false;
};

struct SimOptions {
    double horizon = 1e6;
    int batches = 20;
    std::uint64_t seed = 1;
    int initial_state = -1;  ///< -1: the all-healthy state
    std::ostream* trace = nullptr;  ///< "time state event" lines
    std::size_t trace_limit = 10000;
};

/// Simulates the post-decision chain of `policy` with competing exponential
/// clocks. The horizon is split into equal consecutive batches; batch b draws
/// from its own stream seeded by splitmix64(seed + b), which memorylessness
/// allows at batch boundaries.
SimReport simulate_policy(const CtmdpModel& model, const MaintenancePolicy& policy,
                          const SimOptions& options = {});

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace iddmp
